/*
 * Copyright 2026 The Parallax Blur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PARALLAX_KERNELS_HPP_
#define PARALLAX_KERNELS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "parallax/geometry.hpp"
#include "parallax/raster.hpp"

namespace parallax {

// Dense motion-blur kernel. Tap (i, j) of the raster holds the weight of the
// displacement (i - anchor_x, j - anchor_y). Weights are nonnegative and sum
// to one.
class BlurKernel {
 public:
  BlurKernel(int width, int height, int anchor_x, int anchor_y,
             std::vector<double> weights);

  static BlurKernel identity();

  int width() const { return width_; }
  int height() const { return height_; }
  int anchor_x() const { return anchor_x_; }
  int anchor_y() const { return anchor_y_; }

  // Displacement range covered by the raster.
  int min_dx() const { return -anchor_x_; }
  int max_dx() const { return width_ - 1 - anchor_x_; }
  int min_dy() const { return -anchor_y_; }
  int max_dy() const { return height_ - 1 - anchor_y_; }

  double weight(int i, int j) const { return weights_[j * width_ + i]; }
  // Weight of displacement (dx, dy); zero outside the raster.
  double at(int dx, int dy) const;
  std::span<const double> weights() const { return weights_; }
  std::size_t tap_count() const { return weights_.size(); }

  bool is_identity() const { return weights_.size() == 1; }

  // Smallest odd (width, height) window centered on the anchor that covers
  // every tap.
  std::pair<int, int> centered_support() const;

  // Kernel of the negated displacements (180-degree rotation).
  BlurKernel mirrored() const;

  bool operator==(const BlurKernel&) const = default;

 private:
  int width_;
  int height_;
  int anchor_x_;
  int anchor_y_;
  std::vector<double> weights_;
};

struct KernelTap {
  int dx;
  int dy;
  double weight;
};

// Nonzero taps in raster order.
std::vector<KernelTap> nonzero_taps(const BlurKernel& kernel);

// Real-valued per-sample pixel displacements relative to the reference pose.
using DisplacementSet = std::vector<Eigen::Vector2d>;

// Precomputed in-plane motion of a trajectory; turns a depth into the pixel
// displacement of every sample.
class ParallaxMotion {
 public:
  ParallaxMotion(const Trajectory& trajectory, const CameraIntrinsics& intrinsics);

  DisplacementSet displacements(double depth) const;
  // Same samples rounded to integer taps.
  void rounded_taps(double depth, std::vector<Eigen::Vector2i>& out) const;
  int samples() const { return static_cast<int>(scaled_.size()); }

 private:
  // -s(t) F / delta per axis; divide by depth to get pixels.
  std::vector<Eigen::Vector2d> scaled_;
};

enum class RotationCompose { kConvolve, kAdd };

DisplacementSet pixel_displacements(const Trajectory& trajectory,
                                    const CameraIntrinsics& intrinsics,
                                    double depth);

// Empirical distribution of the rounded displacements (round half away from
// zero), on the tight bounding box of occupied taps.
BlurKernel epdf_kernel(const DisplacementSet& displacements);
BlurKernel epdf_kernel_from_taps(std::span<const Eigen::Vector2i> taps);

// One kernel per optimal layer depth. Layer 0 lies beyond the no-motion
// limit and always gets the identity kernel.
std::vector<BlurKernel> layer_kernels(const Trajectory& trajectory,
                                      const CameraIntrinsics& intrinsics,
                                      std::span<const double> optimal_depths);

// Depth-independent kernel approximating pan/tilt rotation as an xy shift.
BlurKernel rotation_kernel(const Trajectory& trajectory,
                           const CameraIntrinsics& intrinsics);

// kConvolve: full discrete convolution, anchors add.
// kAdd: anchor-aligned average of the two kernels.
BlurKernel compose_kernels(const BlurKernel& a, const BlurKernel& b,
                           RotationCompose mode = RotationCompose::kConvolve);

// Per-pixel kernels of the pixel-wise blur model, computed on demand.
class PixelwiseKernelField {
 public:
  PixelwiseKernelField(const Trajectory& trajectory,
                       const CameraIntrinsics& intrinsics, DepthMap depth,
                       std::optional<BlurKernel> rotation = {},
                       RotationCompose mode = RotationCompose::kConvolve);

  int width() const { return depth_.width(); }
  int height() const { return depth_.height(); }
  const DepthMap& depth() const { return depth_; }

  BlurKernel kernel_at(int x, int y) const;
  BlurKernel kernel_for_depth(double depth) const;

  // Every pixel's kernel, row-major.
  std::vector<BlurKernel> materialize() const;

 private:
  ParallaxMotion motion_;
  DepthMap depth_;
  std::optional<BlurKernel> rotation_;
  RotationCompose mode_;
};

// Number of stored weights over a set of kernels.
std::size_t kernel_storage_weights(std::span<const BlurKernel> kernels);

}  // namespace parallax

#endif  // PARALLAX_KERNELS_HPP_
