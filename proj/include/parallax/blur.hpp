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

#ifndef PARALLAX_BLUR_HPP_
#define PARALLAX_BLUR_HPP_

#include <span>
#include <vector>

#include "parallax/kernels.hpp"
#include "parallax/layering.hpp"
#include "parallax/raster.hpp"

namespace parallax {

// y(p) = sum_u k(u) x(p - u), with edge replication at the borders.
template <typename T>
BasicImage<T> convolve(const BasicImage<T>& image, const BlurKernel& kernel);

// Image compositing blur: y = sum_l (x * k_l) . A_l. Layers whose matte is
// identically zero are skipped.
template <typename T>
BasicImage<T> icb_forward(const BasicImage<T>& image,
                          std::span<const BlurKernel> kernels,
                          std::span<const FloatRaster> mattes);

// Pixel-wise blur: every output pixel uses the kernel of its own depth.
template <typename T>
BasicImage<T> pwb_forward(const BasicImage<T>& image,
                          const PixelwiseKernelField& field);

Image pwb_forward(const Image& image, const DepthMap& depth,
                  const Trajectory& trajectory, const CameraIntrinsics& intrinsics);

// A linear blur b: x -> y together with its exact adjoint (border
// replication included), as needed for gradient-based fitting.
class BlurOperator {
 public:
  virtual ~BlurOperator() = default;
  virtual ImageD apply(const ImageD& x) const = 0;
  virtual ImageD adjoint(const ImageD& y) const = 0;
};

class IdentityBlur final : public BlurOperator {
 public:
  ImageD apply(const ImageD& x) const override { return x; }
  ImageD adjoint(const ImageD& y) const override { return y; }
};

class IcbBlur final : public BlurOperator {
 public:
  IcbBlur(std::vector<BlurKernel> kernels, std::vector<FloatRaster> mattes);

  ImageD apply(const ImageD& x) const override;
  ImageD adjoint(const ImageD& y) const override;

 private:
  std::vector<BlurKernel> kernels_;
  std::vector<FloatRaster> mattes_;
};

// Uniform blur with one kernel.
class KernelBlur final : public BlurOperator {
 public:
  explicit KernelBlur(BlurKernel kernel);

  ImageD apply(const ImageD& x) const override;
  ImageD adjoint(const ImageD& y) const override;

 private:
  BlurKernel kernel_;
};

class PwbBlur final : public BlurOperator {
 public:
  explicit PwbBlur(const PixelwiseKernelField& field);

  ImageD apply(const ImageD& x) const override;
  ImageD adjoint(const ImageD& y) const override;

 private:
  int width_;
  int height_;
  // Tap lists shared by all pixels of equal depth, and the per-pixel index.
  std::vector<std::vector<KernelTap>> tap_sets_;
  std::vector<int> pixel_set_;
};

}  // namespace parallax

#endif  // PARALLAX_BLUR_HPP_
