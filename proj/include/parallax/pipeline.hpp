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

#ifndef PARALLAX_PIPELINE_HPP_
#define PARALLAX_PIPELINE_HPP_

#include <optional>
#include <vector>

#include "parallax/blur.hpp"
#include "parallax/geometry.hpp"
#include "parallax/kernels.hpp"
#include "parallax/layering.hpp"

namespace parallax {

struct BlurConfig {
  int n = 1;
  double sigma = 4.0;
  // Defaults to the minimum of the depth map.
  std::optional<double> d_min;
  // Uniform time samples of the trajectory (M).
  int samples = 64;
  // Defaults to the middle sample.
  std::optional<int> reference_index;
  RotationCompose rotation_compose = RotationCompose::kConvolve;

  void validate() const;
};

// Everything the compositing model needs for one (depth, trajectory) pair.
struct IcbModel {
  Trajectory trajectory;
  LayerDecomposition layers;
  std::vector<BlurKernel> kernels;
  // Present when the trajectory carries pan/tilt rotation; already folded
  // into `kernels`.
  std::optional<BlurKernel> rotation;
};

// Resampled to config.samples with the configured reference pose.
Trajectory prepare_trajectory(const Trajectory& trajectory, const BlurConfig& config);

IcbModel build_icb_model(const DepthMap& depth, const Trajectory& trajectory,
                         const CameraIntrinsics& intrinsics, const BlurConfig& config);

PixelwiseKernelField build_pwb_field(const DepthMap& depth,
                                     const Trajectory& trajectory,
                                     const CameraIntrinsics& intrinsics,
                                     const BlurConfig& config);

Image blur_icb(const Image& image, const IcbModel& model);

}  // namespace parallax

#endif  // PARALLAX_PIPELINE_HPP_
