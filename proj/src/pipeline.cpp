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

#include "parallax/pipeline.hpp"

#include "parallax/errors.hpp"

namespace parallax {

void BlurConfig::validate() const {
  if (n < 1) throw DomainError("config: n must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("config: sigma must be > 0");
  if (samples < 1) throw DomainError("config: samples must be >= 1");
  if (d_min && !(*d_min > 0.0)) throw DomainError("config: d_min must be > 0");
}

Trajectory prepare_trajectory(const Trajectory& trajectory, const BlurConfig& config) {
  config.validate();
  if (trajectory.size() == 1) return trajectory;
  return trajectory.resampled(config.samples, config.reference_index);
}

IcbModel build_icb_model(const DepthMap& depth, const Trajectory& trajectory,
                         const CameraIntrinsics& intrinsics, const BlurConfig& config) {
  Trajectory traj = prepare_trajectory(trajectory, config);
  const double d_min = config.d_min.value_or(depth.min_depth());
  LayerDecomposition layers =
      partition_depth(depth, depth_sequence_2d(traj, intrinsics, config.n, d_min));
  std::vector<BlurKernel> kernels =
      layer_kernels(traj, intrinsics, layers.optimal_depths);

  std::optional<BlurKernel> rotation;
  if (traj.has_rotation()) {
    rotation = rotation_kernel(traj, intrinsics);
    for (auto& k : kernels) k = compose_kernels(k, *rotation, config.rotation_compose);
  }

  std::vector<std::pair<int, int>> supports;
  supports.reserve(kernels.size());
  for (const auto& k : kernels) supports.push_back(k.centered_support());
  build_mattes(layers, supports, config.sigma);
  return IcbModel{std::move(traj), std::move(layers), std::move(kernels),
                  std::move(rotation)};
}

PixelwiseKernelField build_pwb_field(const DepthMap& depth,
                                     const Trajectory& trajectory,
                                     const CameraIntrinsics& intrinsics,
                                     const BlurConfig& config) {
  Trajectory traj = prepare_trajectory(trajectory, config);
  std::optional<BlurKernel> rotation;
  if (traj.has_rotation()) rotation = rotation_kernel(traj, intrinsics);
  return PixelwiseKernelField(traj, intrinsics, depth, std::move(rotation),
                              config.rotation_compose);
}

Image blur_icb(const Image& image, const IcbModel& model) {
  return icb_forward(image, std::span<const BlurKernel>(model.kernels),
                     std::span<const FloatRaster>(model.layers.mattes));
}

}  // namespace parallax
