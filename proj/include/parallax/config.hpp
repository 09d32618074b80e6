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

#ifndef PARALLAX_CONFIG_HPP_
#define PARALLAX_CONFIG_HPP_

#include <filesystem>

#include <json.hpp>

#include "parallax/fit.hpp"
#include "parallax/geometry.hpp"
#include "parallax/kernels.hpp"
#include "parallax/pipeline.hpp"
#include "parallax/siren.hpp"

namespace parallax {

// Version stamped into every JSON/CSV report this library writes.
inline constexpr int kSchemaVersion = 1;

// Camera plus blur-model settings, as stored in a scene config file.
struct SceneConfig {
  CameraIntrinsics intrinsics;
  BlurConfig blur;
};

// Keys: focal_length_m, pixel_pitch_x_m, pixel_pitch_y_m, width, height,
// principal_point_px, n, sigma, d_min_m, reference_index, samples,
// rotation_compose ("convolve" | "add"). Only the first five are required.
SceneConfig scene_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneConfig& config);
SceneConfig load_scene_config(const std::filesystem::path& path);

// Keys mirror FitConfig field names; precision is "float" or "double".
FitConfig fit_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitConfig& config);
FitConfig load_fit_config(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// {width, height, anchor: [x, y], weights: row-major}.
nlohmann::json kernel_to_json(const BlurKernel& kernel);
BlurKernel kernel_from_json(const nlohmann::json& j);
// Grayscale rendering, weights scaled by their maximum.
Image kernel_to_image(const BlurKernel& kernel);

// One-line JSON header (layer shapes, omega0, seed), newline, then every
// parameter as little-endian float32 in SirenNetwork::parameters() order.
void save_checkpoint(const std::filesystem::path& path, const SirenNetwork& net);
SirenNetwork load_checkpoint(const std::filesystem::path& path);

}  // namespace parallax

#endif  // PARALLAX_CONFIG_HPP_
