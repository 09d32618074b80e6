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

#ifndef PARALLAX_SCENE_HPP_
#define PARALLAX_SCENE_HPP_

#include <cstdint>
#include <string>

#include "parallax/geometry.hpp"
#include "parallax/raster.hpp"

namespace parallax {

enum class ScenePreset { kMacro, kTrucking, kStandard };

std::string to_string(ScenePreset preset);
ScenePreset parse_preset(const std::string& name);

// Procedural stand-in for a captured scene: textured layers at depths
// typical of the preset, with a matching camera path.
//   macro:    nearest layer <= 0.1 m, smooth hand-shake path (<= 3 mm).
//   trucking: far layers, constant-velocity xy path.
//   standard: every depth beyond the no-motion limit of the shake path.
struct SceneFixture {
  Image sharp;
  DepthMap depth;
  Trajectory trajectory;
  CameraIntrinsics intrinsics;
  ScenePreset preset;
};

// Piecewise-constant depth: a background plane plus foreground rectangles.
SceneFixture gen_scene(ScenePreset preset, int size, std::uint64_t seed);

// Smoothly varying depth with no discontinuities (a slanted plane), used
// where the pixel-wise model is an exact reference.
SceneFixture gen_smooth_scene(ScenePreset preset, int size, std::uint64_t seed);

// Sum of low-frequency sinusoids per axis, rescaled so the largest per-axis
// offset from the middle sample equals `amplitude` meters.
Trajectory shake_trajectory(int samples, double amplitude, std::uint64_t seed);

// Constant-velocity in-plane path from -extent/2 to +extent/2 along
// `direction` (radians from the x axis).
Trajectory linear_trajectory(int samples, double extent, double direction);

// Default intrinsics of generated scenes: F = 2.8 mm, 4 um pixels.
CameraIntrinsics scene_intrinsics(int width, int height);

}  // namespace parallax

#endif  // PARALLAX_SCENE_HPP_
