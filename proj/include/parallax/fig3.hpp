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

#ifndef PARALLAX_FIG3_HPP_
#define PARALLAX_FIG3_HPP_

#include <string>
#include <vector>

namespace parallax {

struct Fig3Config {
  double focal_length = 2.8e-3;
  double pixel_pitch = 4e-6;
  // Camera displacement of the variation curves, meters.
  double displacement = 3e-3;
  // Blur variation held fixed by the displacement curves, pixels.
  double target_variation_px = 10.0;
  std::vector<double> near_depths = {0.1, 0.25, 0.5, 1.0};
  double delta_min = 0.01;
  double delta_max = 10.0;
  int points = 200;
};

struct Fig3Point {
  double near_depth;
  double delta_depth;
  // Blur variation at the configured displacement.
  double variation_px;
  // Displacement that yields the target variation.
  double displacement_m;
};

// Camera displacement for which two points at near_depth and
// near_depth + delta_depth differ in blur extent by `variation_px`.
double displacement_for_variation(double variation_px, double near_depth,
                                  double delta_depth, double focal_length,
                                  double pixel_pitch);

// Log-spaced depth differences for every near depth.
std::vector<Fig3Point> fig3_data(const Fig3Config& config);

// Columns: schema_version,near_depth_m,delta_depth_m,variation_px,
// displacement_m.
std::string fig3_csv(const std::vector<Fig3Point>& points);

}  // namespace parallax

#endif  // PARALLAX_FIG3_HPP_
