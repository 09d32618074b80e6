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

#include "parallax/fig3.hpp"

#include <cmath>
#include <cstdio>

#include "parallax/config.hpp"
#include "parallax/errors.hpp"
#include "parallax/geometry.hpp"

namespace parallax {

double displacement_for_variation(double variation_px, double near_depth,
                                  double delta_depth, double focal_length,
                                  double pixel_pitch) {
  if (!(near_depth > 0.0) || !(delta_depth > 0.0)) {
    throw DomainError("displacement_for_variation: depths must be > 0");
  }
  if (!(focal_length > 0.0) || !(pixel_pitch > 0.0)) {
    throw DomainError("displacement_for_variation: optics must be > 0");
  }
  return variation_px * pixel_pitch * near_depth * (near_depth / delta_depth + 1.0) /
         focal_length;
}

std::vector<Fig3Point> fig3_data(const Fig3Config& config) {
  if (config.points < 2) throw DomainError("fig3: need at least 2 points per curve");
  if (!(config.delta_min > 0.0) || !(config.delta_max > config.delta_min)) {
    throw DomainError("fig3: need 0 < delta_min < delta_max");
  }
  const CameraIntrinsics optics(config.focal_length, config.pixel_pitch,
                                config.pixel_pitch, 1, 1);
  const double log_lo = std::log(config.delta_min);
  const double log_hi = std::log(config.delta_max);
  std::vector<Fig3Point> out;
  for (double near : config.near_depths) {
    for (int i = 0; i < config.points; ++i) {
      const double delta =
          std::exp(log_lo + (log_hi - log_lo) * i / (config.points - 1));
      Fig3Point p;
      p.near_depth = near;
      p.delta_depth = delta;
      p.variation_px =
          blur_variation(config.displacement, optics, near, delta) / config.pixel_pitch;
      p.displacement_m = displacement_for_variation(
          config.target_variation_px, near, delta, config.focal_length, config.pixel_pitch);
      out.push_back(p);
    }
  }
  return out;
}

std::string fig3_csv(const std::vector<Fig3Point>& points) {
  std::string csv = "schema_version,near_depth_m,delta_depth_m,variation_px,displacement_m\n";
  char line[160];
  for (const Fig3Point& p : points) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", kSchemaVersion,
                  p.near_depth, p.delta_depth, p.variation_px, p.displacement_m);
    csv += line;
  }
  return csv;
}

}  // namespace parallax
