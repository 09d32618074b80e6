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

#include "parallax/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace parallax {

DepthMap::DepthMap(FloatRaster values) : values_(std::move(values)) {
  std::size_t bad = 0;
  for (float v : values_.values()) {
    if (!std::isfinite(v) || v <= 0.0f) ++bad;
  }
  if (bad > 0) {
    throw DomainError("depth map has " + std::to_string(bad) +
                      " non-positive or non-finite pixels");
  }
  if (values_.empty()) throw DomainError("depth map is empty");
}

DepthMap::DepthMap(int width, int height, float fill)
    : DepthMap(FloatRaster(width, height, fill)) {}

float DepthMap::min_depth() const {
  auto v = values_.values();
  return *std::min_element(v.begin(), v.end());
}

float DepthMap::max_depth() const {
  auto v = values_.values();
  return *std::max_element(v.begin(), v.end());
}

}  // namespace parallax
