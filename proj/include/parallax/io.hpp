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

#ifndef PARALLAX_IO_HPP_
#define PARALLAX_IO_HPP_

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include "parallax/geometry.hpp"
#include "parallax/raster.hpp"

namespace parallax {

// Writes through a temporary file in the same directory and renames it into
// place, so readers never observe a partial file.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& writer);
void write_text_atomically(const std::filesystem::path& path, const std::string& text);

// PNG (8/16-bit gray or RGB, alpha dropped) or binary PGM/PPM (P5/P6).
// Intensities map to [0,1].
Image load_image(const std::filesystem::path& path);

// Format chosen by extension (.png, .pgm, .ppm). Values are clamped to [0,1]
// and quantized with round half away from zero.
void save_image(const std::filesystem::path& path, const Image& image,
                int bit_depth = 8);

// Grayscale PFM ("Pf"). Rows are stored bottom-up; a negative scale means
// little-endian samples.
FloatRaster load_pfm(const std::filesystem::path& path);
void save_pfm(const std::filesystem::path& path, const FloatRaster& raster);

// PFM plus depth validation (finite and > 0).
DepthMap load_depth(const std::filesystem::path& path);
void save_depth(const std::filesystem::path& path, const DepthMap& depth);

// CSV with header t_s,tx_m,ty_m,tz_m,qw,qx,qy,qz. Quaternions within 1e-3
// of unit norm are renormalized, others rejected.
Trajectory load_trajectory(const std::filesystem::path& path,
                           std::optional<int> reference_index = {});
void save_trajectory(const std::filesystem::path& path, const Trajectory& trajectory);

}  // namespace parallax

#endif  // PARALLAX_IO_HPP_
