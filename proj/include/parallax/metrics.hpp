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

#ifndef PARALLAX_METRICS_HPP_
#define PARALLAX_METRICS_HPP_

#include "parallax/raster.hpp"

namespace parallax {

// Reported in place of +infinity for identical images.
inline constexpr double kPsnrIdentical = 99.0;

// Peak signal-to-noise ratio in dB for peak value 1.0, over all channels.
double psnr(const Image& a, const Image& b);

// Mean SSIM over valid 11x11 Gaussian windows (sigma 1.5, K1 = 0.01,
// K2 = 0.03, dynamic range 1), averaged over channels. Both dimensions must
// be at least 11.
double ssim(const Image& a, const Image& b);

}  // namespace parallax

#endif  // PARALLAX_METRICS_HPP_
