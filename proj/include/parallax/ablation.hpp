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

#ifndef PARALLAX_ABLATION_HPP_
#define PARALLAX_ABLATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "parallax/scene.hpp"

namespace parallax {

struct AblationConfig {
  std::vector<int> ns = {1, 2, 3};
  std::vector<double> sigmas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  std::vector<ScenePreset> presets = {ScenePreset::kMacro, ScenePreset::kTrucking};
  int fixtures_per_preset = 3;
  int size = 128;
  std::uint64_t seed = 0;
  // Each timing is the minimum over this many runs.
  int timing_repeats = 3;
};

struct AblationRow {
  ScenePreset preset;
  int fixture;
  double sigma;
  int n;
  int layers;
  double psnr;
  double ssim;
  double time_s;
  std::size_t kernel_bytes;
};

// Compositing blur against the pixel-wise reference on smooth-depth scenes,
// for every (fixture, sigma, n). Rows are ordered by preset, fixture, sigma,
// then n.
std::vector<AblationRow> run_ablation(const AblationConfig& config);

// One row per (preset, sigma, n) with metrics averaged over fixtures, in the
// same order.
std::vector<AblationRow> summarize_ablation(const std::vector<AblationRow>& rows);

// Columns: schema_version,scene,fixture,sigma,n,layers,psnr,ssim,time_s,
// kernel_bytes. Summary rows use fixture "mean".
std::string ablation_csv(const std::vector<AblationRow>& rows, bool summary);

}  // namespace parallax

#endif  // PARALLAX_ABLATION_HPP_
