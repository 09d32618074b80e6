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

#include "parallax/ablation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

#include "parallax/blur.hpp"
#include "parallax/config.hpp"
#include "parallax/errors.hpp"
#include "parallax/metrics.hpp"
#include "parallax/pipeline.hpp"

namespace parallax {
namespace {

struct Prepared {
  SceneFixture scene;
  Image reference;
  ScenePreset preset;
  int index;
};

std::uint64_t fixture_seed(std::uint64_t base, ScenePreset preset, int index) {
  return base * 1000003ULL + static_cast<std::uint64_t>(preset) * 1000ULL +
         static_cast<std::uint64_t>(index);
}

}  // namespace

std::vector<AblationRow> run_ablation(const AblationConfig& config) {
  if (config.ns.empty() || config.sigmas.empty() || config.presets.empty()) {
    throw DomainError("ablation: empty parameter grid");
  }
  if (config.fixtures_per_preset < 1) throw DomainError("ablation: need at least one fixture");
  if (config.timing_repeats < 1) throw DomainError("ablation: timing_repeats must be >= 1");

  std::vector<Prepared> fixtures;
  for (ScenePreset preset : config.presets) {
    for (int i = 0; i < config.fixtures_per_preset; ++i) {
      SceneFixture scene =
          gen_smooth_scene(preset, config.size, fixture_seed(config.seed, preset, i));
      // Same trajectory preparation as the compositing runs below.
      Image reference = pwb_forward(
          scene.sharp,
          build_pwb_field(scene.depth, scene.trajectory, scene.intrinsics, BlurConfig{}));
      fixtures.push_back({std::move(scene), std::move(reference), preset, i});
    }
  }

  std::vector<AblationRow> rows;
  for (const Prepared& f : fixtures) {
    for (double sigma : config.sigmas) {
      for (int n : config.ns) {
        BlurConfig blur;
        blur.n = n;
        blur.sigma = sigma;
        double best = std::numeric_limits<double>::infinity();
        Image output;
        int layers = 0;
        std::size_t weights = 0;
        for (int r = 0; r < config.timing_repeats; ++r) {
          const auto start = std::chrono::steady_clock::now();
          IcbModel model =
              build_icb_model(f.scene.depth, f.scene.trajectory, f.scene.intrinsics, blur);
          output = blur_icb(f.scene.sharp, model);
          const std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - start;
          best = std::min(best, elapsed.count());
          layers = model.layers.layer_count();
          weights = kernel_storage_weights(model.kernels);
        }
        rows.push_back({f.preset, f.index, sigma, n, layers, psnr(output, f.reference),
                        ssim(output, f.reference), best, weights * sizeof(double)});
      }
    }
  }
  return rows;
}

std::vector<AblationRow> summarize_ablation(const std::vector<AblationRow>& rows) {
  std::map<std::tuple<int, double, int>, std::pair<AblationRow, int>> groups;
  std::vector<std::tuple<int, double, int>> order;
  for (const AblationRow& r : rows) {
    const auto key = std::make_tuple(static_cast<int>(r.preset), r.sigma, r.n);
    auto [it, inserted] = groups.try_emplace(key, r, 0);
    if (inserted) {
      order.push_back(key);
      it->second.first = {r.preset, -1, r.sigma, r.n, 0, 0.0, 0.0, 0.0, 0};
    }
    AblationRow& acc = it->second.first;
    acc.layers += r.layers;
    acc.psnr += r.psnr;
    acc.ssim += r.ssim;
    acc.time_s += r.time_s;
    acc.kernel_bytes += r.kernel_bytes;
    ++it->second.second;
  }
  std::vector<AblationRow> out;
  for (const auto& key : order) {
    auto [acc, count] = groups.at(key);
    acc.layers /= count;
    acc.psnr /= count;
    acc.ssim /= count;
    acc.time_s /= count;
    acc.kernel_bytes /= count;
    out.push_back(acc);
  }
  return out;
}

std::string ablation_csv(const std::vector<AblationRow>& rows, bool summary) {
  std::string csv =
      "schema_version,scene,fixture,sigma,n,layers,psnr,ssim,time_s,kernel_bytes\n";
  char line[256];
  for (const AblationRow& r : rows) {
    const std::string fixture = summary ? "mean" : std::to_string(r.fixture);
    std::snprintf(line, sizeof line, "%d,%s,%s,%.17g,%d,%d,%.17g,%.17g,%.9f,%zu\n",
                  kSchemaVersion, to_string(r.preset).c_str(), fixture.c_str(), r.sigma,
                  r.n, r.layers, r.psnr, r.ssim, r.time_s, r.kernel_bytes);
    csv += line;
  }
  return csv;
}

}  // namespace parallax
