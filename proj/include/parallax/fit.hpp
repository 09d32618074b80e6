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

#ifndef PARALLAX_FIT_HPP_
#define PARALLAX_FIT_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "parallax/blur.hpp"
#include "parallax/pipeline.hpp"
#include "parallax/siren.hpp"

namespace parallax {

// Optimization recipe for recovering a sharp image through a known blur.
struct FitConfig {
  int iterations = 400;
  double learning_rate = 5e-4;
  double lr_min = 5e-6;
  // Weight of the L1 smoothness term on the rendered image.
  double lambda = 8e-6;
  double grad_clip_norm = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  int hidden_layers = 4;
  int hidden_width = 192;
  double omega0 = 30.0;
  // Arithmetic of the network passes; parameters and Adam state stay double.
  Precision precision = Precision::kFloat;

  void validate() const;
};

// Cosine annealing from learning_rate at step 0 to lr_min at `iterations`.
double cosine_learning_rate(const FitConfig& config, int step);

// Sum over pixels and channels of |x(p + e_x) - x(p)| + |x(p + e_y) - x(p)|,
// forward differences inside the grid.
double total_variation(const ImageD& image);
// Subgradient of total_variation (sign(0) = 0).
ImageD total_variation_gradient(const ImageD& image);

struct LossEvaluation {
  double loss = 0.0;
  double data_term = 0.0;
  double smoothness_term = 0.0;
  // Same layout as SirenNetwork::parameters(); empty for loss-only calls.
  Eigen::VectorXd gradient;
};

// ||b(render(net)) - y||^2 + lambda * TV(render(net)).
LossEvaluation fit_loss(const SirenNetwork& net, const ImageD& observed,
                        const BlurOperator& blur, double lambda,
                        Precision precision = Precision::kDouble,
                        bool with_gradient = false);

struct FitResult {
  SirenNetwork network;
  // Loss before each optimizer step.
  std::vector<double> loss_trace;
  // Loss after the last step.
  double final_loss = 0.0;
};

using FitProgress = std::function<void(int iteration, double loss)>;

// Full-batch Adam with global-norm gradient clipping. Throws NumericalError
// if the loss becomes non-finite.
FitResult fit(const ImageD& observed, const BlurOperator& blur,
              const FitConfig& config, const FitProgress& progress = {});

// Through the compositing model of a scene.
FitResult fit(const Image& observed, const IcbModel& model, const FitConfig& config,
              const FitProgress& progress = {});

}  // namespace parallax

#endif  // PARALLAX_FIT_HPP_
