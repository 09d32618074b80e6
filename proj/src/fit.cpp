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

#include "parallax/fit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "parallax/errors.hpp"

namespace parallax {

void FitConfig::validate() const {
  if (iterations < 1) throw DomainError("fit: iterations must be >= 1");
  if (!(learning_rate > 0.0) || !(lr_min > 0.0) || lr_min > learning_rate) {
    throw DomainError("fit: need 0 < lr_min <= learning_rate");
  }
  if (lambda < 0.0) throw DomainError("fit: lambda must be >= 0");
  if (!(grad_clip_norm > 0.0)) throw DomainError("fit: grad_clip_norm must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0)) {
    throw DomainError("fit: invalid Adam constants");
  }
  if (hidden_layers < 1 || hidden_width < 1 || !(omega0 > 0.0)) {
    throw DomainError("fit: invalid network shape");
  }
}

double cosine_learning_rate(const FitConfig& config, int step) {
  const double c =
      0.5 * (1.0 + std::cos(std::numbers::pi * step / config.iterations));
  return config.learning_rate * c + config.lr_min * (1.0 - c);
}

double total_variation(const ImageD& image) {
  double tv = 0.0;
  const int w = image.width();
  const int h = image.height();
  for (int c = 0; c < image.channels(); ++c) {
    const auto& p = image.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x + 1 < w) tv += std::abs(p(x + 1, y) - p(x, y));
        if (y + 1 < h) tv += std::abs(p(x, y + 1) - p(x, y));
      }
    }
  }
  return tv;
}

ImageD total_variation_gradient(const ImageD& image) {
  const int w = image.width();
  const int h = image.height();
  ImageD g(w, h, image.channels(), 0.0);
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (int c = 0; c < image.channels(); ++c) {
    const auto& p = image.plane(c);
    auto& d = g.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x + 1 < w) {
          const double s = sign(p(x + 1, y) - p(x, y));
          d(x + 1, y) += s;
          d(x, y) -= s;
        }
        if (y + 1 < h) {
          const double s = sign(p(x, y + 1) - p(x, y));
          d(x, y + 1) += s;
          d(x, y) -= s;
        }
      }
    }
  }
  return g;
}

LossEvaluation fit_loss(const SirenNetwork& net, const ImageD& observed,
                        const BlurOperator& blur, double lambda,
                        Precision precision, bool with_gradient) {
  if (net.output_size() != observed.channels()) {
    throw ContractViolation("fit_loss: network channels do not match the image");
  }
  const int w = observed.width();
  const int h = observed.height();
  const Eigen::MatrixXd coords = pixel_coordinates(w, h);

  LossEvaluation eval;
  auto evaluate = [&](const Eigen::MatrixXd& outputs) {
    const ImageD sharp = outputs_to_image(outputs, w, h);
    ImageD residual = blur.apply(sharp);
    if (!residual.same_shape(observed)) {
      throw ContractViolation("fit_loss: blurred shape does not match the observation");
    }
    for (int c = 0; c < residual.channels(); ++c) {
      auto r = residual.plane(c).values();
      auto y = observed.plane(c).values();
      for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= y[i];
        eval.data_term += r[i] * r[i];
      }
    }
    eval.smoothness_term = lambda * total_variation(sharp);
    eval.loss = eval.data_term + eval.smoothness_term;
    return std::pair{sharp, residual};
  };

  if (!with_gradient) {
    evaluate(siren_forward(net, coords, precision));
    return eval;
  }
  const SirenTape tape(net, coords, precision);
  const auto [sharp, residual] = evaluate(tape.output());
  ImageD grad = blur.adjoint(residual);
  const ImageD tv = total_variation_gradient(sharp);
  for (int c = 0; c < grad.channels(); ++c) {
    auto g = grad.plane(c).values();
    auto t = tv.plane(c).values();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * g[i] + lambda * t[i];
  }
  eval.gradient = tape.gradient(image_to_outputs(grad));
  return eval;
}

FitResult fit(const ImageD& observed, const BlurOperator& blur,
              const FitConfig& config, const FitProgress& progress) {
  config.validate();
  for (int c = 0; c < observed.channels(); ++c) {
    for (double v : observed.plane(c).values()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("fit: observation must lie in [0,1]");
      }
    }
  }
  SirenNetwork net = SirenNetwork::initialize(observed.channels(), config.hidden_layers,
                                              config.hidden_width, config.omega0,
                                              config.seed);
  Eigen::VectorXd params = net.parameters();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(params.size());

  FitResult result{net, {}, 0.0};
  result.loss_trace.reserve(config.iterations);
  for (int step = 0; step < config.iterations; ++step) {
    net.set_parameters(params);
    LossEvaluation eval =
        fit_loss(net, observed, blur, config.lambda, config.precision, true);
    if (!std::isfinite(eval.loss) || !eval.gradient.allFinite()) {
      throw NumericalError("fit diverged at iteration " + std::to_string(step) +
                           " (loss " + std::to_string(eval.loss) + ")");
    }
    result.loss_trace.push_back(eval.loss);
    if (progress) progress(step, eval.loss);

    Eigen::VectorXd& g = eval.gradient;
    const double norm = g.norm();
    if (norm > config.grad_clip_norm) g *= config.grad_clip_norm / (norm + 1e-6);

    const double lr = cosine_learning_rate(config, step);
    const double t = step + 1;
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseAbs2();
    const double bc1 = 1.0 - std::pow(config.beta1, t);
    const double bc2 = 1.0 - std::pow(config.beta2, t);
    params.array() -= lr * (m.array() / bc1) /
                      ((v.array() / bc2).sqrt() + config.epsilon);
  }
  net.set_parameters(params);
  result.final_loss =
      fit_loss(net, observed, blur, config.lambda, config.precision).loss;
  if (!std::isfinite(result.final_loss)) {
    throw NumericalError("fit diverged after the last step");
  }
  result.network = std::move(net);
  return result;
}

FitResult fit(const Image& observed, const IcbModel& model, const FitConfig& config,
              const FitProgress& progress) {
  const IcbBlur blur(model.kernels, model.layers.mattes);
  return fit(observed.cast<double>(), blur, config, progress);
}

}  // namespace parallax
