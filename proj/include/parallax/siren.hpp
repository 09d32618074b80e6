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

#ifndef PARALLAX_SIREN_HPP_
#define PARALLAX_SIREN_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "parallax/raster.hpp"

namespace parallax {

enum class Precision { kFloat, kDouble };

// Coordinate MLP with sine activations: 2 -> hidden... -> channels, last layer
// linear. Parameters are held in double precision.
class SirenNetwork {
 public:
  SirenNetwork(std::vector<Eigen::MatrixXd> weights,
               std::vector<Eigen::VectorXd> biases, double omega0,
               std::uint64_t seed = 0);

  // Hidden layers use U(-sqrt(6/fan_in)/omega0, +sqrt(6/fan_in)/omega0); the
  // first layer U(-1/fan_in, 1/fan_in); biases U(-1/sqrt(fan_in), ...).
  static SirenNetwork initialize(int channels, int hidden_layers, int hidden_width,
                                 double omega0, std::uint64_t seed);

  int layer_count() const { return static_cast<int>(weights_.size()); }
  int input_size() const { return static_cast<int>(weights_.front().cols()); }
  int output_size() const { return static_cast<int>(weights_.back().rows()); }
  double omega0() const { return omega0_; }
  std::uint64_t seed() const { return seed_; }

  const Eigen::MatrixXd& weight(int layer) const { return weights_[layer]; }
  const Eigen::VectorXd& bias(int layer) const { return biases_[layer]; }

  // Flattened as [W_0 (column-major), b_0, W_1, b_1, ...].
  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  bool operator==(const SirenNetwork&) const;

 private:
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  double omega0_;
  std::uint64_t seed_;
};

// 2 x N matrix of pixel-center coordinates in row-major pixel order. The
// longer image axis spans [-1, 1] edge to edge.
Eigen::MatrixXd pixel_coordinates(int width, int height);

// channels x N outputs for 2 x N coordinates.
Eigen::MatrixXd siren_forward(const SirenNetwork& net, const Eigen::MatrixXd& coords,
                              Precision precision = Precision::kDouble);

ImageD render(const SirenNetwork& net, int width, int height,
              Precision precision = Precision::kDouble);

// Forward pass that keeps the activations needed for a vector-Jacobian
// product with respect to the flattened parameters.
class SirenTape {
 public:
  SirenTape(const SirenNetwork& net, const Eigen::MatrixXd& coords,
            Precision precision);
  ~SirenTape();
  SirenTape(SirenTape&&) noexcept;
  SirenTape& operator=(SirenTape&&) noexcept;

  const Eigen::MatrixXd& output() const;
  // output_grad is channels x N; the result is laid out like parameters().
  Eigen::VectorXd gradient(const Eigen::MatrixXd& output_grad) const;

  class Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// Helpers between channels x N network outputs and planar images.
ImageD outputs_to_image(const Eigen::MatrixXd& outputs, int width, int height);
Eigen::MatrixXd image_to_outputs(const ImageD& image);

}  // namespace parallax

#endif  // PARALLAX_SIREN_HPP_
