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

#include "parallax/siren.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallax/errors.hpp"
#include "parallax/parallel.hpp"

namespace parallax {
namespace {

// Columns per work item. Fixed so that reductions do not depend on the
// number of threads.
constexpr int kChunk = 1024;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

SirenNetwork::SirenNetwork(std::vector<Eigen::MatrixXd> weights,
                           std::vector<Eigen::VectorXd> biases, double omega0,
                           std::uint64_t seed)
    : weights_(std::move(weights)),
      biases_(std::move(biases)),
      omega0_(omega0),
      seed_(seed) {
  if (weights_.empty() || weights_.size() != biases_.size()) {
    throw ContractViolation("SirenNetwork: weights and biases must pair up");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i].rows() != biases_[i].size() ||
        (i > 0 && weights_[i].cols() != weights_[i - 1].rows())) {
      throw ContractViolation("SirenNetwork: inconsistent layer shapes");
    }
  }
  if (!(omega0 > 0.0)) throw ContractViolation("SirenNetwork: omega0 must be > 0");
}

SirenNetwork SirenNetwork::initialize(int channels, int hidden_layers,
                                      int hidden_width, double omega0,
                                      std::uint64_t seed) {
  if (channels < 1 || hidden_layers < 1 || hidden_width < 1) {
    throw ContractViolation("SirenNetwork: invalid architecture");
  }
  std::mt19937_64 rng(seed);
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  int fan_in = 2;
  for (int layer = 0; layer <= hidden_layers; ++layer) {
    const int fan_out = layer == hidden_layers ? channels : hidden_width;
    const double w_bound =
        layer == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / omega0;
    const double b_bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int c = 0; c < fan_in; ++c) {
      for (int r = 0; r < fan_out; ++r) w(r, c) = uniform(rng, -w_bound, w_bound);
    }
    Eigen::VectorXd b(fan_out);
    for (int r = 0; r < fan_out; ++r) b(r) = uniform(rng, -b_bound, b_bound);
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
    fan_in = fan_out;
  }
  return SirenNetwork(std::move(weights), std::move(biases), omega0, seed);
}

std::size_t SirenNetwork::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    n += weights_[i].size() + biases_[i].size();
  }
  return n;
}

Eigen::VectorXd SirenNetwork::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index o = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    flat.segment(o, weights_[i].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights_[i].data(), weights_[i].size());
    o += weights_[i].size();
    flat.segment(o, biases_[i].size()) = biases_[i];
    o += biases_[i].size();
  }
  return flat;
}

void SirenNetwork::set_parameters(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw ContractViolation("SirenNetwork: parameter vector size mismatch");
  }
  Eigen::Index o = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    Eigen::Map<Eigen::VectorXd>(weights_[i].data(), weights_[i].size()) =
        flat.segment(o, weights_[i].size());
    o += weights_[i].size();
    biases_[i] = flat.segment(o, biases_[i].size());
    o += biases_[i].size();
  }
}

bool SirenNetwork::operator==(const SirenNetwork& other) const {
  if (omega0_ != other.omega0_ || seed_ != other.seed_ ||
      weights_.size() != other.weights_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i].rows() != other.weights_[i].rows() ||
        weights_[i].cols() != other.weights_[i].cols() ||
        weights_[i] != other.weights_[i] || biases_[i] != other.biases_[i]) {
      return false;
    }
  }
  return true;
}

Eigen::MatrixXd pixel_coordinates(int width, int height) {
  if (width < 1 || height < 1) throw ContractViolation("render: empty grid");
  const double scale = std::max(width, height);
  Eigen::MatrixXd coords(2, static_cast<Eigen::Index>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Index n = static_cast<Eigen::Index>(y) * width + x;
      coords(0, n) = (2.0 * x + 1.0 - width) / scale;
      coords(1, n) = (2.0 * y + 1.0 - height) / scale;
    }
  }
  return coords;
}

class SirenTape::Impl {
 public:
  virtual ~Impl() = default;
  virtual Eigen::VectorXd gradient(const Eigen::MatrixXd& output_grad) const = 0;

  Eigen::MatrixXd output;
};

namespace {

template <typename Scalar>
class TapeImpl final : public SirenTape::Impl {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Chunk {
    Eigen::Index begin = 0;
    Eigen::Index cols = 0;
    // Input of every layer (coords first).
    std::vector<Mat> inputs;
    // omega0 * cos(omega0 * u) for every hidden layer.
    std::vector<Mat> slopes;
  };

 public:
  TapeImpl(const SirenNetwork& net, const Eigen::MatrixXd& coords, bool keep)
      : omega0_(static_cast<Scalar>(net.omega0())),
        param_count_(net.parameter_count()) {
    if (coords.rows() != net.input_size()) {
      throw ContractViolation("siren: coordinates must be 2 x N");
    }
    for (int i = 0; i < net.layer_count(); ++i) {
      weights_.push_back(net.weight(i).cast<Scalar>());
      biases_.push_back(net.bias(i).cast<Scalar>());
    }
    const Eigen::Index n = coords.cols();
    const Eigen::Index count = (n + kChunk - 1) / kChunk;
    chunks_.resize(count);
    output.resize(net.output_size(), n);
    parallel_for(0, static_cast<int>(count), [&](int lo, int hi) {
      for (int c = lo; c < hi; ++c) {
        Chunk& chunk = chunks_[c];
        chunk.begin = static_cast<Eigen::Index>(c) * kChunk;
        chunk.cols = std::min<Eigen::Index>(kChunk, n - chunk.begin);
        forward_chunk(coords, chunk, keep);
        if (!keep) chunk = Chunk{};
      }
    });
  }

  Eigen::VectorXd gradient(const Eigen::MatrixXd& output_grad) const override {
    if (output_grad.rows() != output.rows() || output_grad.cols() != output.cols()) {
      throw ContractViolation("siren: output gradient shape mismatch");
    }
    std::vector<Eigen::VectorXd> partial(chunks_.size());
    parallel_for(0, static_cast<int>(chunks_.size()), [&](int lo, int hi) {
      for (int c = lo; c < hi; ++c) partial[c] = backward_chunk(output_grad, chunks_[c]);
    });
    Eigen::VectorXd total = Eigen::VectorXd::Zero(param_count_);
    for (const auto& p : partial) total += p;
    return total;
  }

 private:
  void forward_chunk(const Eigen::MatrixXd& coords, Chunk& chunk, bool keep) {
    const int layers = static_cast<int>(weights_.size());
    Mat z = coords.middleCols(chunk.begin, chunk.cols).template cast<Scalar>();
    for (int i = 0; i + 1 < layers; ++i) {
      Mat u = (weights_[i] * z).colwise() + biases_[i];
      u *= omega0_;
      if (keep) chunk.slopes.push_back(omega0_ * u.array().cos().matrix());
      Mat next = u.array().sin().matrix();
      if (keep) chunk.inputs.push_back(std::move(z));
      z = std::move(next);
    }
    Mat out = (weights_.back() * z).colwise() + biases_.back();
    if (keep) chunk.inputs.push_back(std::move(z));
    output.middleCols(chunk.begin, chunk.cols) = out.template cast<double>();
  }

  Eigen::VectorXd backward_chunk(const Eigen::MatrixXd& output_grad,
                                 const Chunk& chunk) const {
    if (chunk.inputs.empty()) {
      throw ContractViolation("siren: tape was recorded without activations");
    }
    const int layers = static_cast<int>(weights_.size());
    std::vector<Mat> grad_w(layers);
    std::vector<Vec> grad_b(layers);
    Mat delta = output_grad.middleCols(chunk.begin, chunk.cols).template cast<Scalar>();
    for (int i = layers - 1; i >= 0; --i) {
      if (i + 1 < layers) delta = delta.cwiseProduct(chunk.slopes[i]);
      grad_w[i].noalias() = delta * chunk.inputs[i].transpose();
      grad_b[i] = delta.rowwise().sum();
      if (i > 0) delta = weights_[i].transpose() * delta;
    }
    Eigen::VectorXd flat(param_count_);
    Eigen::Index o = 0;
    for (int i = 0; i < layers; ++i) {
      const Eigen::Index nw = grad_w[i].size();
      flat.segment(o, nw) =
          Eigen::Map<const Vec>(grad_w[i].data(), nw).template cast<double>();
      o += nw;
      flat.segment(o, grad_b[i].size()) = grad_b[i].template cast<double>();
      o += grad_b[i].size();
    }
    return flat;
  }

  Scalar omega0_;
  std::size_t param_count_;
  std::vector<Mat> weights_;
  std::vector<Vec> biases_;
  std::vector<Chunk> chunks_;
};

std::unique_ptr<SirenTape::Impl> make_tape(const SirenNetwork& net,
                                           const Eigen::MatrixXd& coords,
                                           Precision precision, bool keep) {
  if (precision == Precision::kFloat) {
    return std::make_unique<TapeImpl<float>>(net, coords, keep);
  }
  return std::make_unique<TapeImpl<double>>(net, coords, keep);
}

}  // namespace

SirenTape::SirenTape(const SirenNetwork& net, const Eigen::MatrixXd& coords,
                     Precision precision)
    : impl_(make_tape(net, coords, precision, true)) {}

SirenTape::~SirenTape() = default;
SirenTape::SirenTape(SirenTape&&) noexcept = default;
SirenTape& SirenTape::operator=(SirenTape&&) noexcept = default;

const Eigen::MatrixXd& SirenTape::output() const { return impl_->output; }

Eigen::VectorXd SirenTape::gradient(const Eigen::MatrixXd& output_grad) const {
  return impl_->gradient(output_grad);
}

Eigen::MatrixXd siren_forward(const SirenNetwork& net, const Eigen::MatrixXd& coords,
                              Precision precision) {
  return std::move(make_tape(net, coords, precision, false)->output);
}

ImageD outputs_to_image(const Eigen::MatrixXd& outputs, int width, int height) {
  if (outputs.cols() != static_cast<Eigen::Index>(width) * height) {
    throw ContractViolation("outputs_to_image: size mismatch");
  }
  ImageD image(width, height, static_cast<int>(outputs.rows()));
  for (int c = 0; c < image.channels(); ++c) {
    auto dst = image.plane(c).values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = outputs(c, i);
  }
  return image;
}

Eigen::MatrixXd image_to_outputs(const ImageD& image) {
  Eigen::MatrixXd out(image.channels(), static_cast<Eigen::Index>(image.pixel_count()));
  for (int c = 0; c < image.channels(); ++c) {
    auto src = image.plane(c).values();
    for (std::size_t i = 0; i < src.size(); ++i) out(c, i) = src[i];
  }
  return out;
}

ImageD render(const SirenNetwork& net, int width, int height, Precision precision) {
  return outputs_to_image(siren_forward(net, pixel_coordinates(width, height), precision),
                          width, height);
}

}  // namespace parallax
