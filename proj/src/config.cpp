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

#include "parallax/config.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "parallax/errors.hpp"
#include "parallax/io.hpp"

namespace parallax {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

template <typename Fn>
auto translate_json_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

}  // namespace

SceneConfig scene_config_from_json(const json& j) {
  return translate_json_errors([&] {
    std::optional<Eigen::Vector2d> pp;
    if (j.contains("principal_point_px") && !j.at("principal_point_px").is_null()) {
      const auto v = j.at("principal_point_px").get<std::vector<double>>();
      if (v.size() != 2) throw DomainError("config: principal_point_px needs 2 values");
      pp = Eigen::Vector2d(v[0], v[1]);
    }
    CameraIntrinsics intrinsics(j.at("focal_length_m").get<double>(),
                                j.at("pixel_pitch_x_m").get<double>(),
                                j.at("pixel_pitch_y_m").get<double>(),
                                j.at("width").get<int>(), j.at("height").get<int>(), pp);
    BlurConfig blur;
    blur.n = get_or(j, "n", blur.n);
    blur.sigma = get_or(j, "sigma", blur.sigma);
    if (j.contains("d_min_m") && !j.at("d_min_m").is_null()) {
      blur.d_min = j.at("d_min_m").get<double>();
    }
    if (j.contains("reference_index") && !j.at("reference_index").is_null()) {
      blur.reference_index = j.at("reference_index").get<int>();
    }
    blur.samples = get_or(j, "samples", blur.samples);
    const std::string compose = get_or<std::string>(j, "rotation_compose", "convolve");
    if (compose == "convolve") {
      blur.rotation_compose = RotationCompose::kConvolve;
    } else if (compose == "add") {
      blur.rotation_compose = RotationCompose::kAdd;
    } else {
      throw DomainError("config: rotation_compose must be 'convolve' or 'add'");
    }
    blur.validate();
    return SceneConfig{intrinsics, blur};
  });
}

json to_json(const SceneConfig& config) {
  const auto& in = config.intrinsics;
  const auto& b = config.blur;
  json j = {
      {"schema_version", kSchemaVersion},
      {"focal_length_m", in.focal_length()},
      {"pixel_pitch_x_m", in.pixel_pitch_x()},
      {"pixel_pitch_y_m", in.pixel_pitch_y()},
      {"width", in.width()},
      {"height", in.height()},
      {"principal_point_px", {in.principal_point().x(), in.principal_point().y()}},
      {"n", b.n},
      {"sigma", b.sigma},
      {"d_min_m", b.d_min ? json(*b.d_min) : json(nullptr)},
      {"reference_index", b.reference_index ? json(*b.reference_index) : json(nullptr)},
      {"samples", b.samples},
      {"rotation_compose",
       b.rotation_compose == RotationCompose::kConvolve ? "convolve" : "add"},
  };
  return j;
}

SceneConfig load_scene_config(const fs::path& path) {
  const json j = read_json(path);
  try {
    return scene_config_from_json(j);
  } catch (const DomainError& e) {
    throw IoError(path.string(), e.what());
  }
}

FitConfig fit_config_from_json(const json& j) {
  return translate_json_errors([&] {
    FitConfig c;
    c.iterations = get_or(j, "iterations", c.iterations);
    c.learning_rate = get_or(j, "learning_rate", c.learning_rate);
    c.lr_min = get_or(j, "lr_min", c.lr_min);
    c.lambda = get_or(j, "lambda", c.lambda);
    c.grad_clip_norm = get_or(j, "grad_clip_norm", c.grad_clip_norm);
    c.beta1 = get_or(j, "beta1", c.beta1);
    c.beta2 = get_or(j, "beta2", c.beta2);
    c.epsilon = get_or(j, "epsilon", c.epsilon);
    c.seed = get_or(j, "seed", c.seed);
    c.hidden_layers = get_or(j, "hidden_layers", c.hidden_layers);
    c.hidden_width = get_or(j, "hidden_width", c.hidden_width);
    c.omega0 = get_or(j, "omega0", c.omega0);
    const std::string precision = get_or<std::string>(j, "precision", "float");
    if (precision == "float") {
      c.precision = Precision::kFloat;
    } else if (precision == "double") {
      c.precision = Precision::kDouble;
    } else {
      throw DomainError("fit config: precision must be 'float' or 'double'");
    }
    c.validate();
    return c;
  });
}

json to_json(const FitConfig& c) {
  return {
      {"schema_version", kSchemaVersion},
      {"iterations", c.iterations},
      {"learning_rate", c.learning_rate},
      {"lr_min", c.lr_min},
      {"lambda", c.lambda},
      {"grad_clip_norm", c.grad_clip_norm},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"epsilon", c.epsilon},
      {"seed", c.seed},
      {"hidden_layers", c.hidden_layers},
      {"hidden_width", c.hidden_width},
      {"omega0", c.omega0},
      {"precision", c.precision == Precision::kFloat ? "float" : "double"},
  };
}

FitConfig load_fit_config(const fs::path& path) {
  const json j = read_json(path);
  try {
    return fit_config_from_json(j);
  } catch (const DomainError& e) {
    throw IoError(path.string(), e.what());
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string(), e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  write_text_atomically(path, j.dump(2) + "\n");
}

json kernel_to_json(const BlurKernel& kernel) {
  return {{"width", kernel.width()},
          {"height", kernel.height()},
          {"anchor", {kernel.anchor_x(), kernel.anchor_y()}},
          {"weights", std::vector<double>(kernel.weights().begin(),
                                          kernel.weights().end())}};
}

BlurKernel kernel_from_json(const json& j) {
  return translate_json_errors([&] {
    const auto anchor = j.at("anchor").get<std::vector<int>>();
    if (anchor.size() != 2) throw DomainError("kernel: anchor needs 2 values");
    return BlurKernel(j.at("width").get<int>(), j.at("height").get<int>(), anchor[0],
                      anchor[1], j.at("weights").get<std::vector<double>>());
  });
}

Image kernel_to_image(const BlurKernel& kernel) {
  double peak = 0.0;
  for (double w : kernel.weights()) peak = std::max(peak, w);
  Image image(kernel.width(), kernel.height(), 1);
  for (int j = 0; j < kernel.height(); ++j) {
    for (int i = 0; i < kernel.width(); ++i) {
      image(i, j, 0) = static_cast<float>(kernel.weight(i, j) / peak);
    }
  }
  return image;
}

void save_checkpoint(const fs::path& path, const SirenNetwork& net) {
  json layers = json::array();
  for (int i = 0; i < net.layer_count(); ++i) {
    layers.push_back({net.weight(i).rows(), net.weight(i).cols()});
  }
  const json header = {{"format", "parallax-siren"},
                       {"schema_version", kSchemaVersion},
                       {"omega0", net.omega0()},
                       {"seed", net.seed()},
                       {"layers", layers},
                       {"parameter_count", net.parameter_count()},
                       {"dtype", "float32-le"}};
  const Eigen::VectorXd params = net.parameters();
  write_atomically(path, [&](std::ostream& out) {
    out << header.dump() << "\n";
    for (Eigen::Index i = 0; i < params.size(); ++i) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(params(i)));
      unsigned char le[4] = {static_cast<unsigned char>(bits),
                             static_cast<unsigned char>(bits >> 8),
                             static_cast<unsigned char>(bits >> 16),
                             static_cast<unsigned char>(bits >> 24)};
      out.write(reinterpret_cast<const char*>(le), 4);
    }
  });
}

SirenNetwork load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  std::getline(in, line);
  json header;
  try {
    header = json::parse(line);
    if (header.at("format") != "parallax-siren") throw IoError(path.string(), "not a checkpoint");
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    for (const auto& shape : header.at("layers")) {
      weights.emplace_back(Eigen::MatrixXd::Zero(shape[0].get<int>(), shape[1].get<int>()));
      biases.emplace_back(Eigen::VectorXd::Zero(shape[0].get<int>()));
    }
    SirenNetwork net(std::move(weights), std::move(biases),
                     header.at("omega0").get<double>(),
                     header.at("seed").get<std::uint64_t>());
    Eigen::VectorXd params(net.parameter_count());
    for (Eigen::Index i = 0; i < params.size(); ++i) {
      unsigned char le[4];
      if (!in.read(reinterpret_cast<char*>(le), 4)) {
        throw IoError(path.string(), "truncated parameter block");
      }
      const std::uint32_t bits = le[0] | (le[1] << 8) | (le[2] << 16) |
                                 (static_cast<std::uint32_t>(le[3]) << 24);
      params(i) = std::bit_cast<float>(bits);
    }
    net.set_parameters(params);
    return net;
  } catch (const json::exception& e) {
    throw IoError(path.string(), std::string("bad checkpoint header: ") + e.what());
  } catch (const ContractViolation& e) {
    throw IoError(path.string(), e.what());
  }
}

}  // namespace parallax
