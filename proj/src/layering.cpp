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

#include "parallax/layering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallax/errors.hpp"
#include "parallax/parallel.hpp"

namespace parallax {
namespace {

constexpr double kMatteGuard = 1e-12;

std::vector<double> gaussian_window(int size, double sigma) {
  const int r = size / 2;
  std::vector<double> w(size);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - r;
    w[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

LabelRaster assign_regions(const DepthMap& depth, const DepthSequence& sequence) {
  const auto& d = sequence.values;
  if (d.empty()) throw ContractViolation("assign_regions: empty sequence");
  const int last = static_cast<int>(d.size()) - 1;
  LabelRaster labels(depth.width(), depth.height(), 0);
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const double z = depth(x, y);
      if (z >= d.front()) continue;
      // Number of edges >= z; the pixel lies in (D_c, D_{c-1}].
      const auto c = std::partition_point(d.begin(), d.end(),
                                          [z](double v) { return v >= z; }) -
                     d.begin();
      labels(x, y) = std::min(static_cast<int>(c), last);
    }
  }
  return labels;
}

FloatRaster extend_region(const MaskRaster& mask, std::pair<int, int> support,
                          double sigma) {
  const auto [sw, sh] = support;
  if (sw < 1 || sh < 1 || sw % 2 == 0 || sh % 2 == 0) {
    throw ContractViolation("extend_region: support must be odd, got " +
                            std::to_string(sw) + "x" + std::to_string(sh));
  }
  if (!(sigma > 0.0)) throw ContractViolation("extend_region: sigma must be > 0");
  const int w = mask.width();
  const int h = mask.height();
  const int rx = sw / 2;
  const int ry = sh / 2;

  FloatRaster out(w, h, 0.0f);
  bool any = false;
  for (auto v : mask.values()) any = any || v != 0;
  if (!any) return out;

  // Separable rectangular dilation.
  Raster<unsigned char> horiz(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      for (int i = std::max(0, x - rx); i <= std::min(w - 1, x + rx); ++i) horiz(i, y) = 1;
    }
  }
  Raster<double> dilated(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!horiz(x, y)) continue;
      for (int j = std::max(0, y - ry); j <= std::min(h - 1, y + ry); ++j) dilated(x, j) = 1.0;
    }
  }

  // Separable Gaussian with edge replication.
  const auto gx = gaussian_window(sw, sigma);
  const auto gy = gaussian_window(sh, sigma);
  Raster<double> tmp(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = 0; i < sw; ++i) {
        acc += gx[i] * dilated(std::clamp(x + i - rx, 0, w - 1), y);
      }
      tmp(x, y) = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < sh; ++j) {
        acc += gy[j] * tmp(x, std::clamp(y + j - ry, 0, h - 1));
      }
      out(x, y) = static_cast<float>(std::clamp(acc, 0.0, 1.0));
    }
  }
  return out;
}

std::vector<FloatRaster> z_buffers(std::span<const FloatRaster> extended_masks) {
  const int layers = static_cast<int>(extended_masks.size());
  std::vector<FloatRaster> out(layers);
  if (layers == 0) return out;
  const int w = extended_masks[0].width();
  const int h = extended_masks[0].height();
  Raster<double> running(w, h, 1.0);
  for (int l = layers - 1; l >= 0; --l) {
    out[l] = FloatRaster(w, h);
    auto dst = out[l].values();
    auto acc = running.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<float>(acc[i]);
    auto r = extended_masks[l].values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= 1.0 - r[i];
  }
  return out;
}

std::vector<FloatRaster> alpha_mattes(std::span<const FloatRaster> extended_masks,
                                      std::span<const FloatRaster> zbuffers) {
  if (extended_masks.size() != zbuffers.size()) {
    throw ContractViolation("alpha_mattes: layer count mismatch");
  }
  const std::size_t layers = extended_masks.size();
  std::vector<FloatRaster> out(layers);
  if (layers == 0) return out;
  const int w = extended_masks[0].width();
  const int h = extended_masks[0].height();
  Raster<double> norm(w, h, 0.0);
  auto c = norm.values();
  for (std::size_t l = 0; l < layers; ++l) {
    auto r = extended_masks[l].values();
    auto m = zbuffers[l].values();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += double(r[i]) * m[i];
  }
  for (std::size_t l = 0; l < layers; ++l) {
    out[l] = FloatRaster(w, h);
    auto r = extended_masks[l].values();
    auto m = zbuffers[l].values();
    auto a = out[l].values();
    for (std::size_t i = 0; i < c.size(); ++i) {
      a[i] = static_cast<float>(double(r[i]) * m[i] / std::max(c[i], kMatteGuard));
    }
  }
  return out;
}

std::vector<double> optimal_layer_depths(const DepthMap& depth,
                                         const LabelRaster& labels,
                                         const DepthSequence& sequence) {
  const int layers = sequence.size();
  std::vector<double> sum(layers, 0.0);
  std::vector<long> count(layers, 0);
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const int l = labels(x, y);
      sum[l] += depth(x, y);
      ++count[l];
    }
  }
  std::vector<double> out(layers);
  for (int l = 0; l < layers; ++l) {
    if (count[l] > 0) {
      out[l] = sum[l] / count[l];
    } else if (l == 0) {
      out[l] = sequence.values[0];
    } else {
      out[l] = 0.5 * (sequence.values[l] + sequence.values[l - 1]);
    }
  }
  return out;
}

LayerDecomposition partition_depth(const DepthMap& depth, DepthSequence sequence) {
  LayerDecomposition layers;
  layers.labels = assign_regions(depth, sequence);
  layers.optimal_depths = optimal_layer_depths(depth, layers.labels, sequence);
  layers.sequence = std::move(sequence);
  return layers;
}

MaskRaster layer_mask(const LabelRaster& labels, int layer) {
  MaskRaster mask(labels.width(), labels.height(), 0);
  auto src = labels.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == layer ? 1 : 0;
  return mask;
}

void build_mattes(LayerDecomposition& layers,
                  std::span<const std::pair<int, int>> supports, double sigma) {
  const int count = layers.layer_count();
  if (static_cast<int>(supports.size()) != count) {
    throw ContractViolation("build_mattes: one support per layer required");
  }
  layers.extended_masks.assign(count, FloatRaster());
  parallel_for(0, count, [&](int lo, int hi) {
    for (int l = lo; l < hi; ++l) {
      layers.extended_masks[l] =
          extend_region(layer_mask(layers.labels, l), supports[l], sigma);
    }
  });
  layers.zbuffers = z_buffers(layers.extended_masks);
  layers.mattes = alpha_mattes(layers.extended_masks, layers.zbuffers);
}

}  // namespace parallax
