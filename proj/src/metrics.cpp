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

#include "parallax/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "parallax/errors.hpp"

namespace parallax {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> ssim_window() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    g[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Valid-region separable filtering of f(a, b) per pixel.
Raster<double> filter_valid(const Raster<double>& src) {
  static const auto g = ssim_window();
  const int w = src.width() - kWindow + 1;
  const int h = src.height() - kWindow + 1;
  Raster<double> horiz(w, src.height());
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = 0; i < kWindow; ++i) s += g[i] * src(x + i, y);
      horiz(x, y) = s;
    }
  }
  Raster<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int j = 0; j < kWindow; ++j) s += g[j] * horiz(x, y + j);
      out(x, y) = s;
    }
  }
  return out;
}

double ssim_plane(const FloatRaster& a, const FloatRaster& b) {
  const int w = a.width();
  const int h = a.height();
  Raster<double> pa(w, h), pb(w, h), aa(w, h), bb(w, h), ab(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double va = a(x, y);
      const double vb = b(x, y);
      pa(x, y) = va;
      pb(x, y) = vb;
      aa(x, y) = va * va;
      bb(x, y) = vb * vb;
      ab(x, y) = va * vb;
    }
  }
  const auto mu_a = filter_valid(pa);
  const auto mu_b = filter_valid(pb);
  const auto e_aa = filter_valid(aa);
  const auto e_bb = filter_valid(bb);
  const auto e_ab = filter_valid(ab);
  double total = 0.0;
  const auto n = mu_a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = mu_a.values()[i];
    const double mb = mu_b.values()[i];
    const double va = e_aa.values()[i] - ma * ma;
    const double vb = e_bb.values()[i] - mb * mb;
    const double cov = e_ab.values()[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return total / static_cast<double>(n);
}

}  // namespace

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ContractViolation("psnr: shape mismatch");
  double sse = 0.0;
  std::size_t count = 0;
  for (int c = 0; c < a.channels(); ++c) {
    auto va = a.plane(c).values();
    auto vb = b.plane(c).values();
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = static_cast<double>(va[i]) - vb[i];
      sse += d * d;
    }
    count += va.size();
  }
  if (count == 0) throw ContractViolation("psnr: empty images");
  const double mse = sse / static_cast<double>(count);
  if (mse == 0.0) return kPsnrIdentical;
  return std::min(kPsnrIdentical, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ContractViolation("ssim: shape mismatch");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw ContractViolation("ssim: images must be at least 11x11");
  }
  double sum = 0.0;
  for (int c = 0; c < a.channels(); ++c) sum += ssim_plane(a.plane(c), b.plane(c));
  return sum / a.channels();
}

}  // namespace parallax
