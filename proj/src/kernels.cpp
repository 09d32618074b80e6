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

#include "parallax/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallax/errors.hpp"

namespace parallax {

BlurKernel::BlurKernel(int width, int height, int anchor_x, int anchor_y,
                       std::vector<double> weights)
    : width_(width),
      height_(height),
      anchor_x_(anchor_x),
      anchor_y_(anchor_y),
      weights_(std::move(weights)) {
  if (width < 1 || height < 1 ||
      weights_.size() != static_cast<std::size_t>(width) * height) {
    throw ContractViolation("BlurKernel: raster size mismatch");
  }
  if (anchor_x < 0 || anchor_x >= width || anchor_y < 0 || anchor_y >= height) {
    throw ContractViolation("BlurKernel: anchor outside the raster");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ContractViolation("BlurKernel: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ContractViolation("BlurKernel: weights sum to " + std::to_string(sum));
  }
}

BlurKernel BlurKernel::identity() { return BlurKernel(1, 1, 0, 0, {1.0}); }

double BlurKernel::at(int dx, int dy) const {
  const int i = dx + anchor_x_;
  const int j = dy + anchor_y_;
  if (i < 0 || i >= width_ || j < 0 || j >= height_) return 0.0;
  return weights_[j * width_ + i];
}

std::pair<int, int> BlurKernel::centered_support() const {
  const int rx = std::max(anchor_x_, width_ - 1 - anchor_x_);
  const int ry = std::max(anchor_y_, height_ - 1 - anchor_y_);
  return {2 * rx + 1, 2 * ry + 1};
}

BlurKernel BlurKernel::mirrored() const {
  std::vector<double> w(weights_.rbegin(), weights_.rend());
  return BlurKernel(width_, height_, width_ - 1 - anchor_x_,
                    height_ - 1 - anchor_y_, std::move(w));
}

std::vector<KernelTap> nonzero_taps(const BlurKernel& kernel) {
  std::vector<KernelTap> taps;
  for (int j = 0; j < kernel.height(); ++j) {
    for (int i = 0; i < kernel.width(); ++i) {
      const double w = kernel.weight(i, j);
      if (w != 0.0) taps.push_back({i - kernel.anchor_x(), j - kernel.anchor_y(), w});
    }
  }
  return taps;
}

ParallaxMotion::ParallaxMotion(const Trajectory& trajectory,
                               const CameraIntrinsics& intrinsics) {
  const double f = intrinsics.focal_length();
  for (const auto& s : trajectory.in_plane_offsets()) {
    scaled_.emplace_back(-s.x() * f / intrinsics.pixel_pitch_x(),
                         -s.y() * f / intrinsics.pixel_pitch_y());
  }
}

DisplacementSet ParallaxMotion::displacements(double depth) const {
  if (!(depth > 0.0)) throw DomainError("pixel_displacements: depth must be > 0");
  DisplacementSet out;
  out.reserve(scaled_.size());
  for (const auto& s : scaled_) out.emplace_back(s.x() / depth, s.y() / depth);
  return out;
}

void ParallaxMotion::rounded_taps(double depth,
                                  std::vector<Eigen::Vector2i>& out) const {
  if (!(depth > 0.0)) throw DomainError("pixel_displacements: depth must be > 0");
  out.clear();
  for (const auto& s : scaled_) {
    out.emplace_back(round_half_away(s.x() / depth), round_half_away(s.y() / depth));
  }
}

DisplacementSet pixel_displacements(const Trajectory& trajectory,
                                    const CameraIntrinsics& intrinsics,
                                    double depth) {
  return ParallaxMotion(trajectory, intrinsics).displacements(depth);
}

BlurKernel epdf_kernel_from_taps(std::span<const Eigen::Vector2i> taps) {
  if (taps.empty()) throw ContractViolation("epdf_kernel: no samples");
  Eigen::Vector2i lo = taps.front();
  Eigen::Vector2i hi = taps.front();
  for (const auto& t : taps) {
    lo = lo.cwiseMin(t);
    hi = hi.cwiseMax(t);
  }
  // The zero tap must be inside the raster so it can serve as the anchor.
  lo = lo.cwiseMin(Eigen::Vector2i::Zero());
  hi = hi.cwiseMax(Eigen::Vector2i::Zero());
  const int w = hi.x() - lo.x() + 1;
  const int h = hi.y() - lo.y() + 1;
  std::vector<long> counts(static_cast<std::size_t>(w) * h, 0);
  for (const auto& t : taps) ++counts[(t.y() - lo.y()) * w + (t.x() - lo.x())];
  std::vector<double> weights(counts.size());
  const double m = static_cast<double>(taps.size());
  for (std::size_t i = 0; i < counts.size(); ++i) weights[i] = counts[i] / m;
  return BlurKernel(w, h, -lo.x(), -lo.y(), std::move(weights));
}

BlurKernel epdf_kernel(const DisplacementSet& displacements) {
  std::vector<Eigen::Vector2i> taps;
  taps.reserve(displacements.size());
  for (const auto& d : displacements) {
    taps.emplace_back(round_half_away(d.x()), round_half_away(d.y()));
  }
  return epdf_kernel_from_taps(taps);
}

std::vector<BlurKernel> layer_kernels(const Trajectory& trajectory,
                                      const CameraIntrinsics& intrinsics,
                                      std::span<const double> optimal_depths) {
  const ParallaxMotion motion(trajectory, intrinsics);
  std::vector<BlurKernel> out;
  out.reserve(optimal_depths.size());
  std::vector<Eigen::Vector2i> taps;
  for (std::size_t l = 0; l < optimal_depths.size(); ++l) {
    if (l == 0 || std::isinf(optimal_depths[l])) {
      out.push_back(BlurKernel::identity());
      continue;
    }
    motion.rounded_taps(optimal_depths[l], taps);
    out.push_back(epdf_kernel_from_taps(taps));
  }
  return out;
}

BlurKernel rotation_kernel(const Trajectory& trajectory,
                           const CameraIntrinsics& intrinsics) {
  const double f = intrinsics.focal_length();
  DisplacementSet disp;
  for (const auto& a : trajectory.pan_tilt_angles()) {
    disp.emplace_back(f * a.x() / intrinsics.pixel_pitch_x(),
                      f * a.y() / intrinsics.pixel_pitch_y());
  }
  return epdf_kernel(disp);
}

BlurKernel compose_kernels(const BlurKernel& a, const BlurKernel& b,
                           RotationCompose mode) {
  if (mode == RotationCompose::kConvolve) {
    const int w = a.width() + b.width() - 1;
    const int h = a.height() + b.height() - 1;
    std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
    for (int aj = 0; aj < a.height(); ++aj) {
      for (int ai = 0; ai < a.width(); ++ai) {
        const double wa = a.weight(ai, aj);
        if (wa == 0.0) continue;
        for (int bj = 0; bj < b.height(); ++bj) {
          for (int bi = 0; bi < b.width(); ++bi) {
            out[(aj + bj) * w + (ai + bi)] += wa * b.weight(bi, bj);
          }
        }
      }
    }
    double sum = 0.0;
    for (double v : out) sum += v;
    for (double& v : out) v /= sum;
    return BlurKernel(w, h, a.anchor_x() + b.anchor_x(),
                      a.anchor_y() + b.anchor_y(), std::move(out));
  }
  const int min_dx = std::min(a.min_dx(), b.min_dx());
  const int max_dx = std::max(a.max_dx(), b.max_dx());
  const int min_dy = std::min(a.min_dy(), b.min_dy());
  const int max_dy = std::max(a.max_dy(), b.max_dy());
  const int w = max_dx - min_dx + 1;
  const int h = max_dy - min_dy + 1;
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  double sum = 0.0;
  for (int dy = min_dy; dy <= max_dy; ++dy) {
    for (int dx = min_dx; dx <= max_dx; ++dx) {
      const double v = a.at(dx, dy) + b.at(dx, dy);
      out[(dy - min_dy) * w + (dx - min_dx)] = v;
      sum += v;
    }
  }
  for (double& v : out) v /= sum;
  return BlurKernel(w, h, -min_dx, -min_dy, std::move(out));
}

PixelwiseKernelField::PixelwiseKernelField(const Trajectory& trajectory,
                                           const CameraIntrinsics& intrinsics,
                                           DepthMap depth,
                                           std::optional<BlurKernel> rotation,
                                           RotationCompose mode)
    : motion_(trajectory, intrinsics),
      depth_(std::move(depth)),
      rotation_(std::move(rotation)),
      mode_(mode) {}

BlurKernel PixelwiseKernelField::kernel_for_depth(double depth) const {
  std::vector<Eigen::Vector2i> taps;
  motion_.rounded_taps(depth, taps);
  BlurKernel k = epdf_kernel_from_taps(taps);
  if (rotation_) return compose_kernels(k, *rotation_, mode_);
  return k;
}

BlurKernel PixelwiseKernelField::kernel_at(int x, int y) const {
  return kernel_for_depth(depth_(x, y));
}

std::vector<BlurKernel> PixelwiseKernelField::materialize() const {
  std::vector<BlurKernel> out;
  out.reserve(static_cast<std::size_t>(width()) * height());
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) out.push_back(kernel_at(x, y));
  }
  return out;
}

std::size_t kernel_storage_weights(std::span<const BlurKernel> kernels) {
  std::size_t total = 0;
  for (const auto& k : kernels) total += k.tap_count();
  return total;
}

}  // namespace parallax
