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

#include "parallax/blur.hpp"

#include <algorithm>
#include <map>
#include <type_traits>

#include "parallax/errors.hpp"
#include "parallax/parallel.hpp"

namespace parallax {
namespace {

// Inclusive pixel box; empty when x1 < x0.
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
};

Box full_box(int width, int height) { return {0, 0, width - 1, height - 1}; }

Box nonzero_box(const FloatRaster& matte) {
  Box box{matte.width(), matte.height(), -1, -1};
  for (int y = 0; y < matte.height(); ++y) {
    const float* row = matte.row(y);
    for (int x = 0; x < matte.width(); ++x) {
      if (row[x] == 0.0f) continue;
      box.x0 = std::min(box.x0, x);
      box.x1 = std::max(box.x1, x);
      box.y0 = std::min(box.y0, y);
      box.y1 = std::max(box.y1, y);
    }
  }
  return box;
}

// acc(p) += A(p) * sum_u w_u src(clamp(p - u)) for rows [y_lo, y_hi) of box.
template <typename T>
void accumulate_rows(const Raster<T>& src, std::span<const KernelTap> taps,
                     const FloatRaster* matte, const Box& box, int y_lo, int y_hi,
                     Raster<double>& acc) {
  const int w = src.width();
  const int h = src.height();
  for (int y = std::max(y_lo, box.y0); y <= std::min(y_hi - 1, box.y1); ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      const double a = matte ? static_cast<double>((*matte)(x, y)) : 1.0;
      if (a == 0.0) continue;
      double s = 0.0;
      for (const auto& t : taps) {
        s += t.weight * static_cast<double>(
                            src(std::clamp(x - t.dx, 0, w - 1),
                                std::clamp(y - t.dy, 0, h - 1)));
      }
      acc(x, y) += a * s;
    }
  }
}

// Adjoint of accumulate_rows over the whole box:
// out(clamp(p - u)) += w_u A(p) z(p).
void scatter(const Raster<double>& z, std::span<const KernelTap> taps,
             const FloatRaster* matte, const Box& box, Raster<double>& out) {
  const int w = z.width();
  const int h = z.height();
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      const double a = (matte ? static_cast<double>((*matte)(x, y)) : 1.0) * z(x, y);
      if (a == 0.0) continue;
      for (const auto& t : taps) {
        out(std::clamp(x - t.dx, 0, w - 1), std::clamp(y - t.dy, 0, h - 1)) +=
            t.weight * a;
      }
    }
  }
}

template <typename T>
Raster<T> narrow(const Raster<double>& acc) {
  Raster<T> out(acc.width(), acc.height());
  auto src = acc.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<T>(src[i]);
  return out;
}

struct ActiveLayer {
  std::vector<KernelTap> taps;
  const FloatRaster* matte;
  Box box;
};

std::vector<ActiveLayer> active_layers(std::span<const BlurKernel> kernels,
                                       std::span<const FloatRaster> mattes,
                                       int width, int height) {
  if (kernels.size() != mattes.size()) {
    throw ContractViolation("icb: kernel and matte counts differ");
  }
  std::vector<ActiveLayer> layers;
  for (std::size_t l = 0; l < kernels.size(); ++l) {
    if (mattes[l].width() != width || mattes[l].height() != height) {
      throw ContractViolation("icb: matte shape does not match the image");
    }
    const Box box = nonzero_box(mattes[l]);
    if (box.empty()) continue;
    layers.push_back({nonzero_taps(kernels[l]), &mattes[l], box});
  }
  return layers;
}

template <typename T>
BasicImage<T> forward_layers(const BasicImage<T>& image,
                             std::span<const ActiveLayer> layers) {
  BasicImage<T> out(image.width(), image.height(), image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    Raster<double> acc(image.width(), image.height(), 0.0);
    parallel_for(0, image.height(), [&](int lo, int hi) {
      for (const auto& layer : layers) {
        accumulate_rows(image.plane(c), layer.taps, layer.matte, layer.box, lo, hi,
                        acc);
      }
    });
    out.plane(c) = narrow<T>(acc);
  }
  return out;
}

ImageD adjoint_layers(const ImageD& z, std::span<const ActiveLayer> layers) {
  ImageD out(z.width(), z.height(), z.channels(), 0.0);
  parallel_for(0, z.channels(), [&](int lo, int hi) {
    for (int c = lo; c < hi; ++c) {
      for (const auto& layer : layers) {
        scatter(z.plane(c), layer.taps, layer.matte, layer.box, out.plane(c));
      }
    }
  });
  return out;
}

}  // namespace

template <typename T>
BasicImage<T> convolve(const BasicImage<T>& image, const BlurKernel& kernel) {
  const ActiveLayer layer{nonzero_taps(kernel), nullptr,
                          full_box(image.width(), image.height())};
  return forward_layers(image, std::span<const ActiveLayer>(&layer, 1));
}

template <typename T>
BasicImage<T> icb_forward(const BasicImage<T>& image,
                          std::span<const BlurKernel> kernels,
                          std::span<const FloatRaster> mattes) {
  const auto layers = active_layers(kernels, mattes, image.width(), image.height());
  return forward_layers(image, layers);
}

template <typename T>
BasicImage<T> pwb_forward(const BasicImage<T>& image,
                          const PixelwiseKernelField& field) {
  const PwbBlur op(field);
  if constexpr (std::is_same_v<T, double>) {
    return op.apply(image);
  } else {
    return op.apply(image.template cast<double>()).template cast<T>();
  }
}

Image pwb_forward(const Image& image, const DepthMap& depth,
                  const Trajectory& trajectory, const CameraIntrinsics& intrinsics) {
  return pwb_forward(image, PixelwiseKernelField(trajectory, intrinsics, depth));
}

template Image convolve(const Image&, const BlurKernel&);
template ImageD convolve(const ImageD&, const BlurKernel&);
template Image icb_forward(const Image&, std::span<const BlurKernel>,
                           std::span<const FloatRaster>);
template ImageD icb_forward(const ImageD&, std::span<const BlurKernel>,
                            std::span<const FloatRaster>);
template Image pwb_forward(const Image&, const PixelwiseKernelField&);
template ImageD pwb_forward(const ImageD&, const PixelwiseKernelField&);

IcbBlur::IcbBlur(std::vector<BlurKernel> kernels, std::vector<FloatRaster> mattes)
    : kernels_(std::move(kernels)), mattes_(std::move(mattes)) {
  if (kernels_.size() != mattes_.size()) {
    throw ContractViolation("IcbBlur: kernel and matte counts differ");
  }
}

ImageD IcbBlur::apply(const ImageD& x) const {
  return icb_forward(x, std::span<const BlurKernel>(kernels_),
                     std::span<const FloatRaster>(mattes_));
}

ImageD IcbBlur::adjoint(const ImageD& y) const {
  const auto layers = active_layers(kernels_, mattes_, y.width(), y.height());
  return adjoint_layers(y, layers);
}

KernelBlur::KernelBlur(BlurKernel kernel) : kernel_(std::move(kernel)) {}

ImageD KernelBlur::apply(const ImageD& x) const { return convolve(x, kernel_); }

ImageD KernelBlur::adjoint(const ImageD& y) const {
  const ActiveLayer layer{nonzero_taps(kernel_), nullptr,
                          full_box(y.width(), y.height())};
  return adjoint_layers(y, std::span<const ActiveLayer>(&layer, 1));
}

PwbBlur::PwbBlur(const PixelwiseKernelField& field)
    : width_(field.width()), height_(field.height()) {
  std::map<float, int> index;
  const auto& depth = field.depth().raster();
  pixel_set_.resize(depth.size());
  auto values = depth.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto [it, inserted] = index.try_emplace(values[i], static_cast<int>(tap_sets_.size()));
    if (inserted) tap_sets_.push_back(nonzero_taps(field.kernel_for_depth(values[i])));
    pixel_set_[i] = it->second;
  }
}

ImageD PwbBlur::apply(const ImageD& x) const {
  if (x.width() != width_ || x.height() != height_) {
    throw ContractViolation("pwb: image shape does not match the depth map");
  }
  ImageD out(width_, height_, x.channels());
  for (int c = 0; c < x.channels(); ++c) {
    const auto& src = x.plane(c);
    auto& dst = out.plane(c);
    parallel_for(0, height_, [&](int lo, int hi) {
      for (int y = lo; y < hi; ++y) {
        for (int px = 0; px < width_; ++px) {
          double s = 0.0;
          for (const auto& t : tap_sets_[pixel_set_[y * width_ + px]]) {
            s += t.weight * src(std::clamp(px - t.dx, 0, width_ - 1),
                                std::clamp(y - t.dy, 0, height_ - 1));
          }
          dst(px, y) = s;
        }
      }
    });
  }
  return out;
}

ImageD PwbBlur::adjoint(const ImageD& z) const {
  if (z.width() != width_ || z.height() != height_) {
    throw ContractViolation("pwb: image shape does not match the depth map");
  }
  ImageD out(width_, height_, z.channels(), 0.0);
  parallel_for(0, z.channels(), [&](int lo, int hi) {
    for (int c = lo; c < hi; ++c) {
      const auto& src = z.plane(c);
      auto& dst = out.plane(c);
      for (int y = 0; y < height_; ++y) {
        for (int px = 0; px < width_; ++px) {
          const double v = src(px, y);
          if (v == 0.0) continue;
          for (const auto& t : tap_sets_[pixel_set_[y * width_ + px]]) {
            dst(std::clamp(px - t.dx, 0, width_ - 1),
                std::clamp(y - t.dy, 0, height_ - 1)) += t.weight * v;
          }
        }
      }
    }
  });
  return out;
}

}  // namespace parallax
