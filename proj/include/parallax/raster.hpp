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

#ifndef PARALLAX_RASTER_HPP_
#define PARALLAX_RASTER_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "parallax/errors.hpp"

namespace parallax {

// Dense row-major 2D grid.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw ContractViolation("Raster: negative dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const T* row(int y) const {
    return data_.data() + static_cast<std::size_t>(y) * width_;
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  template <typename U>
  bool same_shape(const Raster<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using FloatRaster = Raster<float>;
using LabelRaster = Raster<int>;
using MaskRaster = Raster<unsigned char>;

// Planar multi-channel intensity image. Values are nominally in [0,1] but are
// never clamped internally; clamping happens at export.
template <typename T>
class BasicImage {
 public:
  BasicImage() = default;
  BasicImage(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height) {
    if (channels < 1) throw ContractViolation("Image: channels must be >= 1");
    planes_.assign(channels, Raster<T>(width, height, fill));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  Raster<T>& plane(int c) { return planes_[c]; }
  const Raster<T>& plane(int c) const { return planes_[c]; }

  T& operator()(int x, int y, int c) { return planes_[c](x, y); }
  T operator()(int x, int y, int c) const { return planes_[c](x, y); }

  template <typename U>
  bool same_shape(const BasicImage<U>& other) const {
    return width_ == other.width() && height_ == other.height() &&
           channels() == other.channels();
  }

  template <typename U>
  BasicImage<U> cast() const {
    BasicImage<U> out(width_, height_, channels());
    for (int c = 0; c < channels(); ++c) {
      auto src = planes_[c].values();
      auto dst = out.plane(c).values();
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<U>(src[i]);
    }
    return out;
  }

  bool operator==(const BasicImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Raster<T>> planes_;
};

// Storage precision for images; double is used inside the optimizer.
using Image = BasicImage<float>;
using ImageD = BasicImage<double>;

// Metric depth raster; every value is finite and strictly positive.
class DepthMap {
 public:
  DepthMap() = default;
  // Throws DomainError naming the number of offending pixels.
  explicit DepthMap(FloatRaster values);
  DepthMap(int width, int height, float fill);

  int width() const { return values_.width(); }
  int height() const { return values_.height(); }
  float operator()(int x, int y) const { return values_(x, y); }
  const FloatRaster& raster() const { return values_; }

  float min_depth() const;
  float max_depth() const;

 private:
  FloatRaster values_;
};

}  // namespace parallax

#endif  // PARALLAX_RASTER_HPP_
