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

#include "parallax/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <unistd.h>

#include "parallax/errors.hpp"

namespace parallax {
namespace fs = std::filesystem;
namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

std::uint16_t quantize(float v, int max_value) {
  const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint16_t>(std::round(c * max_value));
}

// ---- PNG ------------------------------------------------------------------

struct PngReadSource {
  const std::vector<unsigned char>* bytes;
  std::size_t offset;
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t count) {
  auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (src->offset + count > src->bytes->size()) png_error(png, "truncated file");
  std::memcpy(out, src->bytes->data() + src->offset, count);
  src->offset += count;
}

void png_throw_error(png_structp png, png_const_charp message) {
  auto* msg = static_cast<std::string*>(png_get_error_ptr(png));
  *msg = message;
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

Image load_png(const fs::path& path, const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw IoError(path.string(), "not a PNG file");
  }
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           png_throw_error, png_ignore_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string(), "libpng initialization failed");
  }
  PngReadSource source{&bytes, 0};
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int channels = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string(), "PNG decode failed: " + error);
  }
  png_set_read_fn(png, &source, png_read_bytes);
  png_read_info(png, info);
  int color_type = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  bit_depth = png_get_bit_depth(png, info);
  channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3) {
    throw IoError(path.string(), "unsupported PNG channel count " +
                                     std::to_string(channels));
  }
  Image image(static_cast<int>(width), static_cast<int>(height), channels);
  const double max_value = bit_depth == 16 ? 65535.0 : 255.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const std::size_t i = static_cast<std::size_t>(x) * channels + c;
        const unsigned v = bit_depth == 16 ? (row[2 * i] << 8) | row[2 * i + 1] : row[i];
        image(static_cast<int>(x), static_cast<int>(y), c) =
            static_cast<float>(v / max_value);
      }
    }
  }
  return image;
}

void png_write_bytes(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::ostream*>(png_get_io_ptr(png));
  out->write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count));
}

void png_flush_noop(png_structp) {}

void write_png(std::ostream& out, const Image& image, int bit_depth,
               const std::string& path) {
  const int channels = image.channels();
  const int max_value = bit_depth == 16 ? 65535 : 255;
  const std::size_t stride =
      static_cast<std::size_t>(image.width()) * channels * (bit_depth / 8);
  std::vector<unsigned char> pixels(stride * image.height());
  for (int y = 0; y < image.height(); ++y) {
    unsigned char* row = pixels.data() + y * stride;
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        const std::size_t i = static_cast<std::size_t>(x) * channels + c;
        const std::uint16_t q = quantize(image(x, y, c), max_value);
        if (bit_depth == 16) {
          row[2 * i] = static_cast<unsigned char>(q >> 8);
          row[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        } else {
          row[i] = static_cast<unsigned char>(q);
        }
      }
    }
  }
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            png_throw_error, png_ignore_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path, "libpng initialization failed");
  }
  std::vector<png_bytep> rows(image.height());
  for (int y = 0; y < image.height(); ++y) rows[y] = pixels.data() + y * stride;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path, "PNG encode failed: " + error);
  }
  png_set_write_fn(png, &out, png_write_bytes, png_flush_noop);
  png_set_IHDR(png, info, image.width(), image.height(), bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---- PNM / PFM headers ----------------------------------------------------

class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, const fs::path& path)
      : bytes_(bytes), path_(path) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      t.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (t.empty()) throw IoError(path_.string(), "truncated header");
    return t;
  }

  long number() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const long v = std::stol(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw IoError(path_.string(), "bad header field '" + t + "'");
    }
  }

  double real() {
    const std::string t = token();
    try {
      return std::stod(t);
    } catch (const std::exception&) {
      throw IoError(path_.string(), "bad header field '" + t + "'");
    }
  }

  // Consumes the single whitespace byte separating header and payload.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size()) throw IoError(path_.string(), "missing payload");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

Image load_pnm(const fs::path& path, const std::vector<unsigned char>& bytes) {
  HeaderReader header(bytes, path);
  const std::string magic = header.token();
  if (magic != "P5" && magic != "P6") {
    throw IoError(path.string(), "only binary PGM (P5) and PPM (P6) are supported");
  }
  const int channels = magic == "P5" ? 1 : 3;
  const long width = header.number();
  const long height = header.number();
  const long max_value = header.number();
  if (width < 1 || height < 1 || max_value < 1 || max_value > 65535) {
    throw IoError(path.string(), "invalid PNM dimensions or maxval");
  }
  const std::size_t offset = header.payload_offset();
  const int sample_bytes = max_value > 255 ? 2 : 1;
  const std::size_t need =
      static_cast<std::size_t>(width) * height * channels * sample_bytes;
  if (bytes.size() < offset + need) throw IoError(path.string(), "truncated payload");
  Image image(static_cast<int>(width), static_cast<int>(height), channels);
  const unsigned char* p = bytes.data() + offset;
  for (long y = 0; y < height; ++y) {
    for (long x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        unsigned v = *p++;
        if (sample_bytes == 2) v = (v << 8) | *p++;
        image(static_cast<int>(x), static_cast<int>(y), c) =
            static_cast<float>(static_cast<double>(v) / max_value);
      }
    }
  }
  return image;
}

void write_pnm(std::ostream& out, const Image& image, int bit_depth) {
  const int max_value = bit_depth == 16 ? 65535 : 255;
  out << (image.channels() == 1 ? "P5" : "P6") << "\n"
      << image.width() << " " << image.height() << "\n"
      << max_value << "\n";
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        const std::uint16_t q = quantize(image(x, y, c), max_value);
        if (bit_depth == 16) out.put(static_cast<char>(q >> 8));
        out.put(static_cast<char>(q & 0xff));
      }
    }
  }
}

std::uint32_t byteswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

constexpr const char* kTrajectoryHeader = "t_s,tx_m,ty_m,tz_m,qw,qx,qy,qz";

}  // namespace

void write_atomically(const fs::path& path,
                      const std::function<void(std::ostream&)>& writer) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) {
    throw IoError(path.string(), "parent directory does not exist");
  }
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError(path.string(), "cannot open for writing");
      writer(out);
      out.flush();
      if (!out) throw IoError(path.string(), "write failed");
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  write_atomically(path, [&](std::ostream& out) { out << text; });
}

Image load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  const std::string ext = lower_extension(path);
  if (ext == ".png") return load_png(path, bytes);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm(path, bytes);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return load_png(path, bytes);
  }
  throw IoError(path.string(), "unsupported image format");
}

void save_image(const fs::path& path, const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw IoError(path.string(), "bit depth must be 8 or 16");
  }
  if (image.channels() != 1 && image.channels() != 3) {
    throw IoError(path.string(), "only 1- or 3-channel images can be saved");
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_atomically(path, [&](std::ostream& out) {
      write_png(out, image, bit_depth, path.string());
    });
  } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    if ((ext == ".pgm") != (image.channels() == 1) && ext != ".pnm") {
      throw IoError(path.string(), "channel count does not match the extension");
    }
    write_atomically(path, [&](std::ostream& out) { write_pnm(out, image, bit_depth); });
  } else {
    throw IoError(path.string(), "unsupported image extension");
  }
}

FloatRaster load_pfm(const fs::path& path) {
  const auto bytes = read_file(path);
  HeaderReader header(bytes, path);
  const std::string magic = header.token();
  if (magic == "PF") throw IoError(path.string(), "color PFM (PF) is not a depth map");
  if (magic != "Pf") throw IoError(path.string(), "not a grayscale PFM file");
  const long width = header.number();
  const long height = header.number();
  const double scale = header.real();
  if (width < 1 || height < 1 || scale == 0.0) {
    throw IoError(path.string(), "invalid PFM header");
  }
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() < offset + count * 4) {
    throw IoError(path.string(), "truncated payload");
  }
  const bool file_little = scale < 0.0;
  const bool host_little = std::endian::native == std::endian::little;
  FloatRaster raster(static_cast<int>(width), static_cast<int>(height));
  const unsigned char* p = bytes.data() + offset;
  for (long row = 0; row < height; ++row) {
    // First stored row is the bottom of the image.
    const int y = static_cast<int>(height - 1 - row);
    for (long x = 0; x < width; ++x) {
      std::uint32_t bits;
      std::memcpy(&bits, p, 4);
      p += 4;
      if (file_little != host_little) bits = byteswap32(bits);
      raster(static_cast<int>(x), y) = std::bit_cast<float>(bits);
    }
  }
  return raster;
}

void save_pfm(const fs::path& path, const FloatRaster& raster) {
  const bool host_little = std::endian::native == std::endian::little;
  write_atomically(path, [&](std::ostream& out) {
    out << "Pf\n" << raster.width() << " " << raster.height() << "\n"
        << (host_little ? "-1.0" : "1.0") << "\n";
    for (int y = raster.height() - 1; y >= 0; --y) {
      out.write(reinterpret_cast<const char*>(raster.row(y)),
                static_cast<std::streamsize>(raster.width() * sizeof(float)));
    }
  });
}

DepthMap load_depth(const fs::path& path) {
  FloatRaster raster = load_pfm(path);
  try {
    return DepthMap(std::move(raster));
  } catch (const DomainError& e) {
    throw IoError(path.string(), e.what());
  }
}

void save_depth(const fs::path& path, const DepthMap& depth) {
  save_pfm(path, depth.raster());
}

Trajectory load_trajectory(const fs::path& path, std::optional<int> reference_index) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string(), "empty trajectory file");
  line.erase(std::remove_if(line.begin(), line.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             line.end());
  if (line != kTrajectoryHeader) {
    throw IoError(path.string(), std::string("expected header '") +
                                     kTrajectoryHeader + "'");
  }
  std::vector<Pose> poses;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw IoError(path.string(), "line " + std::to_string(line_no) +
                                         ": bad number '" + cell + "'");
      }
    }
    if (v.size() != 8) {
      throw IoError(path.string(), "line " + std::to_string(line_no) +
                                       ": expected 8 columns");
    }
    Eigen::Quaterniond q(v[4], v[5], v[6], v[7]);
    const double norm = q.norm();
    if (std::abs(norm - 1.0) > 1e-3) {
      throw IoError(path.string(), "line " + std::to_string(line_no) +
                                       ": quaternion is not unit length");
    }
    q.coeffs() /= norm;
    poses.push_back(Pose{v[0], Eigen::Vector3d(v[1], v[2], v[3]), q});
  }
  try {
    return Trajectory(std::move(poses), reference_index);
  } catch (const DomainError& e) {
    throw IoError(path.string(), e.what());
  }
}

void save_trajectory(const fs::path& path, const Trajectory& trajectory) {
  write_atomically(path, [&](std::ostream& out) {
    out << kTrajectoryHeader << "\n";
    char buf[512];
    for (const Pose& p : trajectory.poses()) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    p.time, p.translation.x(), p.translation.y(), p.translation.z(),
                    p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z());
      out << buf;
    }
  });
}

}  // namespace parallax
