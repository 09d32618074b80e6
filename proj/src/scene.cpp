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

#include "parallax/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "parallax/errors.hpp"

namespace parallax {
namespace {

constexpr double kFocal = 2.8e-3;
constexpr double kPitch = 4e-6;
constexpr double kExposure = 1.0 / 30.0;
constexpr int kPathSamples = 64;
constexpr double kShakeAmplitude = 3e-3;

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }
  std::uint64_t next() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

// Full-frame texture: tinted gradient, a grating and random rectangles.
Image make_texture(int size, Random& rng) {
  Image tex(size, size, 3);
  double base[3], gx[3], gy[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(0.25, 0.75);
    gx[c] = rng.uniform(-0.2, 0.2);
    gy[c] = rng.uniform(-0.2, 0.2);
  }
  const double fx = rng.uniform(0.05, 0.35);
  const double fy = rng.uniform(0.05, 0.35);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double grating = rng.uniform(0.05, 0.15);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double u = static_cast<double>(x) / size - 0.5;
      const double v = static_cast<double>(y) / size - 0.5;
      const double g = grating * std::sin(fx * x + fy * y + phase);
      for (int c = 0; c < 3; ++c) tex(x, y, c) = float(base[c] + gx[c] * u + gy[c] * v + g);
    }
  }
  const int blobs = 6 + rng.integer(0, 8);
  for (int b = 0; b < blobs; ++b) {
    const int w = std::max(2, static_cast<int>(size * rng.uniform(0.05, 0.3)));
    const int h = std::max(2, static_cast<int>(size * rng.uniform(0.05, 0.3)));
    const int x0 = rng.integer(-w / 2, size - w / 2);
    const int y0 = rng.integer(-h / 2, size - h / 2);
    double color[3];
    for (double& c : color) c = rng.uniform(0.0, 1.0);
    const double alpha = rng.uniform(0.4, 0.9);
    for (int y = std::max(0, y0); y < std::min(size, y0 + h); ++y) {
      for (int x = std::max(0, x0); x < std::min(size, x0 + w); ++x) {
        for (int c = 0; c < 3; ++c) {
          tex(x, y, c) = float((1.0 - alpha) * tex(x, y, c) + alpha * color[c]);
        }
      }
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (float& v : tex.plane(c).values()) v = std::clamp(v, 0.05f, 0.95f);
  }
  return tex;
}

struct Rect {
  int x0, y0, x1, y1;  // half-open
};

Rect random_rect(int size, double min_frac, double max_frac, Random& rng) {
  const int w = std::max(4, static_cast<int>(size * rng.uniform(min_frac, max_frac)));
  const int h = std::max(4, static_cast<int>(size * rng.uniform(min_frac, max_frac)));
  const int x0 = rng.integer(size / 8, std::max(size / 8, size - w - size / 8));
  const int y0 = rng.integer(size / 8, std::max(size / 8, size - h - size / 8));
  return {x0, y0, std::min(size, x0 + w), std::min(size, y0 + h)};
}

// Depth beyond which the given path produces no visible motion, per the
// half-pixel rule, using the larger axis.
double no_motion_depth(const Trajectory& traj) {
  const Eigen::Vector2d s = traj.max_in_plane_offset();
  return 2.0 * s.maxCoeff() * kFocal / kPitch;
}

Trajectory scene_path(ScenePreset preset, int size, double nearest_depth, Random& rng) {
  (void)size;
  if (preset == ScenePreset::kTrucking) {
    const double blur_px = rng.uniform(8.0, 14.0);
    const double extent = blur_px * kPitch * nearest_depth / kFocal;
    return linear_trajectory(kPathSamples, extent, rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  const double amplitude = kShakeAmplitude * rng.uniform(0.5, 1.0);
  return shake_trajectory(kPathSamples, amplitude, rng.next());
}

}  // namespace

std::string to_string(ScenePreset preset) {
  switch (preset) {
    case ScenePreset::kMacro:
      return "macro";
    case ScenePreset::kTrucking:
      return "trucking";
    case ScenePreset::kStandard:
      return "standard";
  }
  return "unknown";
}

ScenePreset parse_preset(const std::string& name) {
  if (name == "macro") return ScenePreset::kMacro;
  if (name == "trucking") return ScenePreset::kTrucking;
  if (name == "standard") return ScenePreset::kStandard;
  throw DomainError("unknown scene preset '" + name + "'");
}

CameraIntrinsics scene_intrinsics(int width, int height) {
  return CameraIntrinsics(kFocal, kPitch, kPitch, width, height);
}

Trajectory shake_trajectory(int samples, double amplitude, std::uint64_t seed) {
  if (samples < 2) throw DomainError("shake_trajectory: need at least 2 samples");
  Random rng(seed);
  constexpr int kTerms = 3;
  double amp[2][kTerms], freq[2][kTerms], phase[2][kTerms];
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < kTerms; ++k) {
      amp[a][k] = rng.uniform(0.3, 1.0) / (k + 1);
      freq[a][k] = rng.uniform(0.3, 1.5) * (k + 1);
      phase[a][k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
  }
  std::vector<Eigen::Vector2d> path(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    for (int a = 0; a < 2; ++a) {
      double v = 0.0;
      for (int k = 0; k < kTerms; ++k) {
        v += amp[a][k] * std::sin(2.0 * std::numbers::pi * freq[a][k] * t + phase[a][k]);
      }
      path[i][a] = v;
    }
  }
  const Eigen::Vector2d mid = path[samples / 2];
  double peak = 0.0;
  for (auto& p : path) {
    p -= mid;
    peak = std::max(peak, p.cwiseAbs().maxCoeff());
  }
  const double scale = peak > 0.0 ? amplitude / peak : 0.0;
  std::vector<Pose> poses;
  for (int i = 0; i < samples; ++i) {
    Pose pose;
    pose.time = kExposure * i / (samples - 1);
    pose.translation = Eigen::Vector3d(path[i].x() * scale, path[i].y() * scale, 0.0);
    poses.push_back(pose);
  }
  return Trajectory(std::move(poses));
}

Trajectory linear_trajectory(int samples, double extent, double direction) {
  if (samples < 2) throw DomainError("linear_trajectory: need at least 2 samples");
  std::vector<Pose> poses;
  const Eigen::Vector3d dir(std::cos(direction), std::sin(direction), 0.0);
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / (samples - 1) - 0.5;
    Pose pose;
    pose.time = kExposure * i / (samples - 1);
    pose.translation = dir * (extent * f);
    poses.push_back(pose);
  }
  return Trajectory(std::move(poses));
}

SceneFixture gen_scene(ScenePreset preset, int size, std::uint64_t seed) {
  if (size < 32) throw DomainError("gen_scene: size must be >= 32");
  Random rng(seed);

  double background = 0.0;
  std::vector<double> layer_depths;
  int objects = 0;
  switch (preset) {
    case ScenePreset::kMacro:
      background = rng.uniform(0.25, 0.35);
      objects = 1;
      layer_depths = {rng.uniform(0.08, 0.1)};
      break;
    case ScenePreset::kTrucking:
      background = rng.uniform(30.0, 50.0);
      objects = 2;
      layer_depths = {rng.uniform(6.0, 10.0), rng.uniform(4.0, 6.0)};
      break;
    case ScenePreset::kStandard:
      objects = 2;
      break;
  }
  const double nearest = layer_depths.empty() ? 1.0 : layer_depths.back();
  Trajectory traj = scene_path(preset, size, nearest, rng);
  if (preset == ScenePreset::kStandard) {
    const double limit = no_motion_depth(traj);
    background = limit * rng.uniform(4.0, 8.0);
    layer_depths = {limit * rng.uniform(1.6, 2.5), limit * rng.uniform(1.2, 1.5)};
  }

  Image sharp = make_texture(size, rng);
  FloatRaster depth(size, size, static_cast<float>(background));
  for (int o = 0; o < objects; ++o) {
    const Rect r = random_rect(size, 0.3, 0.5, rng);
    const Image tex = make_texture(size, rng);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        depth(x, y) = static_cast<float>(layer_depths[o]);
        for (int c = 0; c < 3; ++c) sharp(x, y, c) = tex(x, y, c);
      }
    }
  }
  return SceneFixture{std::move(sharp), DepthMap(std::move(depth)), std::move(traj),
                      scene_intrinsics(size, size), preset};
}

SceneFixture gen_smooth_scene(ScenePreset preset, int size, std::uint64_t seed) {
  if (size < 32) throw DomainError("gen_smooth_scene: size must be >= 32");
  Random rng(seed);
  double near = 0.0;
  double far = 0.0;
  if (preset == ScenePreset::kMacro) {
    near = rng.uniform(0.08, 0.1);
    far = rng.uniform(0.4, 0.6);
  } else if (preset == ScenePreset::kTrucking) {
    near = rng.uniform(4.0, 5.0);
    far = rng.uniform(30.0, 50.0);
  }
  Trajectory traj = scene_path(preset, size, preset == ScenePreset::kStandard ? 1.0 : near, rng);
  if (preset == ScenePreset::kStandard) {
    near = no_motion_depth(traj) * 1.2;
    far = near * 5.0;
  }
  // Inverse depth varies linearly along a random direction, so blur extent
  // does too.
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double cx = std::cos(angle);
  const double cy = std::sin(angle);
  const double reach = 0.5 * (std::abs(cx) + std::abs(cy));
  FloatRaster depth(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double u = ((x + 0.5) / size - 0.5) * cx + ((y + 0.5) / size - 0.5) * cy;
      const double f = std::clamp(0.5 + 0.5 * u / reach, 0.0, 1.0);
      depth(x, y) = static_cast<float>(1.0 / (1.0 / far + f * (1.0 / near - 1.0 / far)));
    }
  }
  Image sharp = make_texture(size, rng);
  return SceneFixture{std::move(sharp), DepthMap(std::move(depth)), std::move(traj),
                      scene_intrinsics(size, size), preset};
}

}  // namespace parallax
