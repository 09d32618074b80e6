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

#include "parallax/geometry.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "parallax/errors.hpp"

namespace parallax {
namespace {

constexpr double kDedupTolerance = 1e-9;
constexpr int kMaxLayers = 1'000'000;

std::vector<double> descending_sequence(double kappa, int n, double d_min) {
  std::vector<double> values{closed_form_depth(kappa, n, 0)};
  while (values.back() > d_min) {
    if (static_cast<int>(values.size()) >= kMaxLayers) {
      throw DomainError("depth sequence exceeds layer limit; d_min too small");
    }
    values.push_back(closed_form_depth(kappa, n, static_cast<int>(values.size())));
  }
  return values;
}

}  // namespace

CameraIntrinsics::CameraIntrinsics(double focal_length, double pixel_pitch_x,
                                   double pixel_pitch_y, int width, int height,
                                   std::optional<Eigen::Vector2d> principal_point)
    : focal_length_(focal_length),
      pixel_pitch_x_(pixel_pitch_x),
      pixel_pitch_y_(pixel_pitch_y),
      width_(width),
      height_(height),
      principal_point_(principal_point.value_or(
          Eigen::Vector2d(0.5 * width, 0.5 * height))) {
  if (!(focal_length > 0.0) || !(pixel_pitch_x > 0.0) || !(pixel_pitch_y > 0.0)) {
    throw DomainError("intrinsics: focal length and pixel pitch must be > 0");
  }
  if (width < 1 || height < 1) {
    throw DomainError("intrinsics: width and height must be >= 1");
  }
  const auto& pp = principal_point_;
  if (!(pp.x() >= 0.0 && pp.x() < width && pp.y() >= 0.0 && pp.y() < height)) {
    throw DomainError("intrinsics: principal point outside the sensor");
  }
}

Trajectory::Trajectory(std::vector<Pose> poses, std::optional<int> reference_index)
    : poses_(std::move(poses)) {
  if (poses_.empty()) throw DomainError("trajectory: no poses");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    if (std::abs(poses_[i].rotation.norm() - 1.0) > 1e-9) {
      throw DomainError("trajectory: pose " + std::to_string(i) +
                        " has a non-unit quaternion");
    }
    if (i > 0 && !(poses_[i].time > poses_[i - 1].time)) {
      throw DomainError("trajectory: times must be strictly increasing");
    }
  }
  reference_index_ = reference_index.value_or(size() / 2);
  if (reference_index_ < 0 || reference_index_ >= size()) {
    throw DomainError("trajectory: reference index out of range");
  }
}

Pose Trajectory::interpolate(double t) const {
  if (t <= poses_.front().time) return poses_.front();
  if (t >= poses_.back().time) return poses_.back();
  auto it = std::upper_bound(poses_.begin(), poses_.end(), t,
                             [](double v, const Pose& p) { return v < p.time; });
  const Pose& b = *it;
  const Pose& a = *(it - 1);
  const double f = (t - a.time) / (b.time - a.time);
  Pose out;
  out.time = t;
  out.translation = a.translation + f * (b.translation - a.translation);
  out.rotation = a.rotation.slerp(f, b.rotation).normalized();
  return out;
}

Trajectory Trajectory::resampled(int samples,
                                 std::optional<int> reference_index) const {
  if (samples < 1) throw DomainError("trajectory: samples must be >= 1");
  if (size() == 1) return *this;
  std::vector<Pose> out;
  out.reserve(samples);
  if (samples == 1) {
    out.push_back(reference());
  } else {
    const double t0 = poses_.front().time;
    const double t1 = poses_.back().time;
    for (int i = 0; i < samples; ++i) {
      const double t = i + 1 == samples ? t1 : t0 + (t1 - t0) * i / (samples - 1);
      out.push_back(interpolate(t));
    }
  }
  return Trajectory(std::move(out), reference_index);
}

std::vector<Eigen::Vector2d> Trajectory::in_plane_offsets() const {
  const Pose& ref = reference();
  const Eigen::Matrix3d world_to_ref = ref.rotation.toRotationMatrix().transpose();
  std::vector<Eigen::Vector2d> out;
  out.reserve(poses_.size());
  for (const Pose& p : poses_) {
    const Eigen::Vector3d rel = world_to_ref * (p.translation - ref.translation);
    out.emplace_back(rel.x(), rel.y());
  }
  return out;
}

Eigen::Vector2d Trajectory::max_in_plane_offset() const {
  Eigen::Vector2d s_max = Eigen::Vector2d::Zero();
  for (const auto& o : in_plane_offsets()) s_max = s_max.cwiseMax(o.cwiseAbs());
  return s_max;
}

std::vector<Eigen::Vector2d> Trajectory::pan_tilt_angles() const {
  const Eigen::Quaterniond ref_inv = reference().rotation.conjugate();
  std::vector<Eigen::Vector2d> out;
  out.reserve(poses_.size());
  for (const Pose& p : poses_) {
    const Eigen::AngleAxisd rel(ref_inv * p.rotation);
    const Eigen::Vector3d w = rel.angle() * rel.axis();
    // Yaw about +y shifts content towards -x; pitch about +x towards +y.
    out.emplace_back(-w.y(), w.x());
  }
  return out;
}

bool Trajectory::has_rotation(double tolerance) const {
  for (const auto& a : pan_tilt_angles()) {
    if (a.cwiseAbs().maxCoeff() > tolerance) return true;
  }
  return false;
}

double blur_extent(double s, const CameraIntrinsics& intrinsics, double depth) {
  if (!(depth > 0.0)) throw DomainError("blur_extent: depth must be > 0");
  if (std::isinf(depth)) return 0.0;
  return s * intrinsics.focal_length() / depth;
}

double blur_variation(double s, const CameraIntrinsics& intrinsics,
                      double d_near, double delta_d) {
  if (!(d_near > 0.0)) throw DomainError("blur_variation: d_near must be > 0");
  if (delta_d < 0.0) throw DomainError("blur_variation: delta_d must be >= 0");
  if (delta_d == 0.0) return 0.0;
  return s * intrinsics.focal_length() / (d_near * (d_near / delta_d + 1.0));
}

bool DepthSequence::is_static() const {
  return values.size() == 1 && std::isinf(values.front());
}

double closed_form_depth(double kappa, int n, int l) {
  return 2.0 * kappa / (2.0 * l * n + 1.0);
}

double recursive_depth(double kappa, int n, double previous) {
  return kappa * previous / (n * previous + kappa);
}

DepthSequence depth_sequence_1d(double s_max, double focal, double pitch,
                                int n, double d_min) {
  if (!(d_min > 0.0)) throw DomainError("depth sequence: d_min must be > 0");
  if (n < 1) throw DomainError("depth sequence: n must be >= 1");
  if (s_max < 0.0 || !(focal > 0.0) || !(pitch > 0.0)) {
    throw DomainError("depth sequence: invalid motion or optics");
  }
  DepthSequence seq;
  seq.n = n;
  if (s_max == 0.0) {
    seq.values = {std::numeric_limits<double>::infinity()};
    return seq;
  }
  seq.kappa_x = s_max * focal / pitch;
  seq.values = descending_sequence(seq.kappa_x, n, d_min);
  return seq;
}

DepthSequence depth_sequence_2d(double s_max_x, double s_max_y,
                                const CameraIntrinsics& intrinsics, int n,
                                double d_min) {
  const double f = intrinsics.focal_length();
  DepthSequence seq;
  seq.n = n;
  const DepthSequence x =
      depth_sequence_1d(s_max_x, f, intrinsics.pixel_pitch_x(), n, d_min);
  const DepthSequence y =
      depth_sequence_1d(s_max_y, f, intrinsics.pixel_pitch_y(), n, d_min);
  seq.kappa_x = x.kappa_x;
  seq.kappa_y = y.kappa_x;

  std::vector<double> all;
  if (!x.is_static()) all.insert(all.end(), x.values.begin(), x.values.end());
  if (!y.is_static()) all.insert(all.end(), y.values.begin(), y.values.end());
  if (all.empty()) {
    seq.values = x.values;
    return seq;
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  for (double v : all) {
    if (!seq.values.empty()) {
      const double last = seq.values.back();
      if (std::abs(last - v) <= kDedupTolerance * last) continue;
      if (last <= d_min) break;
    }
    seq.values.push_back(v);
  }
  return seq;
}

DepthSequence depth_sequence_2d(const Trajectory& trajectory,
                                const CameraIntrinsics& intrinsics, int n,
                                double d_min) {
  const Eigen::Vector2d s_max = trajectory.max_in_plane_offset();
  return depth_sequence_2d(s_max.x(), s_max.y(), intrinsics, n, d_min);
}

}  // namespace parallax
