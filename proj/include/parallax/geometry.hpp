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

#ifndef PARALLAX_GEOMETRY_HPP_
#define PARALLAX_GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace parallax {

// Pinhole intrinsics in metric units. The pixel pitch may differ per axis.
class CameraIntrinsics {
 public:
  // principal_point defaults to the image center.
  CameraIntrinsics(double focal_length, double pixel_pitch_x,
                   double pixel_pitch_y, int width, int height,
                   std::optional<Eigen::Vector2d> principal_point = {});

  double focal_length() const { return focal_length_; }
  double pixel_pitch_x() const { return pixel_pitch_x_; }
  double pixel_pitch_y() const { return pixel_pitch_y_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Eigen::Vector2d& principal_point() const { return principal_point_; }

 private:
  double focal_length_;
  double pixel_pitch_x_;
  double pixel_pitch_y_;
  int width_;
  int height_;
  Eigen::Vector2d principal_point_;
};

// Camera-to-world pose at a time stamp.
struct Pose {
  double time = 0.0;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
};

class Trajectory {
 public:
  // reference_index defaults to the middle sample, floor(M/2).
  explicit Trajectory(std::vector<Pose> poses,
                      std::optional<int> reference_index = {});

  const std::vector<Pose>& poses() const { return poses_; }
  int size() const { return static_cast<int>(poses_.size()); }
  int reference_index() const { return reference_index_; }
  const Pose& reference() const { return poses_[reference_index_]; }

  // Pose at time t (clamped to the covered interval); linear in translation,
  // spherical in rotation.
  Pose interpolate(double t) const;

  // `samples` poses uniformly spaced over [t_first, t_last], so every sample
  // carries the same 1/M exposure weight. A single-pose trajectory is
  // returned unchanged.
  Trajectory resampled(int samples,
                       std::optional<int> reference_index = {}) const;

  // Translation relative to the reference pose, expressed in the reference
  // camera frame, x/y components only. One entry per pose.
  std::vector<Eigen::Vector2d> in_plane_offsets() const;

  // Per-axis max |offset| over the trajectory (s_max for x and y).
  Eigen::Vector2d max_in_plane_offset() const;

  // Small-angle (pan, tilt) rotation of each pose relative to the reference,
  // signed so that a positive angle moves image content towards +x / +y.
  // Roll is dropped.
  std::vector<Eigen::Vector2d> pan_tilt_angles() const;

  bool has_rotation(double tolerance = 1e-12) const;

 private:
  std::vector<Pose> poses_;
  int reference_index_;
};

// Image-plane translation (meters) of a point at `depth` for an in-plane
// camera translation s.
double blur_extent(double s, const CameraIntrinsics& intrinsics, double depth);

// Difference in blur extent between a point at d_near and one delta_d
// farther away.
double blur_variation(double s, const CameraIntrinsics& intrinsics,
                      double d_near, double delta_d);

// Band edges D_0 > D_1 > ... where blur extent changes by n pixels between
// consecutive bands. A static camera is represented by the single value
// +infinity.
struct DepthSequence {
  std::vector<double> values;
  int n = 1;
  double kappa_x = 0.0;
  double kappa_y = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  bool is_static() const;
};

// D_l = 2 kappa / (2 l n + 1).
double closed_form_depth(double kappa, int n, int l);
// One step of D_l = kappa D_{l-1} / (n D_{l-1} + kappa).
double recursive_depth(double kappa, int n, double previous);

// Emits D_l until the last value is <= d_min. kappa_y is left at zero.
DepthSequence depth_sequence_1d(double s_max, double focal, double pitch,
                                int n, double d_min);

// Union of the per-axis sequences, sorted descending, near-duplicates
// (relative 1e-9) removed and truncated after the first value <= d_min.
DepthSequence depth_sequence_2d(const Trajectory& trajectory,
                                const CameraIntrinsics& intrinsics, int n,
                                double d_min);

// Same merge, from explicit per-axis motion extents.
DepthSequence depth_sequence_2d(double s_max_x, double s_max_y,
                                const CameraIntrinsics& intrinsics, int n,
                                double d_min);

// Round half away from zero; the rounding convention used everywhere.
inline int round_half_away(double v) { return static_cast<int>(std::round(v)); }

}  // namespace parallax

#endif  // PARALLAX_GEOMETRY_HPP_
