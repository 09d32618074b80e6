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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "parallax/errors.hpp"
#include "parallax/kernels.hpp"

namespace parallax {
namespace {

constexpr double kF = 2.8e-3;
constexpr double kPitch = 4e-6;

CameraIntrinsics Optics() { return CameraIntrinsics(kF, kPitch, kPitch, 32, 32); }

double WeightSum(const BlurKernel& k) {
  return std::accumulate(k.weights().begin(), k.weights().end(), 0.0);
}

DisplacementSet Xs(std::initializer_list<double> xs) {
  DisplacementSet d;
  for (double x : xs) d.emplace_back(x, 0.0);
  return d;
}

// Histogram of rounded displacements, computed without the library.
std::map<std::pair<int, int>, double> Histogram(const DisplacementSet& d) {
  std::map<std::pair<int, int>, double> h;
  for (const auto& v : d) {
    const int x = v.x() < 0 ? -static_cast<int>(std::floor(-v.x() + 0.5))
                            : static_cast<int>(std::floor(v.x() + 0.5));
    const int y = v.y() < 0 ? -static_cast<int>(std::floor(-v.y() + 0.5))
                            : static_cast<int>(std::floor(v.y() + 0.5));
    h[{x, y}] += 1.0 / d.size();
  }
  return h;
}

void ExpectMatchesHistogram(const BlurKernel& k, const DisplacementSet& d) {
  const auto h = Histogram(d);
  double covered = 0.0;
  for (int dy = k.min_dy(); dy <= k.max_dy(); ++dy) {
    for (int dx = k.min_dx(); dx <= k.max_dx(); ++dx) {
      const auto it = h.find({dx, dy});
      const double expected = it == h.end() ? 0.0 : it->second;
      EXPECT_NEAR(k.at(dx, dy), expected, 1e-15) << dx << "," << dy;
      covered += expected;
    }
  }
  EXPECT_NEAR(covered, 1.0, 1e-12);
}

TEST(BlurKernelTest, ValidatesWeights) {
  EXPECT_THROW(BlurKernel(2, 1, 0, 0, {0.5, 0.6}), ContractViolation);
  EXPECT_THROW(BlurKernel(2, 1, 0, 0, {1.5, -0.5}), ContractViolation);
  EXPECT_THROW(BlurKernel(2, 1, 2, 0, {0.5, 0.5}), ContractViolation);
  EXPECT_THROW(BlurKernel(2, 1, 0, 0, {1.0}), ContractViolation);
  const BlurKernel k(2, 1, 0, 0, {0.25, 0.75});
  EXPECT_EQ(k.at(1, 0), 0.75);
  EXPECT_EQ(k.at(5, 0), 0.0);
}

TEST(BlurKernelTest, CenteredSupportAndMirror) {
  const BlurKernel k(3, 1, 0, 0, {0.2, 0.3, 0.5});
  EXPECT_EQ(k.centered_support(), std::make_pair(5, 1));
  const BlurKernel m = k.mirrored();
  EXPECT_EQ(m.at(-2, 0), 0.5);
  EXPECT_EQ(m.at(-1, 0), 0.3);
  EXPECT_EQ(m.at(0, 0), 0.2);
  EXPECT_EQ(BlurKernel::identity().centered_support(), std::make_pair(1, 1));
}

TEST(PixelDisplacementsTest, StaticTrajectory) {
  const Trajectory still = testing::linear_x(7, 0.0);
  for (const auto& d : pixel_displacements(still, Optics(), 0.3)) {
    EXPECT_EQ(d.x(), 0.0);
    EXPECT_EQ(d.y(), 0.0);
  }
}

TEST(PixelDisplacementsTest, LinearExample) {
  // Expected values from exact rational evaluation of -s F / (pitch D).
  const Trajectory traj = testing::linear_x(5, 3e-3, 0);
  const auto near = pixel_displacements(traj, Optics(), 1.0);
  const auto far = pixel_displacements(traj, Optics(), 2.1);
  const double at_1m[] = {0.0, -0.525, -1.05, -1.575, -2.1};
  const double at_2_1m[] = {0.0, -0.25, -0.5, -0.75, -1.0};
  ASSERT_EQ(near.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(near[i].x(), at_1m[i], 1e-12);
    EXPECT_NEAR(far[i].x(), at_2_1m[i], 1e-12);
    EXPECT_EQ(near[i].y(), 0.0);
  }
  EXPECT_THROW(pixel_displacements(traj, Optics(), 0.0), DomainError);
}

TEST(PixelDisplacementsTest, DoublingDepthHalves) {
  const Trajectory traj = testing::random_path(40, 4e-3, 8);
  const auto near = pixel_displacements(traj, Optics(), 0.7);
  const auto far = pixel_displacements(traj, Optics(), 1.4);
  for (std::size_t i = 0; i < near.size(); ++i) {
    EXPECT_NEAR(far[i].x(), 0.5 * near[i].x(), 1e-12);
    EXPECT_NEAR(far[i].y(), 0.5 * near[i].y(), 1e-12);
  }
  EXPECT_EQ(near[traj.reference_index()], Eigen::Vector2d::Zero());
}

TEST(EpdfKernelTest, AllZeroIsIdentity) {
  const BlurKernel k = epdf_kernel(Xs({0.0, 0.0, 0.0, 0.2}));
  EXPECT_TRUE(k.is_identity());
  EXPECT_EQ(k.weight(0, 0), 1.0);
}

TEST(EpdfKernelTest, HalfRoundsAwayFromZero) {
  const BlurKernel k = epdf_kernel(Xs({0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(k.width(), 2);
  EXPECT_EQ(k.height(), 1);
  EXPECT_EQ(k.anchor_x(), 0);
  EXPECT_NEAR(k.at(0, 0), 0.4, 1e-15);
  EXPECT_NEAR(k.at(1, 0), 0.6, 1e-15);
  const BlurKernel neg = epdf_kernel(Xs({-0.5, -0.5, 0.0}));
  EXPECT_NEAR(neg.at(-1, 0), 2.0 / 3.0, 1e-15);
}

TEST(EpdfKernelTest, SymmetricInputGivesSymmetricKernel) {
  const BlurKernel k = epdf_kernel(Xs({-1.0, 0.0, 1.0}));
  EXPECT_EQ(k.width(), 3);
  for (int dx = -1; dx <= 1; ++dx) EXPECT_NEAR(k.at(dx, 0), 1.0 / 3.0, 1e-15);
}

TEST(EpdfKernelTest, OffsetTapsStillAnchorAtOrigin) {
  const BlurKernel k = epdf_kernel(Xs({3.0, 4.0}));
  EXPECT_EQ(k.at(0, 0), 0.0);
  EXPECT_EQ(k.at(3, 0), 0.5);
  EXPECT_EQ(k.at(4, 0), 0.5);
  EXPECT_EQ(k.min_dx(), 0);
}

TEST(EpdfKernelTest, RandomSetsMatchHistogramAndSumToOne) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    DisplacementSet d(1 + rng() % 80);
    for (auto& v : d) v = Eigen::Vector2d(u(rng), u(rng) * 0.5);
    const BlurKernel k = epdf_kernel(d);
    EXPECT_NEAR(WeightSum(k), 1.0, 1e-12);
    for (double w : k.weights()) EXPECT_GE(w, 0.0);
    ExpectMatchesHistogram(k, d);
  }
}

TEST(EpdfKernelTest, PermutationInvariant) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    DisplacementSet d(64);
    for (auto& v : d) v = Eigen::Vector2d(u(rng), u(rng));
    const BlurKernel k = epdf_kernel(d);
    std::shuffle(d.begin(), d.end(), rng);
    EXPECT_EQ(epdf_kernel(d), k);
  }
}

TEST(EpdfKernelTest, NegationMirrors) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    DisplacementSet d(33);
    for (auto& v : d) v = Eigen::Vector2d(u(rng), u(rng));
    DisplacementSet neg = d;
    for (auto& v : neg) v = -v;
    const BlurKernel k = epdf_kernel(d);
    const BlurKernel m = epdf_kernel(neg);
    for (int dy = k.min_dy(); dy <= k.max_dy(); ++dy) {
      for (int dx = k.min_dx(); dx <= k.max_dx(); ++dx) {
        EXPECT_EQ(m.at(-dx, -dy), k.at(dx, dy));
      }
    }
    EXPECT_EQ(m, k.mirrored());
  }
}

TEST(LayerKernelsTest, FarLayerIsIdentity) {
  const Trajectory traj = testing::linear_x(64, 3e-3);
  const std::vector<double> depths = {4.3};
  const auto kernels = layer_kernels(traj, Optics(), depths);
  ASSERT_EQ(kernels.size(), 1u);
  EXPECT_TRUE(kernels[0].is_identity());
}

TEST(LayerKernelsTest, HalvingDepthDoublesSupport) {
  const Trajectory traj = testing::linear_x(64, 3e-3);
  const std::vector<double> depths = {10.0, 2.1, 1.05};
  const auto kernels = layer_kernels(traj, Optics(), depths);
  // Displacements span 1 px and 2 px.
  EXPECT_EQ(kernels[1].width() - 1, 1);
  EXPECT_EQ(kernels[2].width() - 1, 2);
  EXPECT_EQ(kernels[1].height(), 1);
  for (int l = 1; l < 3; ++l) {
    const DisplacementSet d = pixel_displacements(traj, Optics(), depths[l]);
    ExpectMatchesHistogram(kernels[l], d);
  }
}

TEST(LayerKernelsTest, SupportBound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Trajectory traj = testing::random_path(64, 5e-3, rng());
    const Eigen::Vector2d s = traj.max_in_plane_offset();
    std::vector<double> depths = {100.0, 1.0, 0.5, 0.2, 0.11};
    const auto kernels = layer_kernels(traj, Optics(), depths);
    for (std::size_t l = 1; l < depths.size(); ++l) {
      const double bx = std::ceil(2.0 * s.x() * kF / (kPitch * depths[l])) + 1;
      const double by = std::ceil(2.0 * s.y() * kF / (kPitch * depths[l])) + 1;
      EXPECT_LE(kernels[l].width(), bx);
      EXPECT_LE(kernels[l].height(), by);
      EXPECT_NEAR(WeightSum(kernels[l]), 1.0, 1e-12);
    }
  }
}

// Layer 0 sits at or beyond D_0 of the very trajectory, so it never blurs.
TEST(LayerKernelsTest, LayerZeroIdentityGuarantee) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const Trajectory traj = testing::random_path(64, 4e-3, rng());
    const Eigen::Vector2d s = traj.max_in_plane_offset();
    const double d0 = 2.0 * std::max(s.x(), s.y()) * kF / kPitch;
    for (double depth : {d0, d0 * 1.0001, d0 * 3.0}) {
      const std::vector<double> depths = {depth};
      EXPECT_TRUE(layer_kernels(traj, Optics(), depths)[0].is_identity());
    }
    const DisplacementSet d = pixel_displacements(traj, Optics(), d0 * 1.0001);
    EXPECT_TRUE(epdf_kernel(d).is_identity());
  }
}

Trajectory Panning(int samples, double total_angle, const Eigen::Vector3d& axis) {
  std::vector<Pose> poses;
  for (int i = 0; i < samples; ++i) {
    Pose p;
    p.time = i;
    const double a = total_angle * (static_cast<double>(i) / (samples - 1) - 0.5);
    p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(a, axis));
    poses.push_back(p);
  }
  return Trajectory(std::move(poses));
}

TEST(RotationKernelTest, NoRotationIsIdentity) {
  EXPECT_TRUE(rotation_kernel(testing::linear_x(9, 1e-3), Optics()).is_identity());
}

TEST(RotationKernelTest, PanSweepIsHorizontal) {
  // F * angle / pitch = 2 px over the exposure.
  const Trajectory traj = Panning(64, 2.0 * kPitch / kF, Eigen::Vector3d::UnitY());
  const BlurKernel k = rotation_kernel(traj, Optics());
  EXPECT_EQ(k.width(), 3);
  EXPECT_EQ(k.height(), 1);
  EXPECT_NEAR(WeightSum(k), 1.0, 1e-12);
  const BlurKernel tilt =
      rotation_kernel(Panning(64, 2.0 * kPitch / kF, Eigen::Vector3d::UnitX()), Optics());
  EXPECT_EQ(tilt.width(), 1);
  EXPECT_EQ(tilt.height(), 3);
}

TEST(RotationKernelTest, RollIsIgnored) {
  const Trajectory traj = Panning(64, 0.05, Eigen::Vector3d::UnitZ());
  EXPECT_TRUE(rotation_kernel(traj, Optics()).is_identity());
}

TEST(ComposeKernelsTest, IdentityIsNeutral) {
  const BlurKernel k = epdf_kernel(Xs({-2.0, 0.3, 1.0, 1.4}));
  EXPECT_EQ(compose_kernels(k, BlurKernel::identity()), k);
  EXPECT_EQ(compose_kernels(BlurKernel::identity(), k), k);
}

TEST(ComposeKernelsTest, BoxesMakeTriangle) {
  const BlurKernel box(2, 1, 0, 0, {0.5, 0.5});
  const BlurKernel tri = compose_kernels(box, box);
  EXPECT_EQ(tri.width(), 3);
  EXPECT_NEAR(tri.at(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(tri.at(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(tri.at(2, 0), 0.25, 1e-15);
}

TEST(ComposeKernelsTest, Commutes) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    DisplacementSet da(20);
    DisplacementSet db(13);
    for (auto& v : da) v = Eigen::Vector2d(u(rng), u(rng));
    for (auto& v : db) v = Eigen::Vector2d(u(rng), u(rng));
    const BlurKernel a = epdf_kernel(da);
    const BlurKernel b = epdf_kernel(db);
    const BlurKernel ab = compose_kernels(a, b);
    const BlurKernel ba = compose_kernels(b, a);
    ASSERT_EQ(ab.width(), ba.width());
    ASSERT_EQ(ab.anchor_x(), ba.anchor_x());
    for (std::size_t i = 0; i < ab.tap_count(); ++i) {
      EXPECT_NEAR(ab.weights()[i], ba.weights()[i], 1e-12);
    }
    EXPECT_NEAR(WeightSum(ab), 1.0, 1e-12);
  }
}

TEST(ComposeKernelsTest, AddModeAveragesAligned) {
  const BlurKernel a(2, 1, 0, 0, {0.5, 0.5});
  const BlurKernel b(2, 1, 1, 0, {0.5, 0.5});
  const BlurKernel sum = compose_kernels(a, b, RotationCompose::kAdd);
  EXPECT_NEAR(sum.at(-1, 0), 0.25, 1e-15);
  EXPECT_NEAR(sum.at(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(sum.at(1, 0), 0.25, 1e-15);
}

TEST(PixelwiseKernelFieldTest, ConstantDepthMatchesLayerKernel) {
  const Trajectory traj = testing::random_path(64, 3e-3, 5);
  const PixelwiseKernelField field(traj, Optics(), DepthMap(6, 5, 0.4f));
  const std::vector<double> depths = {1e9, 0.4};
  const BlurKernel layer = layer_kernels(traj, Optics(), depths)[1];
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 6; ++x) EXPECT_EQ(field.kernel_at(x, y), layer);
  }
  EXPECT_EQ(field.kernel_for_depth(0.4f), layer);
}

TEST(PixelwiseKernelFieldTest, MaterializedStorageDwarfsLayers) {
  const Trajectory traj = testing::linear_x(64, 3e-3);
  FloatRaster d(256, 192);
  for (int y = 0; y < 192; ++y) {
    for (int x = 0; x < 256; ++x) d(x, y) = 0.3f + 0.002f * x;
  }
  const PixelwiseKernelField field(traj, Optics(), DepthMap(d));
  const auto all = field.materialize();
  EXPECT_EQ(all.size(), 256u * 192u);
  std::vector<BlurKernel> layers(all.begin(), all.begin() + 32);
  EXPECT_GE(kernel_storage_weights(all), 256u * 192u);
  EXPECT_LT(kernel_storage_weights(layers) * 20, kernel_storage_weights(all));
}

}  // namespace
}  // namespace parallax
