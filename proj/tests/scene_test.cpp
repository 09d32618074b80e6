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
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parallax/ablation.hpp"
#include "parallax/fig3.hpp"
#include "parallax/geometry.hpp"
#include "parallax/pipeline.hpp"
#include "parallax/scene.hpp"

namespace parallax {
namespace {

TEST(SceneTest, MacroHasNearForeground) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SceneFixture f = gen_scene(ScenePreset::kMacro, 64, seed);
    EXPECT_LE(f.depth.min_depth(), 0.1f);
    EXPECT_GE(f.depth.max_depth(), 0.25f);
    const Eigen::Vector2d s = f.trajectory.max_in_plane_offset();
    EXPECT_LE(std::max(s.x(), s.y()), 3e-3 + 1e-12);
    EXPECT_GT(std::max(s.x(), s.y()), 0.0);
  }
}

TEST(SceneTest, FixedSeedIsReproducible) {
  const SceneFixture a = gen_scene(ScenePreset::kTrucking, 48, 7);
  const SceneFixture b = gen_scene(ScenePreset::kTrucking, 48, 7);
  EXPECT_EQ(a.sharp, b.sharp);
  EXPECT_EQ(a.depth.raster(), b.depth.raster());
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (int i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory.poses()[i].translation, b.trajectory.poses()[i].translation);
  }
  const SceneFixture c = gen_scene(ScenePreset::kTrucking, 48, 8);
  EXPECT_NE(a.sharp, c.sharp);
}

TEST(SceneTest, TextureStaysInRange) {
  const SceneFixture f = gen_scene(ScenePreset::kMacro, 64, 2);
  for (int c = 0; c < f.sharp.channels(); ++c) {
    for (float v : f.sharp.plane(c).values()) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
}

TEST(SceneTest, TruckingPathIsLinear) {
  const SceneFixture f = gen_scene(ScenePreset::kTrucking, 64, 3);
  const auto offsets = f.trajectory.in_plane_offsets();
  ASSERT_GE(offsets.size(), 3u);
  const Eigen::Vector2d step = offsets[1] - offsets[0];
  ASSERT_GT(step.norm(), 0.0);
  for (std::size_t i = 1; i + 1 < offsets.size(); ++i) {
    EXPECT_LE((offsets[i + 1] - offsets[i] - step).norm(), 1e-12 * (1 + step.norm()));
  }
  EXPECT_GE(f.depth.min_depth(), 4.0f);
}

TEST(SceneTest, StandardSceneHasNoParallax) {
  const SceneFixture f = gen_scene(ScenePreset::kStandard, 64, 4);
  const IcbModel model = build_icb_model(f.depth, f.trajectory, f.intrinsics, BlurConfig{});
  for (const BlurKernel& k : model.kernels) EXPECT_TRUE(k.is_identity());
  const Image out = blur_icb(f.sharp, model);
  EXPECT_LE(testing::max_abs_diff(out, f.sharp), 1e-6);
}

TEST(SceneTest, SmoothSceneDepthIsContinuous) {
  const SceneFixture f = gen_smooth_scene(ScenePreset::kMacro, 64, 5);
  double worst = 0.0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x + 1 < 64; ++x) {
      worst = std::max(worst, std::abs(1.0 / f.depth(x + 1, y) - 1.0 / f.depth(x, y)));
    }
  }
  const double range = 1.0 / f.depth.min_depth() - 1.0 / f.depth.max_depth();
  EXPECT_LE(worst, range / 32);
}

TEST(SceneTest, ShakeAmplitudeIsExact) {
  const Trajectory t = shake_trajectory(64, 2e-3, 9);
  double peak = 0.0;
  for (const auto& o : t.in_plane_offsets()) peak = std::max(peak, o.cwiseAbs().maxCoeff());
  EXPECT_NEAR(peak, 2e-3, 1e-12);
}

TEST(SceneTest, PresetNames) {
  for (ScenePreset p : {ScenePreset::kMacro, ScenePreset::kTrucking, ScenePreset::kStandard}) {
    EXPECT_EQ(parse_preset(to_string(p)), p);
  }
  EXPECT_ANY_THROW(parse_preset("portrait"));
}

TEST(Fig3Test, VariationAtOneMeterFarLimit) {
  // 3 mm at 1 m with F = 2.8 mm and 4 um pixels: 2.1 px as the far plane
  // recedes to infinity.
  const CameraIntrinsics cam(2.8e-3, 4e-6, 4e-6, 100, 100);
  EXPECT_NEAR(blur_variation(3e-3, cam, 1.0, 1e12) / 4e-6, 2.1, 1e-9);
}

TEST(Fig3Test, CurvesRespectBoundAndInvert) {
  const Fig3Config config;
  const auto points = fig3_data(config);
  ASSERT_EQ(points.size(), config.near_depths.size() * config.points);
  for (const Fig3Point& p : points) {
    const double bound = config.displacement * config.focal_length /
                         (p.near_depth * config.pixel_pitch);
    EXPECT_GT(p.variation_px, 0.0);
    EXPECT_LT(p.variation_px, bound);
    const double back = displacement_for_variation(p.variation_px, p.near_depth, p.delta_depth,
                                                   config.focal_length, config.pixel_pitch);
    EXPECT_NEAR(back, config.displacement, 1e-9 * config.displacement);
    const CameraIntrinsics cam(config.focal_length, config.pixel_pitch, config.pixel_pitch,
                               1, 1);
    EXPECT_NEAR(blur_variation(p.displacement_m, cam, p.near_depth, p.delta_depth) /
                    config.pixel_pitch,
                config.target_variation_px, 1e-9 * config.target_variation_px);
  }
}

TEST(Fig3Test, VariationGrowsWithDepthGap) {
  const auto points = fig3_data(Fig3Config{});
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].near_depth != points[i - 1].near_depth) continue;
    EXPECT_GT(points[i].delta_depth, points[i - 1].delta_depth);
    EXPECT_GT(points[i].variation_px, points[i - 1].variation_px);
  }
}

TEST(Fig3Test, CsvShape) {
  Fig3Config config;
  config.near_depths = {0.5};
  config.points = 3;
  const std::string csv = fig3_csv(fig3_data(config));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "schema_version,near_depth_m,delta_depth_m,variation_px,displacement_m");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

class AblationTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    AblationConfig config;
    config.sigmas = {1.0, 4.0};
    config.fixtures_per_preset = 1;
    config.size = 64;
    config.timing_repeats = 1;
    config_ = config;
    rows_ = run_ablation(config);
  }

  static AblationConfig config_;
  static std::vector<AblationRow> rows_;
};

AblationConfig AblationTest::config_;
std::vector<AblationRow> AblationTest::rows_;

TEST_F(AblationTest, GridOrder) {
  ASSERT_EQ(rows_.size(), 2u * 2u * 3u);
  EXPECT_EQ(rows_[0].preset, ScenePreset::kMacro);
  EXPECT_EQ(rows_[0].sigma, 1.0);
  EXPECT_EQ(rows_[0].n, 1);
  EXPECT_EQ(rows_[1].n, 2);
  EXPECT_EQ(rows_[3].sigma, 4.0);
  EXPECT_EQ(rows_[6].preset, ScenePreset::kTrucking);
}

TEST_F(AblationTest, CoarserSequencesUseFewerLayers) {
  for (std::size_t i = 0; i < rows_.size(); i += 3) {
    EXPECT_GT(rows_[i].layers, rows_[i + 1].layers);
    EXPECT_GT(rows_[i + 1].layers, rows_[i + 2].layers);
    EXPECT_GT(rows_[i].kernel_bytes, rows_[i + 2].kernel_bytes);
  }
  for (const AblationRow& r : rows_) {
    EXPECT_GT(r.psnr, 35.0);
    EXPECT_GT(r.ssim, 0.95);
    EXPECT_LE(r.ssim, 1.0);
  }
}

// Single macro fixtures at this size can swap neighbouring n by a few tenths
// of a dB, so the ordering is checked on the mean over both presets.
TEST_F(AblationTest, MeanPsnrDropsWithCoarserSequences) {
  const std::size_t per_preset = 6;
  for (std::size_t j = 0; j < per_preset; j += 3) {
    double mean[3] = {0.0, 0.0, 0.0};
    for (std::size_t base = 0; base < rows_.size(); base += per_preset) {
      for (int k = 0; k < 3; ++k) mean[k] += rows_[base + j + k].psnr / 2;
    }
    EXPECT_GE(mean[0] + 0.05, mean[1]) << "sigma " << rows_[j].sigma;
    EXPECT_GE(mean[1] + 0.05, mean[2]) << "sigma " << rows_[j].sigma;
  }
}

TEST_F(AblationTest, MetricsAreDeterministic) {
  const auto again = run_ablation(config_);
  ASSERT_EQ(again.size(), rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    EXPECT_EQ(again[i].psnr, rows_[i].psnr);
    EXPECT_EQ(again[i].ssim, rows_[i].ssim);
    EXPECT_EQ(again[i].layers, rows_[i].layers);
    EXPECT_EQ(again[i].kernel_bytes, rows_[i].kernel_bytes);
  }
}

TEST_F(AblationTest, SummaryAveragesFixtures) {
  AblationRow a = rows_[0];
  AblationRow b = rows_[0];
  b.fixture = 1;
  b.psnr = a.psnr + 2.0;
  const auto summary = summarize_ablation({a, b});
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_DOUBLE_EQ(summary[0].psnr, a.psnr + 1.0);
  const std::string csv = ablation_csv(summary, true);
  EXPECT_EQ(csv.rfind("schema_version,scene,fixture,sigma,n,layers,psnr,ssim,time_s,kernel_bytes\n", 0),
            0u);
  EXPECT_NE(csv.find(",mean,"), std::string::npos);
}

}  // namespace
}  // namespace parallax
