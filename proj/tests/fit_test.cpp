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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "parallax/blur.hpp"
#include "parallax/errors.hpp"
#include "parallax/fit.hpp"
#include "parallax/metrics.hpp"
#include "parallax/parallel.hpp"
#include "parallax/siren.hpp"

namespace parallax {
namespace {

SirenNetwork ConstantNet(int channels, double value) {
  std::vector<Eigen::MatrixXd> w = {Eigen::MatrixXd::Zero(8, 2), Eigen::MatrixXd::Zero(8, 8),
                                    Eigen::MatrixXd::Zero(channels, 8)};
  std::vector<Eigen::VectorXd> b = {Eigen::VectorXd::Zero(8), Eigen::VectorXd::Zero(8),
                                    Eigen::VectorXd::Constant(channels, value)};
  return SirenNetwork(w, b, 30.0);
}

TEST(SirenNetworkTest, DefaultShapeAndInitRanges) {
  const SirenNetwork net = SirenNetwork::initialize(3, 4, 192, 30.0, 7);
  ASSERT_EQ(net.layer_count(), 5);
  EXPECT_EQ(net.input_size(), 2);
  EXPECT_EQ(net.output_size(), 3);
  EXPECT_EQ(net.parameter_count(), 2u * 192 + 192 + 3 * (192u * 192 + 192) + 192 * 3 + 3);
  EXPECT_LE(net.weight(0).cwiseAbs().maxCoeff(), 0.5);
  EXPECT_GT(net.weight(0).cwiseAbs().maxCoeff(), 0.45);
  const double hidden = std::sqrt(6.0 / 192) / 30.0;
  for (int l = 1; l < 5; ++l) {
    EXPECT_LE(net.weight(l).cwiseAbs().maxCoeff(), hidden);
    EXPECT_GT(net.weight(l).cwiseAbs().maxCoeff(), 0.9 * hidden);
    EXPECT_LE(net.bias(l).cwiseAbs().maxCoeff(), 1.0 / std::sqrt(192.0));
  }
}

TEST(SirenNetworkTest, SeededInitIsReproducible) {
  EXPECT_EQ(SirenNetwork::initialize(3, 2, 16, 30.0, 5),
            SirenNetwork::initialize(3, 2, 16, 30.0, 5));
  EXPECT_FALSE(SirenNetwork::initialize(3, 2, 16, 30.0, 5) ==
               SirenNetwork::initialize(3, 2, 16, 30.0, 6));
}

TEST(SirenNetworkTest, ParameterRoundTrip) {
  SirenNetwork net = SirenNetwork::initialize(2, 2, 8, 30.0, 1);
  const Eigen::VectorXd p = net.parameters();
  SirenNetwork other = SirenNetwork::initialize(2, 2, 8, 30.0, 2);
  other.set_parameters(p);
  EXPECT_EQ(other.parameters(), p);
  EXPECT_THROW(other.set_parameters(Eigen::VectorXd::Zero(3)), ContractViolation);
}

TEST(SirenForwardTest, ZeroWeightsGiveLastBias) {
  const SirenNetwork net = ConstantNet(1, 0.5);
  const Eigen::MatrixXd out = siren_forward(net, pixel_coordinates(7, 5));
  for (int i = 0; i < out.cols(); ++i) EXPECT_EQ(out(0, i), 0.5);
}

TEST(SirenForwardTest, OutputBound) {
  const SirenNetwork net = SirenNetwork::initialize(3, 3, 32, 30.0, 11);
  const Eigen::MatrixXd out = siren_forward(net, pixel_coordinates(20, 20));
  const Eigen::MatrixXd& w = net.weight(net.layer_count() - 1);
  const Eigen::VectorXd& b = net.bias(net.layer_count() - 1);
  for (int c = 0; c < 3; ++c) {
    const double bound = w.row(c).cwiseAbs().sum() + std::abs(b(c));
    EXPECT_LE(out.row(c).cwiseAbs().maxCoeff(), bound);
  }
}

TEST(SirenForwardTest, DeterministicAndPrecisionConsistent) {
  const SirenNetwork net = SirenNetwork::initialize(3, 4, 64, 30.0, 12);
  const Eigen::MatrixXd coords = pixel_coordinates(33, 17);
  const Eigen::MatrixXd a = siren_forward(net, coords);
  EXPECT_EQ(a, siren_forward(net, coords));
  const Eigen::MatrixXd f = siren_forward(net, coords, Precision::kFloat);
  EXPECT_EQ(f, siren_forward(net, coords, Precision::kFloat));
  EXPECT_LE((a - f).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(RenderTest, CoordinatesSpanLongestAxis) {
  const Eigen::MatrixXd one = pixel_coordinates(1, 1);
  EXPECT_EQ(one(0, 0), 0.0);
  EXPECT_EQ(one(1, 0), 0.0);
  const Eigen::MatrixXd c = pixel_coordinates(4, 2);
  // Pixel centers at +-1/4 and +-3/4 of the half-width.
  EXPECT_DOUBLE_EQ(c(0, 0), -0.75);
  EXPECT_DOUBLE_EQ(c(0, 3), 0.75);
  EXPECT_DOUBLE_EQ(c(1, 0), -0.25);
  EXPECT_DOUBLE_EQ(c(1, 4), 0.25);
}

TEST(RenderTest, ConstantNetConstantImage) {
  const ImageD img = render(ConstantNet(3, 0.25), 9, 6);
  for (int c = 0; c < 3; ++c) {
    for (double v : img.plane(c).values()) EXPECT_EQ(v, 0.25);
  }
  const SirenNetwork net = SirenNetwork::initialize(3, 2, 16, 30.0, 13);
  EXPECT_EQ(render(net, 11, 7), render(net, 11, 7));
}

TEST(CosineScheduleTest, HitsEndpointsExactly) {
  const FitConfig config;
  EXPECT_EQ(cosine_learning_rate(config, 0), 5e-4);
  EXPECT_EQ(cosine_learning_rate(config, config.iterations), 5e-6);
  const double mid = cosine_learning_rate(config, config.iterations / 2);
  EXPECT_NEAR(mid, 0.5 * (5e-4 + 5e-6), 1e-15);
  double previous = 1.0;
  for (int t = 0; t <= config.iterations; ++t) {
    const double lr = cosine_learning_rate(config, t);
    EXPECT_LE(lr, previous);
    previous = lr;
  }
}

TEST(TotalVariationTest, HandExample) {
  ImageD img(2, 2, 1);
  img(0, 0, 0) = 0.0;
  img(1, 0, 0) = 1.0;
  img(0, 1, 0) = 0.5;
  img(1, 1, 0) = 0.25;
  // Horizontal |1-0| + |0.25-0.5|, vertical |0.5-0| + |0.25-1|.
  EXPECT_DOUBLE_EQ(total_variation(img), 1.0 + 0.25 + 0.5 + 0.75);
  const ImageD g = total_variation_gradient(img);
  EXPECT_DOUBLE_EQ(g(0, 0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g(1, 1, 0), -2.0);
  EXPECT_DOUBLE_EQ(g(1, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g(0, 1, 0), 2.0);
  EXPECT_EQ(total_variation_gradient(ImageD(3, 3, 1, 0.4))(1, 1, 0), 0.0);
}

TEST(TotalVariationTest, GradientMatchesFiniteDifferences) {
  ImageD img = testing::random_image_d(6, 5, 2, 14);
  const ImageD g = total_variation_gradient(img);
  const double h = 1e-7;
  for (int c = 0; c < 2; ++c) {
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 6; ++x) {
        const double v = img(x, y, c);
        img(x, y, c) = v + h;
        const double up = total_variation(img);
        img(x, y, c) = v - h;
        const double down = total_variation(img);
        img(x, y, c) = v;
        EXPECT_NEAR((up - down) / (2 * h), g(x, y, c), 1e-6);
      }
    }
  }
}

TEST(FitLossTest, ExactFitIsZero) {
  const ImageD target = render(ConstantNet(3, 0.3), 8, 8);
  const LossEvaluation e = fit_loss(ConstantNet(3, 0.3), target, IdentityBlur(), 0.0);
  EXPECT_EQ(e.loss, 0.0);
}

TEST(FitLossTest, ConstantOffsetIsQuadratic) {
  const double delta = 0.125;
  const ImageD observed(10, 6, 1, 0.3 + delta);
  const LossEvaluation e = fit_loss(ConstantNet(1, 0.3), observed, IdentityBlur(), 0.0);
  EXPECT_NEAR(e.loss, 10 * 6 * delta * delta, 1e-12);
  EXPECT_EQ(e.smoothness_term, 0.0);
}

TEST(FitLossTest, ShapeMismatch) {
  const ImageD observed(10, 6, 2, 0.3);
  EXPECT_THROW(fit_loss(ConstantNet(1, 0.3), observed, IdentityBlur(), 0.0), ContractViolation);
}

// Analytic gradient of the full objective against central differences on a
// 2x16 network, 16x16 image and 3x3 blur.
TEST(FitLossTest, GradientMatchesCentralDifferences) {
  SirenNetwork net = SirenNetwork::initialize(3, 2, 16, 30.0, 15);
  const ImageD observed = testing::random_image_d(16, 16, 3, 16);
  const BlurKernel k(3, 3, 1, 1, {0.05, 0.1, 0.05, 0.1, 0.4, 0.1, 0.05, 0.1, 0.05});
  const KernelBlur blur(k);
  const double lambda = FitConfig{}.lambda;
  const LossEvaluation e = fit_loss(net, observed, blur, lambda, Precision::kDouble, true);
  const Eigen::VectorXd p = net.parameters();
  const double h = 1e-4;
  int checked = 0;
  double worst = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    Eigen::VectorXd q = p;
    q(i) = p(i) + h;
    net.set_parameters(q);
    const double up = fit_loss(net, observed, blur, lambda).loss;
    q(i) = p(i) - h;
    net.set_parameters(q);
    const double down = fit_loss(net, observed, blur, lambda).loss;
    const double fd = (up - down) / (2 * h);
    const double g = e.gradient(i);
    if (std::abs(g) < 1e-8 && std::abs(fd) < 1e-8) continue;
    const double rel = std::abs(g - fd) / std::max(std::abs(g), std::abs(fd));
    worst = std::max(worst, rel);
    ++checked;
  }
  net.set_parameters(p);
  EXPECT_EQ(checked, static_cast<int>(p.size()));
  EXPECT_LE(worst, 1e-3);
}

std::vector<int> DifferenceSigns(const ImageD& im) {
  std::vector<int> s;
  for (int c = 0; c < im.channels(); ++c) {
    for (int y = 0; y < im.height(); ++y) {
      for (int x = 0; x < im.width(); ++x) {
        if (x + 1 < im.width()) {
          const double d = im(x + 1, y, c) - im(x, y, c);
          s.push_back((d > 0) - (d < 0));
        }
        if (y + 1 < im.height()) {
          const double d = im(x, y + 1, c) - im(x, y, c);
          s.push_back((d > 0) - (d < 0));
        }
      }
    }
  }
  return s;
}

// With a dominant smoothness term. The L1 term has kinks, so parameters whose
// +-h perturbation flips the sign of any pixel difference have no valid
// central difference and are left out.
TEST(FitLossTest, SmoothnessGradientAwayFromKinks) {
  SirenNetwork net = SirenNetwork::initialize(3, 2, 16, 30.0, 15);
  const ImageD observed = testing::random_image_d(16, 16, 3, 16);
  const KernelBlur blur(BlurKernel(2, 1, 0, 0, {0.5, 0.5}));
  const double lambda = 1.0;
  const LossEvaluation e = fit_loss(net, observed, blur, lambda, Precision::kDouble, true);
  EXPECT_GT(e.smoothness_term, 0.1 * e.data_term);
  const std::vector<int> base = DifferenceSigns(render(net, 16, 16));
  const Eigen::VectorXd p = net.parameters();
  const double h = 1e-4;
  int checked = 0;
  double worst = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    Eigen::VectorXd q = p;
    q(i) = p(i) + h;
    net.set_parameters(q);
    const double up = fit_loss(net, observed, blur, lambda).loss;
    const bool kink_up = DifferenceSigns(render(net, 16, 16)) != base;
    q(i) = p(i) - h;
    net.set_parameters(q);
    const double down = fit_loss(net, observed, blur, lambda).loss;
    const bool kink_down = DifferenceSigns(render(net, 16, 16)) != base;
    if (kink_up || kink_down) continue;
    const double fd = (up - down) / (2 * h);
    const double g = e.gradient(i);
    if (std::abs(g) < 1e-8 && std::abs(fd) < 1e-8) continue;
    worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(g), std::abs(fd)));
    ++checked;
  }
  net.set_parameters(p);
  EXPECT_GE(checked, static_cast<int>(p.size()) / 2);
  EXPECT_LE(worst, 1e-3);
}

TEST(FitTest, IdentityBlurRepresentsTarget) {
  // Measured 81.07 dB with the default recipe; the bound keeps 2 dB of margin.
  const Image target = testing::random_image(32, 32, 3, 0);
  Image smooth(32, 32, 3);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        smooth(x, y, c) = 0.5f + 0.3f * std::sin(0.2f * x + c) * std::cos(0.15f * y) +
                          0.1f * (target(x, y, c) - 0.5f);
      }
    }
  }
  const FitResult r = fit(smooth.cast<double>(), IdentityBlur(), FitConfig{});
  const Image fitted = render(r.network, 32, 32).cast<float>();
  EXPECT_GE(psnr(fitted, smooth), 79.0);
  EXPECT_EQ(r.loss_trace.size(), 400u);
}

TEST(FitTest, DeterministicAcrossRunsAndThreads) {
  const ImageD observed = testing::random_image_d(20, 20, 3, 17);
  ImageD clipped = observed;
  for (int c = 0; c < 3; ++c) {
    for (double& v : clipped.plane(c).values()) v = 0.5 + 0.5 * v;
  }
  FitConfig config;
  config.iterations = 6;
  config.hidden_layers = 2;
  config.hidden_width = 24;
  const KernelBlur blur(BlurKernel(2, 1, 0, 0, {0.5, 0.5}));
  const int saved = thread_count();
  set_thread_count(1);
  const FitResult a = fit(clipped, blur, config);
  const FitResult b = fit(clipped, blur, config);
  set_thread_count(3);
  const FitResult c = fit(clipped, blur, config);
  set_thread_count(saved);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.loss_trace, c.loss_trace);
  EXPECT_EQ(a.network, c.network);
  EXPECT_EQ(a.final_loss, c.final_loss);
}

TEST(FitTest, LossDecreases) {
  const ImageD observed(16, 16, 1, 0.7);
  FitConfig config;
  config.iterations = 50;
  const FitResult r = fit(observed, IdentityBlur(), config);
  EXPECT_LT(r.final_loss, r.loss_trace.front() / 10);
}

TEST(FitTest, DivergenceIsReported) {
  const ImageD observed(8, 8, 1, 0.5);
  FitConfig config;
  config.iterations = 5;
  config.hidden_layers = 1;
  config.hidden_width = 4;
  config.learning_rate = 1e200;
  config.lr_min = 1e199;
  EXPECT_THROW(fit(observed, IdentityBlur(), config), NumericalError);
}

TEST(FitTest, RejectsOutOfRangeObservations) {
  const ImageD observed(8, 8, 1, 1.5);
  FitConfig config;
  config.iterations = 1;
  EXPECT_THROW(fit(observed, IdentityBlur(), config), DomainError);
  config.iterations = 0;
  EXPECT_THROW(config.validate(), DomainError);
}

}  // namespace
}  // namespace parallax
