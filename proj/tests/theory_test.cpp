// Copyright 2026 The recnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "recnet/theory.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace recnet::theory {
namespace {

TEST(AlphaConstant, Cases) {
  EXPECT_EQ(alpha_constant(3.0), 2.0);
  EXPECT_EQ(alpha_constant(2.0000001), 2.0);
  EXPECT_EQ(alpha_constant(1.5), 1.25);
  EXPECT_EQ(alpha_constant(1.5, 1.4), 1.4);
  EXPECT_EQ(alpha_constant(3.0, 1.4), 2.0);  // choice ignored above 2
  EXPECT_THROW(alpha_constant(1.5, 1.5), InvalidArgument);
  EXPECT_THROW(alpha_constant(1.5, 1.0), InvalidArgument);
  EXPECT_THROW(alpha_constant(1.0), InvalidArgument);
}

TEST(AlphaConstant, BelowGamma) {
  for (double g = 1.01; g < 8.0; g += 0.07) EXPECT_LT(alpha_constant(g), g);
}

TEST(PredictedDegreeDensity, HandValues) {
  EXPECT_NEAR(predicted_degree_density(2, 2, 3.0), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(predicted_degree_density(10, 1, 2.0), 5e-4, 1e-18);
}

TEST(PredictedDegreeDensity, DoublingScale) {
  for (double g : {1.3, 2.5, 4.0}) {
    for (std::int64_t m : {1, 3}) {
      for (double d : {1.0, 3.5, 17.0}) {
        EXPECT_NEAR(predicted_degree_density(2 * d, m, g) / predicted_degree_density(d, m, g),
                    std::pow(2.0, -g - 1.0), 1e-12);
      }
    }
  }
}

TEST(PredictedDegreeDensity, PositiveAndDecreasing) {
  double prev = predicted_degree_density(1, 2, 2.2);
  for (double d = 1.5; d < 100; d += 0.5) {
    const double v = predicted_degree_density(d, 2, 2.2);
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(predicted_degree_density(0.5, 2, 2.2), InvalidArgument);
}

TEST(PredictedDegreeDensity, TailIntegral) {
  // Substitute d = d0 / s, s in (0, 1]: integral of f(d0/s) d0 / s^2 ds.
  for (double g : {1.5, 2.5, 3.0}) {
    for (double d0 : {1.0, 4.0}) {
      const auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        return predicted_degree_density(d0 / s, 2, g) * d0 / (s * s);
      };
      const double numeric = testing::simpson(integrand, 0.0, 1.0, 20000);
      const double closed = std::pow((g - 1.0) * 2.0 / (g * d0), g);
      EXPECT_NEAR(numeric, closed, 1e-6 * closed) << "gamma=" << g << " d0=" << d0;
      EXPECT_NEAR(predicted_tail_mass(d0, 2, g), closed, 1e-14);
    }
  }
}

TEST(PredictedEofT, Values) {
  EXPECT_EQ(predicted_eT(WindowRecency{100}, 0, 100), 1.0);
  EXPECT_EQ(predicted_eT(ExponentialRecency{100}, 0, 100), 1.0);
  EXPECT_EQ(predicted_eT(WindowRecency{100}, 50, 100), 0.5);
  EXPECT_NEAR(predicted_eT(ExponentialRecency{100}, 100, 100), 0.36788, 1e-5);
  EXPECT_EQ(predicted_eT(WindowRecency{100}, 100, 100), 0.0);
  EXPECT_EQ(predicted_eT(WindowRecency{100}, 250, 100), 0.0);
  EXPECT_THROW(predicted_eT(AgePower{1.0}, 1, 100), InvalidArgument);
  EXPECT_THROW(predicted_eT(WindowRecency{100}, -1, 100), InvalidArgument);
}

TEST(PredictedEofT, Shapes) {
  const std::int64_t N = 40;
  for (std::int64_t T = 0; T + 1 <= N; ++T) {
    EXPECT_NEAR(predicted_eT(WindowRecency{N}, T, N) - predicted_eT(WindowRecency{N}, T + 1, N),
                1.0 / N, 1e-15);
  }
  for (std::int64_t T = 0; T < 200; ++T) {
    EXPECT_NEAR(std::log(predicted_eT(ExponentialRecency{N}, T + 1, N)) -
                    std::log(predicted_eT(ExponentialRecency{N}, T, N)),
                -1.0 / N, 1e-12);
  }
}

TEST(ConcentrationBound, Values) {
  // n = 55 ~ e^4
  EXPECT_NEAR(concentration_bound(55, 1).prob, 0.5, 0.002);
  EXPECT_NEAR(concentration_bound(55, 1).prob * std::log(55.0), 2.0, 1e-14);
  const auto b = concentration_bound(100'000, 500);
  EXPECT_NEAR(b.radius, std::sqrt(500.0 * 1e5 * std::log(1e5)), 1e-6);
  EXPECT_NEAR(b.radius, 2.40e4, 0.01e4);
  EXPECT_NEAR(concentration_bound(100'000, 2000).radius / b.radius, 2.0, 1e-12);
  EXPECT_THROW(concentration_bound(2, 1), InvalidArgument);
}

TEST(DegreeValidityMax, WindowExample) {
  const double v = degree_validity_max(WindowRecency{500}, 200'000, 500, 3.0, 2.0);
  EXPECT_NEAR(v, std::min(std::pow(400.0, 0.25), std::pow(500.0, 1.0 / 6.0)), 1e-12);
  EXPECT_NEAR(v, 2.82, 0.005);
}

TEST(DegreeValidityMax, MonotoneInNAndExponentialTighter) {
  for (double g : {1.5, 2.5, 4.0}) {
    const double alpha = alpha_constant(g);
    for (std::int64_t N : {10, 500, 5000}) {
      double prev = 0.0;
      for (std::int64_t n = 1000; n <= 100'000'000; n *= 10) {
        const double w = degree_validity_max(WindowRecency{N}, n, N, g, alpha);
        const double e = degree_validity_max(ExponentialRecency{N}, n, N, g, alpha);
        EXPECT_GE(w, prev);
        EXPECT_LE(e, w);
        prev = w;
      }
    }
  }
  EXPECT_THROW(degree_validity_max(GeneralFactorized{}, 1000, 10, 2.0, 1.5), InvalidArgument);
}

}  // namespace
}  // namespace recnet::theory
