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

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "recnet/error.hpp"
#include "recnet/stats.hpp"

namespace recnet {

struct PowerLawFit {
  double exponent_mle = 0.0;
  double exponent_ols = 0.0;
  std::int64_t d_min = 0;
  std::int64_t tail_count = 0;
};

struct DecayFit {
  double scale_estimate = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

inline constexpr std::int64_t kMinTailCount = 10;

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
inline LineFit least_squares(const std::vector<double>& x,
                             const std::vector<double>& y) {
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "least squares: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / k);
  return fit;
}

}  // namespace detail

// Tail exponent of a degree histogram over d >= d_min. The MLE is the
// continuous estimator with the half-integer correction; the OLS slope on the
// log-log histogram is reported alongside as a cross-check.
inline PowerLawFit fit_power_law(const DegreeHistogram& hist, std::int64_t d_min) {
  detail::require(d_min >= 2, "fit_power_law: d_min must be >= 2");
  const double shift = static_cast<double>(d_min) - 0.5;
  std::int64_t tail = 0;
  double log_sum = 0.0;
  std::vector<double> log_d, log_count;
  for (const auto& [d, count] : hist.counts) {
    if (d < d_min || count <= 0) continue;
    tail += count;
    log_sum += static_cast<double>(count) * std::log(static_cast<double>(d) / shift);
    log_d.push_back(std::log(static_cast<double>(d)));
    log_count.push_back(std::log(static_cast<double>(count)));
  }
  detail::require(tail >= kMinTailCount, "fit_power_law: fewer than 10 vertices in the tail");
  detail::require(log_d.size() >= 2, "fit_power_law: degenerate tail (single degree)");
  PowerLawFit fit;
  fit.d_min = d_min;
  fit.tail_count = tail;
  fit.exponent_mle = 1.0 + static_cast<double>(tail) / log_sum;
  fit.exponent_ols = -detail::least_squares(log_d, log_count).slope;
  return fit;
}

// Fits ln e(T) = intercept - T / scale over points with T <= T_max and e > 0.
inline DecayFit fit_exponential_decay(const RecencyCurve& curve, std::int64_t T_max) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    if (p.T <= T_max && p.value > 0.0) {
      x.push_back(static_cast<double>(p.T));
      y.push_back(std::log(p.value));
    }
  }
  detail::require(x.size() >= 4, "fit_exponential_decay: fewer than 4 positive points");
  const auto line = detail::least_squares(x, y);
  detail::require(line.slope < 0.0, "fit_exponential_decay: curve does not decay");
  return {-1.0 / line.slope, line.intercept, line.residual_rms};
}

}  // namespace recnet
