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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "recnet/attractiveness.hpp"
#include "recnet/error.hpp"

// Closed-form asymptotics for the window and exponential recency models.
// The o(1) / O(N/n) corrections are dropped; callers compare with tolerances.
namespace recnet::theory {

// Auxiliary moment order: 2 for gamma > 2, otherwise a caller-chosen value
// in (1, gamma), defaulting to the midpoint.
inline double alpha_constant(double gamma,
                             std::optional<double> alpha_choice = std::nullopt) {
  detail::require(gamma > 1.0, "alpha_constant: gamma must be > 1");
  if (gamma > 2.0) return 2.0;
  if (!alpha_choice) return (1.0 + gamma) / 2.0;
  detail::require(*alpha_choice > 1.0 && *alpha_choice < gamma,
                  "alpha_constant: alpha must lie in (1, gamma)");
  return *alpha_choice;
}

// Limit of E[N_n(d)] / n: gamma / d^(gamma+1) * ((gamma-1) m / gamma)^gamma.
inline double predicted_degree_density(double d, std::int64_t m, double gamma) {
  detail::require(d >= 1.0, "predicted_degree_density: d must be >= 1");
  detail::require(m >= 1, "predicted_degree_density: m must be >= 1");
  detail::require(gamma > 1.0, "predicted_degree_density: gamma must be > 1");
  const double scale = (gamma - 1.0) * static_cast<double>(m) / gamma;
  return gamma * std::pow(d, -gamma - 1.0) * std::pow(scale, gamma);
}

// Integral of the density over [d0, inf).
inline double predicted_tail_mass(double d0, std::int64_t m, double gamma) {
  const double scale = (gamma - 1.0) * static_cast<double>(m) / (gamma * d0);
  return std::pow(scale, gamma);
}

// E[e(T)]: 1 - T/N clipped at 0 for the window, exp(-T/N) for exponential.
inline double predicted_eT(const AttractivenessKind& kind, std::int64_t T,
                           std::int64_t N) {
  detail::require(T >= 0, "predicted_eT: T must be >= 0");
  detail::require(N >= 1, "predicted_eT: N must be >= 1");
  const double ratio = static_cast<double>(T) / static_cast<double>(N);
  if (std::holds_alternative<WindowRecency>(kind)) return std::max(0.0, 1.0 - ratio);
  if (std::holds_alternative<ExponentialRecency>(kind)) return std::exp(-ratio);
  throw InvalidArgument("predicted_eT: no prediction for exploratory kinds");
}

struct ConcentrationBound {
  double radius = 0.0;
  double prob = 0.0;
};

// P(|N_n(d) - E N_n(d)| >= radius) <= prob, radius = sqrt(N n log n).
inline ConcentrationBound concentration_bound(std::int64_t n, std::int64_t N) {
  detail::require(n >= 3, "concentration_bound: n must be >= 3");
  detail::require(N >= 1, "concentration_bound: N must be >= 1");
  const double log_n = std::log(static_cast<double>(n));
  return {std::sqrt(static_cast<double>(N) * static_cast<double>(n) * log_n),
          2.0 / log_n};
}

// Upper end of the degree range where the density formula applies.
inline double degree_validity_max(const AttractivenessKind& kind, std::int64_t n,
                                  std::int64_t N, double gamma, double alpha) {
  detail::require(n >= 2 && N >= 1, "degree_validity_max: bad n or N");
  detail::require(gamma > 1.0 && alpha > 1.0, "degree_validity_max: bad exponents");
  const double nd = static_cast<double>(n);
  const double Nd = static_cast<double>(N);
  if (std::holds_alternative<WindowRecency>(kind)) {
    return std::min(std::pow(nd / Nd, 1.0 / (gamma + 1.0)),
                    std::pow(Nd, (alpha - 1.0) / (gamma + alpha + 1.0)));
  }
  if (std::holds_alternative<ExponentialRecency>(kind)) {
    // log N vanishes at N = 1; the first term is then unbounded.
    const double growth = N > 1 ? std::pow(nd / (Nd * std::log(Nd)), 1.0 / (gamma + 1.0))
                                : std::numeric_limits<double>::infinity();
    return std::min(growth, std::pow(Nd, (alpha - 1.0) /
                                             (alpha + (gamma + 1.0) * (alpha + 1.0))));
  }
  throw InvalidArgument("degree_validity_max: no prediction for exploratory kinds");
}

}  // namespace recnet::theory
