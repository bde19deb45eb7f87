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
#include <random>

#include "recnet/error.hpp"

namespace recnet {

// Pareto law with density gamma * a^gamma / x^(gamma+1) on x > a.
struct ParetoParams {
  double gamma = 3.0;
  double a = 1.0;

  void validate() const {
    detail::require(std::isfinite(gamma) && gamma > 1.0,
                    "pareto: gamma must be > 1");
    detail::require(std::isfinite(a) && a > 0.0, "pareto: a must be > 0");
  }
};

// Identifies one reproducible random stream: the master seed of a run plus
// the replica index.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic 64-bit engine seed for a (master_seed, stream_id) pair.
// Two rounds of splitmix keep neighbouring stream ids far apart.
constexpr std::uint64_t stream_seed(const SeedSpec& seed) noexcept {
  return detail::splitmix64(detail::splitmix64(seed.master_seed) ^
                            detail::splitmix64(~seed.stream_id));
}

// Sequential source of uniform doubles in [0, 1). Uses 53 high bits of a
// mt19937_64 draw, so the sequence is identical on every platform.
class RandomStream {
 public:
  explicit RandomStream(const SeedSpec& seed) : engine_(stream_seed(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline RandomStream derive_stream(const SeedSpec& seed) {
  return RandomStream(seed);
}

// Inverse CDF of the Pareto law evaluated at u in [0, 1).
inline double pareto_quantile(double u, const ParetoParams& p) {
  return p.a * std::pow(1.0 - u, -1.0 / p.gamma);
}

inline double pareto_sample(RandomStream& stream, const ParetoParams& p) {
  return pareto_quantile(stream.uniform(), p);
}

inline double pareto_mean(const ParetoParams& p) {
  detail::require(p.gamma > 1.0, "pareto_mean: gamma must be > 1");
  return p.gamma * p.a / (p.gamma - 1.0);
}

}  // namespace recnet
