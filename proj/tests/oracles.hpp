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

// Independent reference computations for the tests. Nothing here calls the
// code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "recnet/generator.hpp"

namespace recnet::testing {

// Degree of each vertex by scanning the whole edge list once per vertex.
inline std::map<std::int64_t, std::int64_t> brute_force_degree_counts(
    const std::vector<Edge>& edges, std::int64_t n, bool include_out) {
  std::map<std::int64_t, std::int64_t> counts;
  for (Vertex v = 1; v <= n; ++v) {
    std::int64_t d = 0;
    for (const Edge& e : edges) {
      if (e.target == v) ++d;
      if (include_out && e.source == v) ++d;
    }
    ++counts[d];
  }
  return counts;
}

inline double brute_force_e_of_T(const std::vector<Edge>& edges, std::int64_t T) {
  std::int64_t far = 0;
  for (const Edge& e : edges) far += (e.source - e.target > T) ? 1 : 0;
  return static_cast<double>(far) / static_cast<double>(edges.size());
}

// sum_i q_i exp(-(t - i) / N), accumulated in long double.
inline double direct_exponential_total(const std::vector<double>& q, std::int64_t N) {
  const auto t = static_cast<std::int64_t>(q.size());
  long double sum = 0.0L;
  for (std::int64_t i = 1; i <= t; ++i) {
    sum += static_cast<long double>(q[static_cast<std::size_t>(i - 1)]) *
           std::exp(-static_cast<long double>(t - i) / static_cast<long double>(N));
  }
  return static_cast<double>(sum);
}

// Inverse CDF by linear scan with the strict "prefix exceeds u * total" rule.
inline std::int64_t linear_scan_sample(const std::vector<double>& w, double u) {
  double total = 0.0;
  for (const double x : w) total += x;
  const double threshold = u * total;
  double acc = 0.0;
  std::int64_t last_positive = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) last_positive = static_cast<std::int64_t>(i + 1);
    acc += w[i];
    if (acc > threshold) return static_cast<std::int64_t>(i + 1);
  }
  return last_positive;
}

// Composite Simpson rule on [lo, hi] with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int intervals) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int k = 1; k < intervals; ++k) sum += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace recnet::testing
