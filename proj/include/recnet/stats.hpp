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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "recnet/error.hpp"
#include "recnet/generator.hpp"

namespace recnet {

enum class DegreeMode { kTotal, kIn };

// N_n(d): number of vertices per degree, multi-edges counted with multiplicity.
struct DegreeHistogram {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t n = 0;
  DegreeMode mode = DegreeMode::kTotal;

  std::int64_t at(std::int64_t d) const {
    const auto it = counts.find(d);
    return it == counts.end() ? 0 : it->second;
  }
};

struct RecencyPoint {
  std::int64_t T = 0;
  double value = 0.0;

  friend bool operator==(const RecencyPoint&, const RecencyPoint&) = default;
};

struct RecencyCurve {
  std::vector<RecencyPoint> points;
};

struct WeightDeviation {
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
};

struct QualityBin {
  double q_low = 0.0;
  double q_high = std::numeric_limits<double>::infinity();
  std::optional<double> mean_in_degree;
  std::int64_t count = 0;
};

struct ConditionalDegreeEstimate {
  std::vector<QualityBin> quality_bins;
};

inline std::vector<std::int64_t> vertex_degrees(const GrownGraph& graph,
                                                DegreeMode mode) {
  std::vector<std::int64_t> degree(static_cast<std::size_t>(graph.n), 0);
  for (const Edge& e : graph.edges) {
    ++degree[static_cast<std::size_t>(e.target - 1)];
    if (mode == DegreeMode::kTotal) ++degree[static_cast<std::size_t>(e.source - 1)];
  }
  return degree;
}

inline DegreeHistogram degree_histogram(const GrownGraph& graph,
                                        DegreeMode mode = DegreeMode::kTotal) {
  DegreeHistogram hist;
  hist.n = graph.n;
  hist.mode = mode;
  for (const std::int64_t d : vertex_degrees(graph, mode)) ++hist.counts[d];
  return hist;
}

// Fraction of edges whose endpoints differ by strictly more than T.
inline double e_of_T(const GrownGraph& graph, std::int64_t T) {
  detail::require(T >= 0, "e_of_T: T must be >= 0");
  if (graph.edges.empty()) return 0.0;
  std::int64_t far = 0;
  for (const Edge& e : graph.edges) {
    if (e.source - e.target > T) ++far;
  }
  return static_cast<double>(far) / static_cast<double>(graph.edges.size());
}

// e(T) over a sorted grid in one pass over the edges.
inline RecencyCurve recency_curve(const GrownGraph& graph,
                                  std::span<const std::int64_t> T_grid) {
  detail::require(std::is_sorted(T_grid.begin(), T_grid.end()),
                  "recency_curve: grid must be sorted ascending");
  detail::require(T_grid.empty() || T_grid.front() >= 0,
                  "recency_curve: T must be >= 0");
  // gaps[g] = number of edges with source - target == g
  std::vector<std::int64_t> gaps(static_cast<std::size_t>(std::max<std::int64_t>(graph.n, 1)), 0);
  for (const Edge& e : graph.edges) ++gaps[static_cast<std::size_t>(e.source - e.target)];
  // suffix[g] = edges with gap >= g
  std::vector<std::int64_t> suffix(gaps.size() + 1, 0);
  for (std::size_t g = gaps.size(); g-- > 0;) suffix[g] = suffix[g + 1] + gaps[g];

  const auto total = static_cast<double>(graph.edges.size());
  RecencyCurve curve;
  for (const std::int64_t T : T_grid) {
    const auto first = static_cast<std::size_t>(T + 1);
    const std::int64_t far = first < suffix.size() ? suffix[first] : 0;
    curve.points.push_back({T, total > 0 ? static_cast<double>(far) / total : 0.0});
  }
  return curve;
}

// Deviation of Q(t) from N * mean_quality over trace[warmup:].
inline WeightDeviation weight_deviation(std::span<const double> trace,
                                        std::int64_t N, double mean_quality,
                                        std::size_t warmup) {
  detail::require(warmup < trace.size(),
                  "weight_deviation: empty range after warmup");
  const double reference = static_cast<double>(N) * mean_quality;
  WeightDeviation dev;
  for (std::size_t k = warmup; k < trace.size(); ++k) {
    dev.max_abs_dev = std::max(dev.max_abs_dev, std::abs(trace[k] - reference));
  }
  dev.max_rel_dev = dev.max_abs_dev / reference;
  return dev;
}

// Trace offset of the first entry with step t >= first_step.
inline std::size_t trace_offset_for_step(std::int64_t first_step) {
  return static_cast<std::size_t>(std::max<std::int64_t>(0, first_step - kTraceFirstStep));
}

// Logarithmically spaced bin edges a, a*ratio, a*ratio^2, ...
inline std::vector<double> log_bin_edges(double a, double ratio, int count) {
  detail::require(a > 0 && ratio > 1 && count >= 1, "log_bin_edges: bad arguments");
  std::vector<double> edges;
  double edge = a;
  for (int i = 0; i < count; ++i, edge *= ratio) edges.push_back(edge);
  return edges;
}

// Mean death-time in-degree per quality bin over N <= p <= n - N + 1.
// Bins are [edges[i], edges[i+1]); the last one is unbounded above.
inline ConditionalDegreeEstimate indegree_by_quality(
    const GrownGraph& graph, std::span<const double> bin_edges) {
  detail::require(graph.params.has_value() && is_window(graph.params->kind),
                  "indegree_by_quality: requires a window-mode graph");
  detail::require(graph.has_qualities(), "indegree_by_quality: qualities missing");
  detail::require(!bin_edges.empty(), "indegree_by_quality: no bins");
  detail::require(std::is_sorted(bin_edges.begin(), bin_edges.end()) &&
                      std::adjacent_find(bin_edges.begin(), bin_edges.end()) ==
                          bin_edges.end(),
                  "indegree_by_quality: bin edges must be strictly increasing");
  detail::require(bin_edges.front() >= graph.params->pareto.a,
                  "indegree_by_quality: bins must start at or above a");

  const std::int64_t N = graph.params->N;
  const std::int64_t n = graph.n;
  std::vector<std::int64_t> in_degree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : graph.edges) {
    if (e.source <= e.target + N) ++in_degree[static_cast<std::size_t>(e.target - 1)];
  }

  ConditionalDegreeEstimate est;
  std::vector<double> sums(bin_edges.size(), 0.0);
  for (std::size_t b = 0; b < bin_edges.size(); ++b) {
    QualityBin bin;
    bin.q_low = bin_edges[b];
    if (b + 1 < bin_edges.size()) bin.q_high = bin_edges[b + 1];
    est.quality_bins.push_back(bin);
  }
  for (std::int64_t p = N; p <= n - N + 1; ++p) {
    const double q = graph.qualities[static_cast<std::size_t>(p - 1)];
    const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), q);
    if (it == bin_edges.begin()) continue;
    const auto b = static_cast<std::size_t>(it - bin_edges.begin() - 1);
    ++est.quality_bins[b].count;
    sums[b] += static_cast<double>(in_degree[static_cast<std::size_t>(p - 1)]);
  }
  for (std::size_t b = 0; b < sums.size(); ++b) {
    auto& bin = est.quality_bins[b];
    if (bin.count > 0) bin.mean_in_degree = sums[b] / static_cast<double>(bin.count);
  }
  return est;
}

}  // namespace recnet
