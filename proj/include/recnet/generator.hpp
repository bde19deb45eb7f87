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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "recnet/attractiveness.hpp"
#include "recnet/error.hpp"
#include "recnet/quality.hpp"

namespace recnet {

struct ModelParams {
  std::int64_t n = 2;
  std::int64_t m = 1;
  std::int64_t N = 1;
  ParetoParams pareto;
  AttractivenessKind kind = WindowRecency{1};
  SeedSpec seed;
  bool record_weight_trace = false;
  IndexOptions index;

  void validate() const {
    detail::require(n >= 2, "model: n must be >= 2");
    detail::require(m >= 1, "model: m must be >= 1");
    detail::require(N >= 1, "model: N must be >= 1");
    pareto.validate();
    recnet::validate(kind);
    index.validate();
    if (const auto* w = std::get_if<WindowRecency>(&kind)) {
      detail::require(w->N == N, "model: window N does not match N");
    }
    if (const auto* e = std::get_if<ExponentialRecency>(&kind)) {
      detail::require(e->N == N, "model: exponential N does not match N");
    }
  }
};

struct Edge {
  Vertex source = 0;
  Vertex target = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Output of one growth run. Vertices are 1-based; edges are kept in
// generation order, duplicates included. weight_trace[k] is Q(k + 2).
struct GrownGraph {
  std::int64_t n = 0;
  std::optional<ModelParams> params;
  std::vector<double> qualities;
  std::vector<Edge> edges;
  std::optional<std::vector<double>> weight_trace;

  bool has_qualities() const {
    return qualities.size() == static_cast<std::size_t>(n);
  }
};

// First step index stored in a weight trace.
inline constexpr std::int64_t kTraceFirstStep = 2;

inline constexpr std::int64_t kNaiveVertexCap = 10'000;

namespace detail {

inline GrownGraph start_graph(const ModelParams& params) {
  GrownGraph g;
  g.n = params.n;
  g.params = params;
  g.qualities.reserve(static_cast<std::size_t>(params.n));
  g.edges.reserve(static_cast<std::size_t>(1 + params.m * (params.n - 2)));
  if (params.record_weight_trace) {
    g.weight_trace.emplace();
    g.weight_trace->reserve(static_cast<std::size_t>(params.n - 1));
  }
  return g;
}

}  // namespace detail

// Grows G_n with the index-based sampler. Per step the stream yields one
// quality draw for the new vertex followed by m target draws.
inline GrownGraph generate(const ModelParams& params) {
  params.validate();
  GrownGraph g = detail::start_graph(params);
  RandomStream stream = derive_stream(params.seed);
  WeightIndex index(params.kind, params.index);

  for (int i = 0; i < 2; ++i) {
    g.qualities.push_back(pareto_sample(stream, params.pareto));
    index.push(g.qualities.back(), 1);
  }
  g.edges.push_back({2, 1});
  if (g.weight_trace) g.weight_trace->push_back(index.total());

  std::vector<Vertex> targets(static_cast<std::size_t>(params.m));
  for (std::int64_t t = 2; t < params.n; ++t) {
    const double q = pareto_sample(stream, params.pareto);
    for (auto& target : targets) target = index.sample(stream.uniform());
    g.qualities.push_back(q);
    index.push(q, params.m);
    for (const Vertex target : targets) {
      g.edges.push_back({t + 1, target});
      index.record_edge(target);
    }
    if (g.weight_trace) g.weight_trace->push_back(index.total());
  }
  return g;
}

// Reference implementation: recomputes every weight with attr_value and
// samples by linear scan. Consumes the stream exactly like generate().
inline GrownGraph generate_naive(const ModelParams& params,
                                 std::int64_t vertex_cap = kNaiveVertexCap) {
  params.validate();
  detail::require(params.n <= vertex_cap, "generate_naive: n above cap");
  GrownGraph g = detail::start_graph(params);
  RandomStream stream = derive_stream(params.seed);
  std::vector<std::int64_t> degree;
  std::vector<double> weight;

  auto recompute = [&](std::int64_t t) {
    weight.resize(static_cast<std::size_t>(t));
    double total = 0.0;
    for (std::int64_t i = 1; i <= t; ++i) {
      const auto k = static_cast<std::size_t>(i - 1);
      weight[k] = attr_value(params.kind, g.qualities[k], degree[k], i, t);
      total += weight[k];
    }
    return total;
  };

  for (int i = 0; i < 2; ++i) {
    g.qualities.push_back(pareto_sample(stream, params.pareto));
    degree.push_back(1);
  }
  g.edges.push_back({2, 1});
  if (g.weight_trace) g.weight_trace->push_back(recompute(2));

  std::vector<Vertex> targets(static_cast<std::size_t>(params.m));
  for (std::int64_t t = 2; t < params.n; ++t) {
    const double q = pareto_sample(stream, params.pareto);
    const double total = recompute(t);
    detail::require(total > 0.0, "generate_naive: total attractiveness is zero");
    detail::require(std::isfinite(total), "generate_naive: total attractiveness is not finite");
    for (auto& target : targets) {
      const double threshold = stream.uniform() * total;
      double acc = 0.0;
      target = 0;
      Vertex last_positive = 0;
      for (std::int64_t i = 1; i <= t; ++i) {
        const double w = weight[static_cast<std::size_t>(i - 1)];
        if (w > 0.0) last_positive = i;
        acc += w;
        if (acc > threshold) {
          target = i;
          break;
        }
      }
      if (target == 0) target = last_positive;
    }
    g.qualities.push_back(q);
    degree.push_back(params.m);
    for (const Vertex target : targets) {
      g.edges.push_back({t + 1, target});
      ++degree[static_cast<std::size_t>(target - 1)];
    }
    if (g.weight_trace) g.weight_trace->push_back(recompute(t + 1));
  }
  return g;
}

// In-degree of p once its window has closed. Defined for window-mode graphs
// and N <= p <= n - N + 1.
inline std::int64_t in_degree_at_death(const GrownGraph& graph, Vertex p) {
  detail::require(graph.params.has_value() && is_window(graph.params->kind),
                  "in_degree_at_death: requires a window-mode graph");
  const std::int64_t N = graph.params->N;
  detail::require(p >= N && p <= graph.n - N + 1,
                  "in_degree_at_death: vertex outside the fully-lived range");
  std::int64_t count = 0;
  for (const Edge& e : graph.edges) {
    if (e.target == p && e.source <= p + N) ++count;
  }
  return count;
}

}  // namespace recnet
