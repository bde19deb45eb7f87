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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "recnet/error.hpp"
#include "recnet/fitting.hpp"
#include "recnet/generator.hpp"
#include "recnet/io.hpp"
#include "recnet/stats.hpp"
#include "recnet/theory.hpp"

namespace recnet {

struct ExperimentConfig {
  ModelParams params;  // params.seed.master_seed is the ensemble master seed
  std::int64_t replicas = 1;
  // Defaults to 0..replicas-1 when empty.
  std::vector<std::uint64_t> stream_ids;
  std::vector<std::int64_t> T_grid;
  std::int64_t d_lo = 1;
  std::int64_t d_hi = 20;
  std::filesystem::path output_dir;
  // 0 means one worker per available processor.
  unsigned parallelism = 0;
  std::optional<std::int64_t> fit_d_min;    // default 2m
  std::optional<std::int64_t> decay_T_max;  // default max of T_grid
  std::optional<double> alpha_choice;
  std::optional<std::int64_t> warmup_step;  // default ceil(N ln N)

  std::vector<std::uint64_t> resolved_stream_ids() const {
    if (!stream_ids.empty()) return stream_ids;
    std::vector<std::uint64_t> ids(static_cast<std::size_t>(replicas));
    std::iota(ids.begin(), ids.end(), std::uint64_t{0});
    return ids;
  }

  std::int64_t resolved_fit_d_min() const {
    return fit_d_min.value_or(std::max<std::int64_t>(2, 2 * params.m));
  }

  std::int64_t resolved_warmup_step() const {
    if (warmup_step) return *warmup_step;
    const auto N = static_cast<double>(params.N);
    return static_cast<std::int64_t>(std::ceil(N * std::log(N)));
  }

  void validate() const {
    params.validate();
    detail::require(replicas >= 1, "experiment: replicas must be >= 1");
    detail::require(stream_ids.empty() ||
                        stream_ids.size() == static_cast<std::size_t>(replicas),
                    "experiment: stream_ids must list one id per replica");
    auto ids = resolved_stream_ids();
    std::sort(ids.begin(), ids.end());
    detail::require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(),
                    "experiment: stream_ids must be distinct");
    detail::require(d_lo >= 1 && d_lo <= d_hi, "experiment: need 1 <= d_lo <= d_hi");
    detail::require(std::is_sorted(T_grid.begin(), T_grid.end()) &&
                        (T_grid.empty() || T_grid.front() >= 0),
                    "experiment: T_grid must be sorted and non-negative");
  }
};

// Statistics of one replica; the graph itself is discarded.
struct ReplicaResult {
  std::uint64_t stream_id = 0;
  std::uint64_t engine_seed = 0;
  DegreeHistogram histogram;
  std::vector<double> e_of_T;
  std::optional<WeightDeviation> weight;
};

struct DegreeRow {
  std::int64_t d = 0;
  double mean = 0.0;  // ensemble mean of N_n(d) / n
  double stddev = 0.0;
  std::optional<double> theory;
  std::optional<double> rel_error;
  bool in_validity = false;
};

struct RecencyRow {
  std::int64_t T = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::optional<double> theory;
  std::optional<double> abs_error;
};

struct ConcentrationRow {
  std::int64_t d = 0;
  double ensemble_mean_count = 0.0;
  double radius = 0.0;
  double prob_bound = 0.0;
  double fraction_within = 0.0;
};

struct WeightTraceSummary {
  std::int64_t warmup_step = 0;
  double reference = 0.0;  // N * E[zeta]
  std::vector<double> max_rel_dev;  // per replica, report order
  std::vector<double> max_abs_dev;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::optional<double> alpha;
  std::optional<double> validity_max;
  std::vector<DegreeRow> degrees;
  std::vector<RecencyRow> recency;
  std::vector<ConcentrationRow> concentration;
  std::optional<WeightTraceSummary> weight_trace;
  std::optional<PowerLawFit> power_law;
  std::string power_law_error;
  std::optional<DecayFit> decay;
  std::string decay_error;
  std::vector<ReplicaResult> replicas;  // report order (config stream order)
};

class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(std::uint64_t stream_id, const std::string& what)
      : std::runtime_error("replica " + std::to_string(stream_id) + ": " + what),
        stream_id_(stream_id) {}
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t stream_id_;
};

inline ReplicaResult run_replica(const ExperimentConfig& config, std::uint64_t stream_id) {
  ModelParams params = config.params;
  params.seed.stream_id = stream_id;
  const GrownGraph graph = generate(params);

  ReplicaResult r;
  r.stream_id = stream_id;
  r.engine_seed = stream_seed(params.seed);
  r.histogram = degree_histogram(graph, DegreeMode::kTotal);
  for (const auto& p : recency_curve(graph, config.T_grid).points) r.e_of_T.push_back(p.value);
  if (graph.weight_trace) {
    const std::size_t offset = trace_offset_for_step(config.resolved_warmup_step());
    if (offset < graph.weight_trace->size()) {
      r.weight = weight_deviation(*graph.weight_trace, params.N,
                                  pareto_mean(params.pareto), offset);
    }
  }
  return r;
}

namespace detail {

inline std::vector<ReplicaResult> run_replicas(const ExperimentConfig& config) {
  const auto ids = config.resolved_stream_ids();
  std::vector<ReplicaResult> results(ids.size());
  std::vector<std::exception_ptr> errors(ids.size());
  unsigned workers = config.parallelism;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(ids.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < ids.size(); k = next++) {
      try {
        results[k] = run_replica(config, ids[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw ReplicaError(ids[k], e.what());
    }
  }
  return results;
}

// Mean and sample standard deviation; stddev is 0 for a single value.
inline std::pair<double, double> mean_stddev(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

// Aggregates per-replica results. Reductions run in ascending stream-id order,
// so ensemble values do not depend on the order replicas were listed in.
inline ExperimentReport aggregate(const ExperimentConfig& config,
                                  std::vector<ReplicaResult> results) {
  ExperimentReport report;
  report.config = config;
  const ModelParams& p = config.params;
  const bool analyzed = has_theory(p.kind);
  const auto n = static_cast<double>(p.n);

  std::vector<const ReplicaResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->stream_id < b->stream_id; });

  if (analyzed) {
    report.alpha = theory::alpha_constant(p.pareto.gamma, config.alpha_choice);
    report.validity_max =
        theory::degree_validity_max(p.kind, p.n, p.N, p.pareto.gamma, *report.alpha);
  }

  const bool bounded = p.n >= 3;
  const auto bound = bounded ? theory::concentration_bound(p.n, p.N) : theory::ConcentrationBound{};
  for (std::int64_t d = config.d_lo; d <= config.d_hi; ++d) {
    std::vector<double> fraction, count;
    for (const auto* r : sorted) {
      count.push_back(static_cast<double>(r->histogram.at(d)));
      fraction.push_back(count.back() / n);
    }
    DegreeRow row;
    row.d = d;
    std::tie(row.mean, row.stddev) = detail::mean_stddev(fraction);
    if (analyzed) {
      row.theory = theory::predicted_degree_density(static_cast<double>(d), p.m, p.pareto.gamma);
      row.rel_error = std::abs(row.mean - *row.theory) / *row.theory;
      row.in_validity = static_cast<double>(d) <= *report.validity_max;
    }
    report.degrees.push_back(row);

    if (bounded) {
      ConcentrationRow c;
      c.d = d;
      c.ensemble_mean_count = detail::mean_stddev(count).first;
      c.radius = bound.radius;
      c.prob_bound = bound.prob;
      std::size_t within = 0;
      for (const double x : count) {
        if (std::abs(x - c.ensemble_mean_count) <= c.radius) ++within;
      }
      c.fraction_within = static_cast<double>(within) / static_cast<double>(count.size());
      report.concentration.push_back(c);
    }
  }

  RecencyCurve mean_curve;
  for (std::size_t k = 0; k < config.T_grid.size(); ++k) {
    std::vector<double> values;
    for (const auto* r : sorted) values.push_back(r->e_of_T[k]);
    RecencyRow row;
    row.T = config.T_grid[k];
    std::tie(row.mean, row.stddev) = detail::mean_stddev(values);
    if (analyzed) {
      row.theory = theory::predicted_eT(p.kind, row.T, p.N);
      row.abs_error = std::abs(row.mean - *row.theory);
    }
    report.recency.push_back(row);
    mean_curve.points.push_back({row.T, row.mean});
  }

  if (p.record_weight_trace) {
    WeightTraceSummary w;
    w.warmup_step = config.resolved_warmup_step();
    w.reference = static_cast<double>(p.N) * pareto_mean(p.pareto);
    for (const auto& r : results) {
      if (!r.weight) continue;
      w.max_rel_dev.push_back(r.weight->max_rel_dev);
      w.max_abs_dev.push_back(r.weight->max_abs_dev);
    }
    report.weight_trace = w;
  }

  DegreeHistogram pooled;
  pooled.n = 0;
  for (const auto* r : sorted) {
    pooled.n += r->histogram.n;
    for (const auto& [d, c] : r->histogram.counts) pooled.counts[d] += c;
  }
  try {
    report.power_law = fit_power_law(pooled, config.resolved_fit_d_min());
  } catch (const InvalidArgument& e) {
    report.power_law_error = e.what();
  }
  if (!config.T_grid.empty()) {
    try {
      report.decay =
          fit_exponential_decay(mean_curve, config.decay_T_max.value_or(config.T_grid.back()));
    } catch (const InvalidArgument& e) {
      report.decay_error = e.what();
    }
  } else {
    report.decay_error = "no T grid";
  }

  report.replicas = std::move(results);
  return report;
}

// --- JSON -----------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json config_to_json(const ExperimentConfig& c) {
  const ModelParams& p = c.params;
  Json j;
  j["n"] = p.n;
  j["m"] = p.m;
  j["N"] = p.N;
  j["gamma"] = p.pareto.gamma;
  j["a"] = p.pareto.a;
  j["kind"] = kind_name(p.kind);
  j["seed"] = p.seed.master_seed;
  j["replicas"] = c.replicas;
  j["stream_ids"] = c.resolved_stream_ids();
  j["T_grid"] = c.T_grid;
  j["d_lo"] = c.d_lo;
  j["d_hi"] = c.d_hi;
  j["record_weight_trace"] = p.record_weight_trace;
  j["fit_d_min"] = c.resolved_fit_d_min();
  j["decay_T_max"] = c.decay_T_max ? Json(*c.decay_T_max)
                                   : (c.T_grid.empty() ? Json(nullptr) : Json(c.T_grid.back()));
  j["alpha"] = c.alpha_choice ? Json(*c.alpha_choice) : Json(nullptr);
  j["warmup_step"] = c.resolved_warmup_step();
  j["rescale_cap"] = p.index.rescale_cap;
  j["truncation_epsilon"] = p.index.truncation_epsilon;
  return j;
}

namespace detail {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
T json_get(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("config: field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

// Reads a config object. Unknown keys are rejected.
inline ExperimentConfig config_from_json(const Json& j) {
  static const char* const known[] = {
      "n", "m", "N", "gamma", "a", "kind", "seed", "replicas", "stream_ids", "T_grid",
      "d_lo", "d_hi", "output_dir", "parallelism", "record_weight_trace", "fit_d_min",
      "decay_T_max", "alpha", "warmup_step", "rescale_cap", "truncation_epsilon"};
  detail::require(j.is_object(), "config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    detail::require(std::find(std::begin(known), std::end(known), key) != std::end(known),
                    "config: unknown field '" + key + "'");
  }
  ExperimentConfig c;
  ModelParams& p = c.params;
  p.n = detail::json_get<std::int64_t>(j, "n", p.n);
  p.m = detail::json_get<std::int64_t>(j, "m", p.m);
  p.N = detail::json_get<std::int64_t>(j, "N", p.N);
  p.pareto.gamma = detail::json_get<double>(j, "gamma", p.pareto.gamma);
  p.pareto.a = detail::json_get<double>(j, "a", p.pareto.a);
  p.kind = parse_kind(detail::json_get<std::string>(j, "kind", "window"), p.N);
  p.seed.master_seed = detail::json_get<std::uint64_t>(j, "seed", 0);
  p.record_weight_trace = detail::json_get<bool>(j, "record_weight_trace", false);
  p.index.rescale_cap = detail::json_get<double>(j, "rescale_cap", p.index.rescale_cap);
  p.index.truncation_epsilon =
      detail::json_get<double>(j, "truncation_epsilon", p.index.truncation_epsilon);
  c.replicas = detail::json_get<std::int64_t>(j, "replicas", c.replicas);
  c.stream_ids = detail::json_get<std::vector<std::uint64_t>>(j, "stream_ids", {});
  c.T_grid = detail::json_get<std::vector<std::int64_t>>(j, "T_grid", {});
  c.d_lo = detail::json_get<std::int64_t>(j, "d_lo", c.d_lo);
  c.d_hi = detail::json_get<std::int64_t>(j, "d_hi", c.d_hi);
  c.output_dir = detail::json_get<std::string>(j, "output_dir", "");
  c.parallelism = detail::json_get<unsigned>(j, "parallelism", 0);
  if (j.contains("fit_d_min") && !j["fit_d_min"].is_null()) {
    c.fit_d_min = detail::json_get<std::int64_t>(j, "fit_d_min", 0);
  }
  if (j.contains("decay_T_max") && !j["decay_T_max"].is_null()) {
    c.decay_T_max = detail::json_get<std::int64_t>(j, "decay_T_max", 0);
  }
  if (j.contains("alpha") && !j["alpha"].is_null()) {
    c.alpha_choice = detail::json_get<double>(j, "alpha", 0.0);
  }
  if (j.contains("warmup_step") && !j["warmup_step"].is_null()) {
    c.warmup_step = detail::json_get<std::int64_t>(j, "warmup_step", 0);
  }
  return c;
}

inline Json power_law_to_json(const PowerLawFit& f) {
  return Json{{"exponent_mle", f.exponent_mle},
              {"exponent_ols", f.exponent_ols},
              {"d_min", f.d_min},
              {"tail_count", f.tail_count}};
}

inline Json decay_to_json(const DecayFit& f) {
  return Json{{"scale_estimate", f.scale_estimate},
              {"intercept", f.intercept},
              {"residual_rms", f.residual_rms}};
}

inline Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["config"] = config_to_json(r.config);
  j["alpha"] = detail::optional_json(r.alpha);
  j["validity_max"] = detail::optional_json(r.validity_max);

  j["degrees"] = Json::array();
  for (const auto& row : r.degrees) {
    j["degrees"].push_back({{"d", row.d},
                            {"mean", row.mean},
                            {"stddev", row.stddev},
                            {"theory", detail::optional_json(row.theory)},
                            {"rel_error", detail::optional_json(row.rel_error)},
                            {"in_validity", row.in_validity}});
  }
  j["recency"] = Json::array();
  for (const auto& row : r.recency) {
    j["recency"].push_back({{"T", row.T},
                            {"mean", row.mean},
                            {"stddev", row.stddev},
                            {"theory", detail::optional_json(row.theory)},
                            {"abs_error", detail::optional_json(row.abs_error)}});
  }
  j["concentration"] = Json::array();
  for (const auto& row : r.concentration) {
    j["concentration"].push_back({{"d", row.d},
                                  {"ensemble_mean_count", row.ensemble_mean_count},
                                  {"radius", row.radius},
                                  {"prob_bound", row.prob_bound},
                                  {"fraction_within", row.fraction_within}});
  }
  if (r.weight_trace) {
    j["weight_trace"] = {{"warmup_step", r.weight_trace->warmup_step},
                         {"reference", r.weight_trace->reference},
                         {"max_rel_dev", r.weight_trace->max_rel_dev},
                         {"max_abs_dev", r.weight_trace->max_abs_dev}};
  } else {
    j["weight_trace"] = nullptr;
  }
  Json fits;
  fits["power_law"] = r.power_law ? power_law_to_json(*r.power_law) : Json(nullptr);
  if (!r.power_law) fits["power_law_error"] = r.power_law_error;
  fits["decay"] = r.decay ? decay_to_json(*r.decay) : Json(nullptr);
  if (!r.decay) fits["decay_error"] = r.decay_error;
  j["fits"] = fits;

  j["seeds"] = Json::array();
  for (const auto& rep : r.replicas) {
    j["seeds"].push_back({{"stream_id", rep.stream_id},
                          {"master_seed", r.config.params.seed.master_seed},
                          {"engine_seed", rep.engine_seed}});
  }
  return j;
}

inline void write_report_files(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw io::IoError("cannot write " + (dir / name).string());
    return out;
  };
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  {
    auto out = open("report.json");
    out << report_to_json(r).dump(2) << '\n';
  }
  {
    auto out = open("degree_table.csv");
    out << "d,mean,stddev,theory,rel_error,in_validity\n";
    for (const auto& row : r.degrees) {
      out << row.d << ',' << format_double(row.mean) << ',' << format_double(row.stddev) << ','
          << cell(row.theory) << ',' << cell(row.rel_error) << ','
          << (row.in_validity ? 1 : 0) << '\n';
    }
  }
  {
    auto out = open("recency_table.csv");
    out << "T,mean,stddev,theory,abs_error\n";
    for (const auto& row : r.recency) {
      out << row.T << ',' << format_double(row.mean) << ',' << format_double(row.stddev) << ','
          << cell(row.theory) << ',' << cell(row.abs_error) << '\n';
    }
  }
}

// Runs every replica, aggregates and, when output_dir is set, writes
// report.json, degree_table.csv and recency_table.csv there.
inline ExperimentReport run_ensemble(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report = aggregate(config, detail::run_replicas(config));
  if (!config.output_dir.empty()) write_report_files(report, config.output_dir);
  return report;
}

// --- comparison -------------------------------------------------------------

struct TheoryComparison {
  std::vector<DegreeRow> degrees;
  std::vector<RecencyRow> recency;
  std::int64_t rows_in_validity = 0;
  std::int64_t rows_flagged = 0;
  // Over in-validity rows only; absent when there are none.
  std::optional<double> max_rel_error;
  std::optional<double> max_abs_recency_error;
};

inline TheoryComparison compare_to_theory(const ExperimentReport& report) {
  TheoryComparison cmp;
  cmp.degrees = report.degrees;
  cmp.recency = report.recency;
  for (const auto& row : report.degrees) {
    if (!row.rel_error) continue;
    if (!row.in_validity) {
      ++cmp.rows_flagged;
      continue;
    }
    ++cmp.rows_in_validity;
    cmp.max_rel_error = std::max(cmp.max_rel_error.value_or(0.0), *row.rel_error);
  }
  for (const auto& row : report.recency) {
    if (!row.abs_error) continue;
    cmp.max_abs_recency_error = std::max(cmp.max_abs_recency_error.value_or(0.0), *row.abs_error);
  }
  return cmp;
}

}  // namespace recnet
