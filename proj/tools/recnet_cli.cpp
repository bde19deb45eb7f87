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

// recnet: generate recency-based preferential-attachment graphs, compute
// their statistics, print closed-form predictions, fit tails and decay, and
// run replica ensembles.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recnet/recnet.hpp"

namespace {

namespace fs = std::filesystem;
using recnet::Json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Converts a precondition failure raised while assembling inputs.
template <typename Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const recnet::InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw recnet::io::IoError("cannot write " + path.string());
  return out;
}

struct ModelFlags {
  std::int64_t n = 0;
  std::int64_t m = 1;
  std::int64_t N = 1;
  double gamma = 3.0;
  double a = 1.0;
  std::string kind = "window";
  std::uint64_t seed = 0;
  double rescale_cap = recnet::IndexOptions{}.rescale_cap;
  double epsilon = recnet::IndexOptions{}.truncation_epsilon;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool required) {
  auto* n = cmd->add_option("--n", f.n, "number of vertices (count, >= 2)");
  auto* m = cmd->add_option("--m", f.m, "outdegree of each new vertex (edges per step, >= 1)");
  auto* N = cmd->add_option("--N", f.N, "recency scale: window length or decay time (steps, >= 1)");
  if (required) {
    n->required();
    m->required();
    N->required();
  }
  cmd->add_option("--gamma", f.gamma, "Pareto quality exponent (dimensionless, > 1)")
      ->capture_default_str();
  cmd->add_option("--a", f.a, "minimum quality (dimensionless, > 0)")->capture_default_str();
  cmd->add_option("--kind", f.kind,
                  "attractiveness: window | exp | general:<a1><a2><a3>:<tau> | "
                  "agepower:<exponent>")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed (decimal 64-bit integer)")->capture_default_str();
  cmd->add_option("--rescale-cap", f.rescale_cap,
                  "decay exponent that triggers a rebase (natural-log units)")
      ->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon,
                  "relative cutoff for decayed weights at rebase (fraction of total)")
      ->capture_default_str();
}

recnet::ModelParams to_params(const ModelFlags& f) {
  return as_usage([&] {
    recnet::ModelParams p;
    p.n = f.n;
    p.m = f.m;
    p.N = f.N;
    p.pareto = {f.gamma, f.a};
    p.kind = recnet::parse_kind(f.kind, f.N);
    p.seed.master_seed = f.seed;
    p.index.rescale_cap = f.rescale_cap;
    p.index.truncation_epsilon = f.epsilon;
    p.validate();
    return p;
  });
}

// --- generate ---------------------------------------------------------------

struct GenerateFlags {
  ModelFlags model;
  fs::path out = "graph.edges";
  fs::path qualities_out;
  bool trace = false;
};

int run_generate(const GenerateFlags& f) {
  recnet::ModelParams params = to_params(f.model);
  params.record_weight_trace = f.trace;

  const auto start = std::chrono::steady_clock::now();
  const recnet::GrownGraph graph = recnet::generate(params);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  {
    auto out = open_output(f.out);
    recnet::io::write_edge_list(out, graph);
  }
  const fs::path qpath = f.qualities_out.empty() ? fs::path(f.out.string() + ".qualities")
                                                 : f.qualities_out;
  {
    auto out = open_output(qpath);
    recnet::io::write_qualities(out, graph.qualities);
  }
  if (graph.weight_trace) {
    auto out = open_output(f.out.string() + ".trace.csv");
    recnet::io::write_weight_trace(out, *graph.weight_trace);
  }
  std::cout << "generated " << graph.edges.size() << " edges on " << graph.n
            << " vertices in " << recnet::format_short(seconds) << " s -> " << f.out.string()
            << '\n';
  return 0;
}

// --- stats ------------------------------------------------------------------

struct StatsFlags {
  fs::path in;
  fs::path qualities;
  std::vector<std::int64_t> T_grid{0};
  std::string d_mode = "total";
  fs::path out = ".";
  std::vector<double> bins;
};

int run_stats(const StatsFlags& f) {
  const auto mode = as_usage([&] {
    if (f.d_mode == "total") return recnet::DegreeMode::kTotal;
    if (f.d_mode == "in") return recnet::DegreeMode::kIn;
    throw recnet::InvalidArgument("--d-mode must be 'total' or 'in'");
  });
  std::vector<std::int64_t> grid = f.T_grid;
  std::sort(grid.begin(), grid.end());
  as_usage([&] {
    recnet::detail::require(grid.empty() || grid.front() >= 0, "--T-grid values must be >= 0");
    return 0;
  });

  const recnet::GrownGraph graph = recnet::io::ingest_edge_list(f.in, f.qualities);
  const auto hist = recnet::degree_histogram(graph, mode);
  const auto curve = recnet::recency_curve(graph, grid);

  {
    auto out = open_output(f.out / "degree_table.csv");
    recnet::io::write_degree_csv(out, hist);
  }
  {
    auto out = open_output(f.out / "recency_table.csv");
    recnet::io::write_recency_csv(out, curve);
  }

  Json summary;
  summary["n"] = graph.n;
  summary["edges"] = graph.edges.size();
  summary["d_mode"] = f.d_mode;
  summary["kind"] = graph.params ? Json(recnet::kind_name(graph.params->kind)) : Json(nullptr);
  std::int64_t hist_total = 0;
  for (const auto& [d, c] : hist.counts) hist_total += c;
  summary["histogram_total"] = hist_total;
  Json recency = Json::array();
  for (const auto& p : curve.points) recency.push_back({{"T", p.T}, {"e_of_T", p.value}});
  summary["recency"] = recency;

  const bool can_bin = graph.params && recnet::is_window(graph.params->kind) &&
                       graph.has_qualities() && graph.n >= 2 * graph.params->N - 1;
  if (can_bin) {
    const std::vector<double> edges =
        f.bins.empty() ? recnet::log_bin_edges(graph.params->pareto.a, 2.0, 8) : f.bins;
    const auto est = as_usage([&] { return recnet::indegree_by_quality(graph, edges); });
    Json bins = Json::array();
    for (const auto& b : est.quality_bins) {
      bins.push_back({{"q_low", b.q_low},
                      {"q_high", std::isinf(b.q_high) ? Json(nullptr) : Json(b.q_high)},
                      {"mean_in_degree", b.mean_in_degree ? Json(*b.mean_in_degree)
                                                          : Json(nullptr)},
                      {"count", b.count}});
    }
    summary["indegree_by_quality"] = bins;
  }
  {
    auto out = open_output(f.out / "summary.json");
    out << summary.dump(2) << '\n';
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// --- theory -----------------------------------------------------------------

struct TheoryFlags {
  double gamma = 3.0;
  std::int64_t m = 1;
  std::optional<double> d;
  std::string d_range;
  std::string kind = "window";
  std::int64_t N = 1;
  std::optional<std::int64_t> T;
  std::optional<std::int64_t> n;
  std::optional<double> alpha;
  fs::path csv;
};

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError(std::string(flag) + " expects <lo>:<hi>");
  }
  return as_usage([&] {
    return std::pair{recnet::parse_int(text.substr(0, colon), flag),
                     recnet::parse_int(text.substr(colon + 1), flag)};
  });
}

int run_theory(const TheoryFlags& f) {
  namespace th = recnet::theory;
  const auto kind = as_usage([&] { return recnet::parse_kind(f.kind, f.N); });
  bool printed = false;
  if (f.d) {
    std::cout << recnet::format_short(
                     as_usage([&] { return th::predicted_degree_density(*f.d, f.m, f.gamma); }))
              << '\n';
    printed = true;
  }
  if (f.T) {
    std::cout << recnet::format_short(
                     as_usage([&] { return th::predicted_eT(kind, *f.T, f.N); }))
              << '\n';
    printed = true;
  }
  if (f.n) {
    as_usage([&] {
      const double alpha = th::alpha_constant(f.gamma, f.alpha);
      const auto bound = th::concentration_bound(*f.n, f.N);
      std::cout << "alpha=" << recnet::format_short(alpha) << '\n'
                << "validity_max="
                << recnet::format_short(th::degree_validity_max(kind, *f.n, f.N, f.gamma, alpha))
                << '\n'
                << "concentration_radius=" << recnet::format_short(bound.radius) << '\n'
                << "concentration_prob=" << recnet::format_short(bound.prob) << '\n';
      return 0;
    });
    printed = true;
  }
  if (!f.d_range.empty()) {
    const auto [lo, hi] = parse_range(f.d_range, "--d-range");
    if (lo < 1 || hi < lo) throw UsageError("--d-range needs 1 <= lo <= hi");
    std::ostringstream table;
    table << "d,density\n";
    for (std::int64_t d = lo; d <= hi; ++d) {
      table << d << ','
            << recnet::format_double(as_usage([&] {
                 return th::predicted_degree_density(static_cast<double>(d), f.m, f.gamma);
               }))
            << '\n';
    }
    if (f.csv.empty()) {
      std::cout << table.str();
    } else {
      auto out = open_output(f.csv);
      out << table.str();
    }
    printed = true;
  }
  if (!printed) throw UsageError("theory: give at least one of --d, --T, --n, --d-range");
  return 0;
}

// --- fit --------------------------------------------------------------------

struct FitFlags {
  fs::path in;
  std::optional<std::int64_t> d_min;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> T_max;
};

int run_fit_powerlaw(const FitFlags& f) {
  if (!f.d_min && !f.m) throw UsageError("fit powerlaw: give --d-min or --m (d_min = 2m)");
  const std::int64_t d_min = f.d_min ? *f.d_min : 2 * *f.m;
  std::ifstream in(f.in);
  if (!in) throw recnet::io::IoError("cannot open " + f.in.string());
  const auto hist = recnet::io::read_degree_csv(in);
  const auto fit = recnet::fit_power_law(hist, d_min);
  std::cout << recnet::power_law_to_json(fit).dump(2) << '\n';
  return 0;
}

int run_fit_decay(const FitFlags& f) {
  std::ifstream in(f.in);
  if (!in) throw recnet::io::IoError("cannot open " + f.in.string());
  const auto curve = recnet::io::read_recency_csv(in);
  std::int64_t T_max = 0;
  for (const auto& p : curve.points) T_max = std::max(T_max, p.T);
  const auto fit = recnet::fit_exponential_decay(curve, f.T_max.value_or(T_max));
  std::cout << recnet::decay_to_json(fit).dump(2) << '\n';
  return 0;
}

// --- experiment ---------------------------------------------------------------

struct ExperimentFlags {
  fs::path config;
  CLI::Option* n = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* N = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* kind = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* replicas = nullptr;
  CLI::Option* T_grid = nullptr;
  CLI::Option* d_range = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* parallelism = nullptr;
  CLI::Option* trace = nullptr;
  CLI::Option* fit_d_min = nullptr;
  std::int64_t v_n = 0, v_m = 0, v_N = 0, v_replicas = 0, v_fit_d_min = 0;
  double v_gamma = 0, v_a = 0;
  std::string v_kind, v_d_range;
  std::uint64_t v_seed = 0;
  std::vector<std::int64_t> v_T_grid;
  fs::path v_out;
  unsigned v_parallelism = 0;
};

int run_experiment(const ExperimentFlags& f) {
  Json j = Json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw recnet::io::IoError("cannot open " + f.config.string());
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw recnet::ParseError(0, f.config.string() + ": " + e.what());
    }
  }
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  // Flags override the file.
  if (*f.n) j["n"] = f.v_n;
  if (*f.m) j["m"] = f.v_m;
  if (*f.N) j["N"] = f.v_N;
  if (*f.gamma) j["gamma"] = f.v_gamma;
  if (*f.a) j["a"] = f.v_a;
  if (*f.kind) j["kind"] = f.v_kind;
  if (*f.seed) j["seed"] = f.v_seed;
  if (*f.replicas) j["replicas"] = f.v_replicas;
  if (*f.T_grid) j["T_grid"] = f.v_T_grid;
  if (*f.out) j["output_dir"] = f.v_out.string();
  if (*f.parallelism) j["parallelism"] = f.v_parallelism;
  if (*f.trace) j["record_weight_trace"] = true;
  if (*f.fit_d_min) j["fit_d_min"] = f.v_fit_d_min;
  if (*f.d_range) {
    const auto [lo, hi] = parse_range(f.v_d_range, "--d-range");
    j["d_lo"] = lo;
    j["d_hi"] = hi;
  }
  if (!j.contains("output_dir")) j["output_dir"] = "experiment_out";
  if (!j.contains("parallelism")) j["parallelism"] = std::max(1u, std::thread::hardware_concurrency());

  const recnet::ExperimentConfig config = as_usage([&] {
    auto c = recnet::config_from_json(j);
    c.validate();
    return c;
  });
  const auto report = recnet::run_ensemble(config);
  const auto cmp = recnet::compare_to_theory(report);

  std::cout << "replicas: " << config.replicas << ", report: "
            << (config.output_dir / "report.json").string() << '\n';
  if (report.power_law) {
    std::cout << "power-law exponent (mle, d_min=" << report.power_law->d_min
              << "): " << recnet::format_short(report.power_law->exponent_mle) << '\n';
  }
  if (report.decay) {
    std::cout << "decay scale: " << recnet::format_short(report.decay->scale_estimate) << '\n';
  }
  std::cout << "degree rows in validity range: " << cmp.rows_in_validity << " (flagged "
            << cmp.rows_flagged << ")\n";
  if (cmp.max_rel_error) {
    std::cout << "max relative density error: " << recnet::format_short(*cmp.max_rel_error)
              << '\n';
  }
  if (cmp.max_abs_recency_error) {
    std::cout << "max e(T) error: " << recnet::format_short(*cmp.max_abs_recency_error) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recnet: recency-based preferential-attachment graphs"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "grow one graph and write it to disk");
  add_model_flags(generate, gen.model, true);
  generate->add_option("--out", gen.out, "edge-list output path")->capture_default_str();
  generate->add_option("--qualities-out", gen.qualities_out,
                       "qualities output path (default: <out>.qualities)");
  generate->add_flag("--trace", gen.trace, "also write Q(t) to <out>.trace.csv");

  StatsFlags st;
  auto* stats = app.add_subcommand("stats", "degree histogram and recency curve of an edge list");
  stats->add_option("--in", st.in, "edge-list path")->required();
  stats->add_option("--qualities", st.qualities, "qualities path (enables quality bins)");
  stats->add_option("--T-grid", st.T_grid, "age differences for e(T) (steps, comma separated)")
      ->delimiter(',');
  stats->add_option("--d-mode", st.d_mode, "degree mode: total | in")->capture_default_str();
  stats->add_option("--out", st.out, "output directory")->capture_default_str();
  stats->add_option("--bins", st.bins, "quality bin edges (comma separated, >= a)")
      ->delimiter(',');

  TheoryFlags th;
  auto* theory = app.add_subcommand("theory", "closed-form predictions");
  theory->add_option("--gamma", th.gamma, "Pareto quality exponent (> 1)")->capture_default_str();
  theory->add_option("--m", th.m, "outdegree (edges per step)")->capture_default_str();
  theory->add_option("--d", th.d, "degree at which to print E[N_n(d)]/n");
  theory->add_option("--d-range", th.d_range, "degree table range <lo>:<hi>");
  theory->add_option("--csv", th.csv, "write the degree table here instead of stdout");
  theory->add_option("--kind", th.kind, "window | exp")->capture_default_str();
  theory->add_option("--N", th.N, "recency scale (steps)")->capture_default_str();
  theory->add_option("--T", th.T, "age difference at which to print E[e(T)] (steps)");
  theory->add_option("--n", th.n, "graph size for validity range and concentration bound");
  theory->add_option("--alpha", th.alpha, "auxiliary constant in (1, gamma) when gamma <= 2");

  FitFlags ft;
  auto* fit = app.add_subcommand("fit", "fit a power-law tail or an exponential decay");
  fit->require_subcommand(1);
  auto* fit_pl = fit->add_subcommand("powerlaw", "tail exponent of a d,count table");
  fit_pl->add_option("--in", ft.in, "CSV with header d,count")->required();
  fit_pl->add_option("--d-min", ft.d_min, "smallest degree in the tail (>= 2)");
  fit_pl->add_option("--m", ft.m, "outdegree; d_min defaults to 2m");
  auto* fit_decay = fit->add_subcommand("decay", "decay scale of a T,e_of_T table");
  fit_decay->add_option("--in", ft.in, "CSV with header T,e_of_T")->required();
  fit_decay->add_option("--T-max", ft.T_max, "largest T used in the fit (steps)");

  ExperimentFlags ex;
  auto* experiment = app.add_subcommand("experiment", "run a replica ensemble");
  experiment->add_option("--config", ex.config, "JSON config file; flags override it");
  ex.n = experiment->add_option("--n", ex.v_n, "number of vertices");
  ex.m = experiment->add_option("--m", ex.v_m, "outdegree (edges per step)");
  ex.N = experiment->add_option("--N", ex.v_N, "recency scale (steps)");
  ex.gamma = experiment->add_option("--gamma", ex.v_gamma, "Pareto quality exponent (> 1)");
  ex.a = experiment->add_option("--a", ex.v_a, "minimum quality (> 0)");
  ex.kind = experiment->add_option("--kind", ex.v_kind, "attractiveness kind");
  ex.seed = experiment->add_option("--seed", ex.v_seed, "master seed (decimal 64-bit integer)");
  ex.replicas = experiment->add_option("--replicas", ex.v_replicas, "number of replicas R");
  ex.T_grid = experiment->add_option("--T-grid", ex.v_T_grid, "e(T) grid (steps, comma separated)")
                  ->delimiter(',');
  ex.d_range = experiment->add_option("--d-range", ex.v_d_range, "degree rows <lo>:<hi>");
  ex.out = experiment->add_option("--out", ex.v_out, "output directory (default experiment_out)");
  ex.parallelism = experiment->add_option("--parallelism", ex.v_parallelism,
                                          "worker threads (default: available processors)");
  ex.trace = experiment->add_flag("--trace", "record Q(t) and summarize its deviation");
  ex.fit_d_min = experiment->add_option("--fit-d-min", ex.v_fit_d_min,
                                        "tail start for the power-law fit (default 2m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*stats) return run_stats(st);
    if (*theory) return run_theory(th);
    if (*fit_pl) return run_fit_powerlaw(ft);
    if (*fit_decay) return run_fit_decay(ft);
    if (*experiment) return run_experiment(ex);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
