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

#include "recnet/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

namespace recnet {
namespace {

ExperimentConfig small_config(bool window = false) {
  ExperimentConfig c;
  c.params.n = 20'000;
  c.params.m = 2;
  c.params.N = 100;
  c.params.pareto = {2.5, 1.0};
  c.params.kind = window ? AttractivenessKind{WindowRecency{100}}
                         : AttractivenessKind{ExponentialRecency{100}};
  c.params.seed = {2026, 0};
  c.params.record_weight_trace = true;
  c.replicas = 4;
  c.T_grid = {0, 50, 100, 200, 300};
  c.d_lo = 2;
  c.d_hi = 12;
  c.parallelism = 2;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(RunEnsemble, SingleReplicaHasZeroSpread) {
  auto c = small_config();
  c.replicas = 1;
  const auto report = run_ensemble(c);
  ReplicaResult direct = run_replica(c, 0);
  for (const auto& row : report.degrees) {
    EXPECT_EQ(row.stddev, 0.0);
    EXPECT_EQ(row.mean, static_cast<double>(direct.histogram.at(row.d)) / 20'000.0);
  }
  for (std::size_t k = 0; k < report.recency.size(); ++k) {
    EXPECT_EQ(report.recency[k].stddev, 0.0);
    EXPECT_EQ(report.recency[k].mean, direct.e_of_T[k]);
  }
  ASSERT_EQ(report.replicas.size(), 1u);
  EXPECT_EQ(report.replicas[0].engine_seed, stream_seed({2026, 0}));
}

TEST(RunEnsemble, ByteIdenticalReports) {
  const auto base = std::filesystem::temp_directory_path() / "recnet_exp_test";
  auto c = small_config();
  c.output_dir = base / "a";
  run_ensemble(c);
  c.output_dir = base / "b";
  c.parallelism = 1;
  run_ensemble(c);
  for (const char* f : {"degree_table.csv", "recency_table.csv"}) {
    EXPECT_EQ(slurp(base / "a" / f), slurp(base / "b" / f)) << f;
  }
  // report.json echoes the config, which differs only in parallelism (not echoed).
  EXPECT_EQ(slurp(base / "a" / "report.json"), slurp(base / "b" / "report.json"));
  std::filesystem::remove_all(base);
}

TEST(RunEnsemble, AggregationIdentity) {
  const auto c = small_config();
  const auto report = run_ensemble(c);
  for (const auto& row : report.degrees) {
    double sum = 0.0;
    for (std::uint64_t id = 0; id < 4; ++id) {
      const auto& r = report.replicas[static_cast<std::size_t>(id)];
      ASSERT_EQ(r.stream_id, id);
      sum += static_cast<double>(r.histogram.at(row.d)) / 20'000.0;
    }
    EXPECT_EQ(row.mean, sum / 4.0);
  }
}

TEST(RunEnsemble, PermutedStreamsLeaveMeansUnchanged) {
  auto c = small_config();
  const auto forward = run_ensemble(c);
  c.stream_ids = {3, 1, 0, 2};
  const auto permuted = run_ensemble(c);
  ASSERT_EQ(permuted.replicas[0].stream_id, 3u);
  EXPECT_EQ(permuted.replicas[0].histogram.counts, forward.replicas[3].histogram.counts);
  for (std::size_t k = 0; k < forward.degrees.size(); ++k) {
    EXPECT_EQ(forward.degrees[k].mean, permuted.degrees[k].mean);
    EXPECT_EQ(forward.degrees[k].stddev, permuted.degrees[k].stddev);
  }
  for (std::size_t k = 0; k < forward.recency.size(); ++k) {
    EXPECT_EQ(forward.recency[k].mean, permuted.recency[k].mean);
  }
  EXPECT_EQ(forward.power_law->exponent_mle, permuted.power_law->exponent_mle);
}

TEST(RunEnsemble, ReportContents) {
  const auto report = run_ensemble(small_config());
  ASSERT_TRUE(report.weight_trace.has_value());
  EXPECT_EQ(report.weight_trace->max_rel_dev.size(), 4u);
  EXPECT_EQ(report.weight_trace->warmup_step, 461);  // ceil(100 ln 100)
  ASSERT_TRUE(report.power_law.has_value());
  EXPECT_EQ(report.power_law->d_min, 4);
  ASSERT_TRUE(report.decay.has_value());
  EXPECT_NEAR(report.decay->scale_estimate, 100.0, 10.0);
  for (const auto& row : report.concentration) {
    EXPECT_GE(row.fraction_within, 0.0);
    EXPECT_LE(row.fraction_within, 1.0);
  }
  for (const auto& row : report.recency) {
    ASSERT_TRUE(row.abs_error.has_value());
    EXPECT_LT(*row.abs_error, 0.05);
  }

  const Json j = report_to_json(report);
  for (const char* key :
       {"config", "degrees", "recency", "concentration", "weight_trace", "fits", "seeds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seeds"].size(), 4u);
  EXPECT_TRUE(j["fits"]["power_law"].contains("exponent_mle"));
  EXPECT_TRUE(j["fits"]["decay"].contains("scale_estimate"));
}

TEST(RunEnsemble, ExploratoryKindHasNoTheory) {
  auto c = small_config();
  c.params.n = 3000;
  c.params.kind = parse_kind("general:101:50", 100);
  c.params.record_weight_trace = false;
  const auto report = run_ensemble(c);
  EXPECT_FALSE(report.validity_max.has_value());
  for (const auto& row : report.degrees) EXPECT_FALSE(row.theory.has_value());
  EXPECT_EQ(compare_to_theory(report).rows_in_validity, 0);
}

TEST(RunEnsemble, SurfacesReplicaFailure) {
  auto c = small_config();
  c.params.n = 200;
  c.params.pareto.a = std::numeric_limits<double>::max();  // qualities overflow
  try {
    run_ensemble(c);
    FAIL() << "expected a replica failure";
  } catch (const ReplicaError& e) {
    EXPECT_EQ(e.stream_id(), 0u);
  }
}

TEST(CompareToTheory, FlagsAndErrors) {
  ExperimentReport r;
  r.degrees = {{4, 0.5, 0.0, 0.5, 0.0, true},
               {5, 0.3, 0.0, 0.2, 0.5, true},
               {9, 0.9, 0.0, 0.1, 8.0, false}};
  r.recency = {{0, 1.0, 0.0, 1.0, 0.0}, {10, 0.4, 0.0, 0.5, 0.1}};
  const auto cmp = compare_to_theory(r);
  EXPECT_EQ(cmp.rows_in_validity, 2);
  EXPECT_EQ(cmp.rows_flagged, 1);
  EXPECT_EQ(*cmp.max_rel_error, 0.5);
  EXPECT_EQ(*cmp.max_abs_recency_error, 0.1);
  EXPECT_EQ(cmp.degrees[0].rel_error, 0.0);
}

TEST(Config, JsonRoundTripAndValidation) {
  const Json j = Json::parse(R"({"n": 1000, "m": 3, "N": 20, "gamma": 2.2, "a": 0.5,
      "kind": "exp", "seed": 99, "replicas": 3, "T_grid": [0, 10, 20],
      "d_lo": 3, "d_hi": 9, "record_weight_trace": true, "fit_d_min": 6})");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.params.n, 1000);
  EXPECT_EQ(kind_name(c.params.kind), "exp");
  EXPECT_EQ(c.params.seed.master_seed, 99u);
  EXPECT_EQ(c.resolved_fit_d_min(), 6);
  EXPECT_NO_THROW(c.validate());
  const Json echo = config_to_json(c);
  EXPECT_EQ(echo["T_grid"], Json::parse("[0,10,20]"));

  EXPECT_THROW(config_from_json(Json::parse(R"({"bogus": 1})")), InvalidArgument);
  EXPECT_THROW(config_from_json(Json::parse(R"({"n": "ten"})")), InvalidArgument);
  auto bad = c;
  bad.replicas = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = c;
  bad.d_lo = 10;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = c;
  bad.stream_ids = {1, 1, 2};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

}  // namespace
}  // namespace recnet
