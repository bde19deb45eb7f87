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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string output;  // stdout and stderr
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("recnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" RECNET_CLI_PATH "' " + args + " 2>&1";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    while (pipe && fgets(buf, sizeof(buf), pipe)) r.output += buf;
    const int status = pipe ? pclose(pipe) : -1;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  static int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesEdgeList) {
  const auto r = run("generate --n 5 --m 3 --N 2 --gamma 3 --a 1 --kind window --seed 7 --out g.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string text = read("g.txt");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "# recnet v1 n=5 m=3 N=2 gamma=3 a=1 kind=window seed=7");
  EXPECT_EQ(count_lines(text), 11);  // header + 10 edges
  EXPECT_EQ(count_lines(read("g.txt.qualities")), 5);
  EXPECT_NE(r.output.find("10 edges"), std::string::npos);
}

TEST_F(CliTest, GenerateUsageErrors) {
  auto r = run("generate --m 3 --N 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("--n"), std::string::npos);
  EXPECT_EQ(run("generate --n 5 --m 3 --N 2 --gamma 0.5").code, 2);
  EXPECT_EQ(run("generate --n 5 --m 3 --N 2 --kind linear").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, KindsDiffer) {
  ASSERT_EQ(run("generate --n 400 --m 2 --N 20 --kind window --seed 3 --out w.txt").code, 0);
  ASSERT_EQ(run("generate --n 400 --m 2 --N 20 --kind exp --seed 3 --out e.txt").code, 0);
  const auto w = read("w.txt"), e = read("e.txt");
  const auto body = [](const std::string& s) { return s.substr(s.find("\n2 1\n") + 5); };
  EXPECT_NE(body(w), body(e));
}

TEST_F(CliTest, HelpListsUnits) {
  const auto r = run("generate --help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("--gamma"), std::string::npos);
  EXPECT_NE(r.output.find("steps"), std::string::npos);
}

TEST_F(CliTest, StatsRoundTrip) {
  ASSERT_EQ(run("generate --n 3000 --m 2 --N 500 --kind window --seed 1 --out g.txt").code, 0);
  const auto r = run("stats --in g.txt --qualities g.txt.qualities --T-grid 0,250,500 --out st");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("\"histogram_total\": 3000"), std::string::npos);
  const std::string recency = read("st/recency_table.csv");
  EXPECT_EQ(recency.substr(0, 9), "T,e_of_T\n");
  EXPECT_NE(recency.find("\n500,0\n"), std::string::npos) << recency;
  EXPECT_NE(recency.find("\n0,1\n"), std::string::npos);
  EXPECT_EQ(read("st/degree_table.csv").substr(0, 8), "d,count\n");
  EXPECT_NE(read("st/summary.json").find("indegree_by_quality"), std::string::npos);
}

TEST_F(CliTest, StatsErrors) {
  EXPECT_EQ(run("stats --in missing.txt").code, 1);
  write("bad.txt", "# recnet v1 n=9\n2 1\n5 7\n");
  const auto r = run("stats --in bad.txt");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("line 3"), std::string::npos);
  EXPECT_EQ(run("stats --in bad.txt --d-mode sideways").code, 2);
}

TEST_F(CliTest, TheoryValues) {
  auto r = run("theory --gamma 3 --m 2 --d 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.output, "0.444444\n");
  r = run("theory --kind exp --N 500 --T 500");
  EXPECT_EQ(r.output, "0.367879\n");
  r = run("theory --gamma 3 --m 2 --d-range 1:3");
  EXPECT_EQ(count_lines(r.output), 4);
  r = run("theory --gamma 3 --n 200000 --N 500");
  EXPECT_NE(r.output.find("validity_max=2.81727"), std::string::npos) << r.output;
  EXPECT_EQ(run("theory --gamma 3").code, 2);
  EXPECT_EQ(run("theory --gamma 1.5 --alpha 1.7 --n 1000 --N 10").code, 2);
}

TEST_F(CliTest, FitDecayAndPowerLaw) {
  std::string csv = "T,e_of_T\n";
  for (int T = 0; T <= 1000; T += 100) {
    char line[64];
    std::snprintf(line, sizeof(line), "%d,%.17g\n", T, std::exp(-T / 500.0));
    csv += line;
  }
  write("curve.csv", csv);
  auto r = run("fit decay --in curve.csv");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("\"scale_estimate\": 500."), std::string::npos) << r.output;

  write("flat.csv", "T,e_of_T\n0,1\n1,1\n2,1\n3,1\n");
  EXPECT_EQ(run("fit decay --in flat.csv").code, 1);

  ASSERT_EQ(run("generate --n 20000 --m 2 --N 200 --kind exp --out g.txt").code, 0);
  ASSERT_EQ(run("stats --in g.txt --out st").code, 0);
  r = run("fit powerlaw --in st/degree_table.csv --m 2");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("\"d_min\": 4"), std::string::npos);
  EXPECT_EQ(run("fit powerlaw --in st/degree_table.csv").code, 2);
}

TEST_F(CliTest, ExperimentIsDeterministic) {
  write("exp.json", R"({"n": 5000, "m": 2, "N": 50, "gamma": 2.5, "a": 1, "kind": "exp",
    "seed": 11, "replicas": 3, "T_grid": [0, 25, 50, 100], "d_lo": 2, "d_hi": 10,
    "record_weight_trace": true})");
  ASSERT_EQ(run("experiment --config exp.json --out one").code, 0);
  const auto r = run("experiment --config exp.json --out two --parallelism 1");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(read("one/report.json"), read("two/report.json"));
  EXPECT_FALSE(read("one/report.json").empty());
  EXPECT_EQ(read("one/degree_table.csv"), read("two/degree_table.csv"));
  EXPECT_EQ(read("one/recency_table.csv"), read("two/recency_table.csv"));

  // flags win over the file
  ASSERT_EQ(run("experiment --config exp.json --out three --replicas 2").code, 0);
  EXPECT_NE(read("three/report.json").find("\"replicas\": 2"), std::string::npos);

  write("broken.json", "{ not json");
  EXPECT_EQ(run("experiment --config broken.json").code, 1);
  write("unknown.json", R"({"colour": "blue"})");
  EXPECT_EQ(run("experiment --config unknown.json").code, 2);
}

}  // namespace
