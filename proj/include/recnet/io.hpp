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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "recnet/error.hpp"
#include "recnet/generator.hpp"
#include "recnet/number_format.hpp"
#include "recnet/stats.hpp"

// Text formats: "# recnet v1 ..." edge lists, one-per-line qualities, and the
// two-column CSV tables.
namespace recnet::io {

inline constexpr std::string_view kEdgeListMagic = "# recnet v1";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string edge_list_header(const ModelParams& p) {
  std::ostringstream out;
  out << kEdgeListMagic << " n=" << p.n << " m=" << p.m << " N=" << p.N
      << " gamma=" << format_double(p.pareto.gamma)
      << " a=" << format_double(p.pareto.a) << " kind=" << kind_name(p.kind)
      << " seed=" << p.seed.master_seed;
  return out.str();
}

inline void write_edge_list(std::ostream& out, const GrownGraph& graph) {
  if (graph.params) {
    out << edge_list_header(*graph.params) << '\n';
  } else {
    out << kEdgeListMagic << " n=" << graph.n << '\n';
  }
  for (const Edge& e : graph.edges) out << e.source << ' ' << e.target << '\n';
}

inline void write_qualities(std::ostream& out, const std::vector<double>& q) {
  for (const double v : q) out << format_double(v) << '\n';
}

inline void write_weight_trace(std::ostream& out, const std::vector<double>& trace) {
  out << "t,Q\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << static_cast<std::int64_t>(k) + kTraceFirstStep << ','
        << format_double(trace[k]) << '\n';
  }
}

inline void write_degree_csv(std::ostream& out, const DegreeHistogram& hist) {
  out << "d,count\n";
  for (const auto& [d, count] : hist.counts) out << d << ',' << count << '\n';
}

inline void write_recency_csv(std::ostream& out, const RecencyCurve& curve) {
  out << "T,e_of_T\n";
  for (const auto& p : curve.points) out << p.T << ',' << format_double(p.value) << '\n';
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) parts.push_back(line.substr(start, i - start));
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename Fn>
auto at_line(std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw ParseError(line, e.what());
  }
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace detail

// Parses the header line into key/value pairs.
inline std::map<std::string, std::string> parse_header(std::string_view line) {
  line = detail::trim(line);
  if (!line.starts_with(kEdgeListMagic)) {
    throw ParseError(1, "missing '# recnet v1' header");
  }
  std::map<std::string, std::string> fields;
  for (const auto token : detail::split_ws(line.substr(kEdgeListMagic.size()))) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError(1, "malformed header field '" + std::string(token) + "'");
    }
    fields.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return fields;
}

// Reads an edge list. Only n is required in the header; when all model fields
// are present the graph carries ModelParams. Blank lines and further '#'
// lines are ignored.
inline GrownGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing '# recnet v1' header");
  const auto fields = parse_header(line);

  GrownGraph graph;
  const auto field = [&](const char* key) -> const std::string* {
    const auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  if (!field("n")) throw ParseError(1, "header lacks n=");
  detail::at_line(1, [&] {
    graph.n = parse_int(*field("n"), "n");
    recnet::detail::require(graph.n >= 2, "n must be >= 2");
    if (field("m") && field("N") && field("gamma") && field("a") && field("kind")) {
      ModelParams p;
      p.n = graph.n;
      p.m = parse_int(*field("m"), "m");
      p.N = parse_int(*field("N"), "N");
      p.pareto = {parse_double(*field("gamma"), "gamma"), parse_double(*field("a"), "a")};
      p.kind = parse_kind(*field("kind"), p.N);
      if (field("seed")) p.seed.master_seed = parse_uint(*field("seed"), "seed");
      p.validate();
      graph.params = p;
    }
    return 0;
  });

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto parts = detail::split_ws(text);
    if (parts.size() != 2) throw ParseError(line_no, "expected 'source target'");
    Edge e;
    detail::at_line(line_no, [&] {
      e.source = parse_int(parts[0], "source");
      e.target = parse_int(parts[1], "target");
      return 0;
    });
    if (e.source < 1 || e.source > graph.n || e.target < 1 || e.target > graph.n) {
      throw ParseError(line_no, "vertex id out of range 1.." + std::to_string(graph.n));
    }
    if (e.target >= e.source) {
      throw ParseError(line_no, "target must be smaller than source");
    }
    graph.edges.push_back(e);
  }
  return graph;
}

inline std::vector<double> read_qualities(std::istream& in) {
  std::vector<double> q;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    q.push_back(detail::at_line(line_no, [&] { return parse_double(text, "quality"); }));
  }
  return q;
}

// Loads an edge list and, optionally, its qualities file.
inline GrownGraph ingest_edge_list(const std::filesystem::path& path,
                                   const std::filesystem::path& qualities_path = {}) {
  auto in = detail::open_input(path);
  GrownGraph graph = read_edge_list(in);
  if (!qualities_path.empty()) {
    auto qin = detail::open_input(qualities_path);
    graph.qualities = read_qualities(qin);
    if (!graph.has_qualities()) {
      throw ParseError(0, "qualities file has " + std::to_string(graph.qualities.size()) +
                              " entries, expected " + std::to_string(graph.n));
    }
  }
  return graph;
}

namespace detail {

template <typename Row>
std::vector<Row> read_two_column_csv(std::istream& in, std::string_view header,
                                     Row (*parse)(std::string_view, std::string_view)) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw ParseError(1, "expected header '" + std::string(header) + "'");
  }
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw ParseError(line_no, "expected two columns");
    rows.push_back(at_line(line_no, [&] {
      return parse(trim(text.substr(0, comma)), trim(text.substr(comma + 1)));
    }));
  }
  return rows;
}

}  // namespace detail

inline DegreeHistogram read_degree_csv(std::istream& in) {
  using Row = std::pair<std::int64_t, std::int64_t>;
  const auto rows = detail::read_two_column_csv<Row>(
      in, "d,count", [](std::string_view a, std::string_view b) {
        return Row{parse_int(a, "d"), parse_int(b, "count")};
      });
  DegreeHistogram hist;
  for (const auto& [d, count] : rows) {
    hist.counts[d] += count;
    hist.n += count;
  }
  return hist;
}

inline RecencyCurve read_recency_csv(std::istream& in) {
  const auto rows = detail::read_two_column_csv<RecencyPoint>(
      in, "T,e_of_T", [](std::string_view a, std::string_view b) {
        return RecencyPoint{parse_int(a, "T"), parse_double(b, "e_of_T")};
      });
  return RecencyCurve{rows};
}

}  // namespace recnet::io
