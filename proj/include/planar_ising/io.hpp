/*
 * Copyright 2026 The planar-ising Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// File formats. JSON goes through nlohmann::json, whose number output is the
// shortest decimal that parses back to the same double.
//
//   model    {"n": 3, "edges": [[0, 1, 0.5], ...], "fields": [...], "meta": {...}}
//   moments  {"n": 3, "mu_nodes": [...], "mu_pairs": [[...], ...]}
//            or CSV: n rows of n (pairs only) or n + 1 rows, first row mu_nodes
//   samples  CSV, one row per sample, entries -1/+1 (0/1 read as -1/+1),
//            optional header row of variable names
//   votes    CSV, header "name,<vote id>,...", one row per voter

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "planar_ising/error.hpp"
#include "planar_ising/fit.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/learn.hpp"
#include "planar_ising/model.hpp"
#include "planar_ising/sample.hpp"

namespace planar_ising::io {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorKind::invalid_argument, "cannot open input file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes to a temporary file next to `path`, then renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) detail::fail(ErrorKind::invalid_argument, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) detail::fail(ErrorKind::invalid_argument, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    detail::fail(ErrorKind::invalid_argument, "cannot move output into '" + path.string() + "'");
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    detail::fail(ErrorKind::data, std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

// ---------------------------------------------------------------- CSV

/// RFC 4180 style: comma separated, double-quoted fields may hold commas,
/// quotes ("") and newlines. Blank lines are skipped.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(field);
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) detail::fail(ErrorKind::data, "CSV: stray quote inside a field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) detail::fail(ErrorKind::data, "CSV: unterminated quoted field");
  end_row();
  return rows;
}

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline bool parse_double(std::string_view s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// ---------------------------------------------------------------- models

inline json model_to_json(const IsingModel& model, const json& meta = nullptr) {
  json j;
  j["n"] = model.num_vertices();
  json edges = json::array();
  const auto& g = model.graph();
  for (int e = 0; e < g.num_edges(); ++e)
    edges.push_back(json::array({g.edge(e).u, g.edge(e).v, model.theta_edges()[e]}));
  j["edges"] = std::move(edges);
  j["fields"] = model.theta_nodes();
  if (!meta.is_null()) j["meta"] = meta;
  return j;
}

inline IsingModel model_from_json(const json& j) {
  try {
    if (!j.is_object()) detail::fail(ErrorKind::data, "model: expected a JSON object");
    const int n = j.at("n").get<int>();
    if (n < 0) detail::fail(ErrorKind::data, "model: n must be >= 0");
    Graph g(n);
    std::vector<double> theta;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) detail::fail(ErrorKind::data, "model: each edge is [i, j, theta]");
      const int a = e[0].get<int>(), b = e[1].get<int>();
      if (a < 0 || b < 0 || a >= n || b >= n)
        detail::fail(ErrorKind::data, "model: edge endpoint out of range");
      if (a == b) detail::fail(ErrorKind::data, "model: self-loop");
      if (g.has_edge(a, b)) detail::fail(ErrorKind::data, "model: duplicate edge");
      g.add_edge(a, b);
      theta.push_back(e[2].get<double>());
    }
    std::vector<double> fields;
    if (j.contains("fields")) fields = j.at("fields").get<std::vector<double>>();
    if (!fields.empty() && static_cast<int>(fields.size()) != n)
      detail::fail(ErrorKind::data, "model: fields must have n entries");
    try {
      return IsingModel(std::move(g), std::move(theta), std::move(fields));
    } catch (const Error& err) {
      detail::fail(ErrorKind::data, std::string("model: ") + err.what());
    }
  } catch (const json::exception& e) {
    detail::fail(ErrorKind::data, std::string("model: malformed JSON fields (") + e.what() + ")");
  }
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.u, e.v}));
  return {{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

/// Graph JSON {"n", "edges": [[i, j], ...]}; a model file is accepted too.
inline Graph graph_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 0) detail::fail(ErrorKind::data, "graph: n must be >= 0");
    Graph g(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2) detail::fail(ErrorKind::data, "graph: each edge is [i, j]");
      const int a = e[0].get<int>(), b = e[1].get<int>();
      if (a < 0 || b < 0 || a >= n || b >= n || a == b || g.has_edge(a, b))
        detail::fail(ErrorKind::data, "graph: invalid or duplicate edge");
      g.add_edge(a, b);
    }
    return g;
  } catch (const json::exception& e) {
    detail::fail(ErrorKind::data, std::string("graph: malformed JSON (") + e.what() + ")");
  }
}

// ---------------------------------------------------------------- moments

inline json moments_to_json(const MomentSet& m) {
  json pairs = json::array();
  for (int i = 0; i < m.n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.n));
    for (int j = 0; j < m.n; ++j) row[j] = m.mu_pairs(i, j);
    pairs.push_back(row);
  }
  return {{"n", m.n}, {"mu_nodes", m.mu_nodes}, {"mu_pairs", std::move(pairs)}};
}

inline MomentSet moments_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1) detail::fail(ErrorKind::data, "moments: n must be >= 1");
    MomentSet m = MomentSet::independent(n);
    if (j.contains("mu_nodes")) m.mu_nodes = j.at("mu_nodes").get<std::vector<double>>();
    const auto& rows = j.at("mu_pairs");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      detail::fail(ErrorKind::data, "moments: mu_pairs must have n rows");
    for (int i = 0; i < n; ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != n) detail::fail(ErrorKind::data, "moments: mu_pairs must be n x n");
      for (int k = 0; k < n; ++k) m.mu_pairs(i, k) = row[k];
    }
    validate(m);
    return m;
  } catch (const json::exception& e) {
    detail::fail(ErrorKind::data, std::string("moments: malformed JSON (") + e.what() + ")");
  }
}

inline MomentSet moments_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) detail::fail(ErrorKind::data, "moments CSV: empty file");
  const int n = static_cast<int>(rows.front().size());
  const int r = static_cast<int>(rows.size());
  if (r != n && r != n + 1)
    detail::fail(ErrorKind::data, "moments CSV: expected n rows (pairs) or n + 1 rows (first row mu_nodes)");
  std::vector<std::vector<double>> v;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) detail::fail(ErrorKind::data, "moments CSV: ragged rows");
    std::vector<double> vals;
    for (const auto& cell : row) {
      double x;
      if (!parse_double(cell, x)) detail::fail(ErrorKind::data, "moments CSV: non-numeric cell '" + cell + "'");
      vals.push_back(x);
    }
    v.push_back(std::move(vals));
  }
  MomentSet m = MomentSet::independent(n);
  const int off = r == n + 1 ? 1 : 0;
  if (off) m.mu_nodes = v.front();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m.mu_pairs(i, k) = v[i + off][k];
  validate(m);
  return m;
}

// ---------------------------------------------------------------- samples

struct SampleTable {
  SampleMatrix samples;
  std::vector<std::string> names;  // empty when the file had no header
};

inline SampleTable samples_from_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) detail::fail(ErrorKind::data, "samples CSV: empty file");
  SampleTable out;
  double probe;
  const bool header = std::any_of(rows.front().begin(), rows.front().end(),
                                  [&](const std::string& c) { return !parse_double(c, probe); });
  if (header) {
    for (const auto& c : rows.front()) out.names.push_back(trim(c));
    rows.erase(rows.begin());
  }
  if (rows.empty()) detail::fail(ErrorKind::data, "samples CSV: no sample rows");
  const int n = static_cast<int>(rows.front().size());
  if (header && static_cast<int>(out.names.size()) != n)
    detail::fail(ErrorKind::data, "samples CSV: header and rows differ in width");
  std::vector<std::int8_t> data;
  data.reserve(rows.size() * static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n) detail::fail(ErrorKind::data, "samples CSV: ragged rows");
    for (const auto& cell : rows[r]) {
      const std::string t = trim(cell);
      if (t == "1" || t == "+1") {
        data.push_back(1);
      } else if (t == "-1" || t == "0") {
        data.push_back(-1);
      } else {
        detail::fail(ErrorKind::data, "samples CSV: row " + std::to_string(r + 1) +
                                          ": entries must be -1/+1 or 0/1, got '" + t + "'");
      }
    }
  }
  out.samples = SampleMatrix(static_cast<int>(rows.size()), n, std::move(data));
  return out;
}

inline std::string samples_to_csv(const SampleMatrix& s, const std::vector<std::string>& names = {}) {
  std::string out;
  if (!names.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + csv_field(names[i]);
    out += '\n';
  }
  for (int r = 0; r < s.num_samples(); ++r) {
    for (int i = 0; i < s.num_variables(); ++i) {
      if (i) out += ',';
      out += s(r, i) > 0 ? "1" : "-1";
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- votes

struct VoteIngest {
  SampleMatrix samples;              // rows = votes, columns = retained voters
  std::vector<std::string> names;    // retained voters, in file order
  std::vector<std::string> dropped;  // voters below the participation threshold
  std::vector<std::string> vote_ids;
};

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

/// Yea -> +1, Nay -> -1, anything else counts as absent and also maps to -1.
/// Voters casting Yea/Nay on fewer than `min_participation` of the votes are
/// dropped.
inline VoteIngest ingest_votes(std::string_view text, double min_participation = 0.75) {
  if (!(min_participation >= 0.0 && min_participation <= 1.0))
    detail::fail(ErrorKind::invalid_argument, "ingest_votes: min_participation must lie in [0, 1]");
  const auto rows = parse_csv(text);
  if (rows.size() < 2) detail::fail(ErrorKind::data, "votes CSV: need a header row and at least one voter");
  const std::size_t width = rows.front().size();
  if (width < 2) detail::fail(ErrorKind::data, "votes CSV: header needs a name column and vote columns");
  VoteIngest out;
  for (std::size_t c = 1; c < width; ++c) out.vote_ids.push_back(trim(rows.front()[c]));
  const int votes = static_cast<int>(width - 1);

  std::set<std::string> seen;
  std::vector<std::vector<std::int8_t>> kept;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != width)
      detail::fail(ErrorKind::data, "votes CSV: row " + std::to_string(r + 1) + " has " +
                                        std::to_string(row.size()) + " cells, header has " +
                                        std::to_string(width));
    const std::string name = trim(row.front());
    if (name.empty()) detail::fail(ErrorKind::data, "votes CSV: empty voter name on row " + std::to_string(r + 1));
    if (!seen.insert(name).second) detail::fail(ErrorKind::data, "votes CSV: duplicate voter '" + name + "'");
    std::vector<std::int8_t> col;
    int cast = 0;
    for (std::size_t c = 1; c < width; ++c) {
      const std::string cell = trim(row[c]);
      if (iequals(cell, "yea")) {
        col.push_back(1);
        ++cast;
      } else {
        cast += iequals(cell, "nay");
        col.push_back(-1);
      }
    }
    if (static_cast<double>(cast) < min_participation * votes) {
      out.dropped.push_back(name);
      continue;
    }
    out.names.push_back(name);
    kept.push_back(std::move(col));
  }
  if (kept.empty()) detail::fail(ErrorKind::data, "votes CSV: no voter meets the participation threshold");

  const int n = static_cast<int>(kept.size());
  std::vector<std::int8_t> data(static_cast<std::size_t>(votes) * n);
  for (int v = 0; v < votes; ++v)
    for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(v) * n + i] = kept[i][v];
  out.samples = SampleMatrix(votes, n, std::move(data));
  return out;
}

// ---------------------------------------------------------------- learn trace

inline json trace_to_json(const LearnTrace& t) {
  auto edge = [](const Edge& e) { return json::array({e.u, e.v}); };
  json steps = json::array();
  for (const auto& s : t.steps) {
    json js = {{"edge", edge(s.edge)},
               {"score", s.infinite_gain ? json(nullptr) : json(s.score)},
               {"infinite_gain", s.infinite_gain},
               {"log_likelihood", s.log_likelihood},
               {"candidates", s.candidates},
               {"fit_iterations", s.fit_iterations}};
    steps.push_back(std::move(js));
  }
  json initial = json::array();
  for (const Edge& e : t.initial_edges) initial.push_back(edge(e));
  return {{"mode", to_string(t.mode)},
          {"num_variables", t.num_variables},
          {"auxiliary_vertex", t.auxiliary ? json(t.num_variables) : json(nullptr)},
          {"initial_edges", std::move(initial)},
          {"initial_log_likelihood", t.initial_log_likelihood},
          {"steps", std::move(steps)},
          {"stop_reason", t.stop_reason},
          {"completed", t.completed},
          {"diagnostic", t.diagnostic},
          {"warnings", t.warnings}};
}

inline json fit_report_to_json(const FitReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"log_likelihood", r.log_likelihood},
          {"objective", r.objective},
          {"grad_norm", r.grad_norm},
          {"diagnostic", r.diagnostic},
          {"warnings", r.warnings},
          {"objective_trace", r.objective_trace}};
}

// ---------------------------------------------------------------- DOT

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

/// Undirected DOT graph. Edge opacity and width grow with |theta|; positive
/// couplings are red, negative blue.
inline std::string to_dot(const IsingModel& model, const std::vector<std::string>& names = {}) {
  const Graph& g = model.graph();
  double top = 0.0;
  for (double t : model.theta_edges()) top = std::max(top, std::abs(t));
  std::ostringstream os;
  os << "graph ising {\n  node [shape=circle];\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::string label =
        static_cast<std::size_t>(v) < names.size() ? names[v] : std::to_string(v);
    os << "  " << v << " [label=" << dot_quote(label);
    const double f = model.theta_nodes()[v];
    if (f != 0.0) os << ", field=" << dot_quote(json(f).dump());
    os << "];\n";
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const double t = model.theta_edges()[e];
    const double rel = top > 0.0 ? std::abs(t) / top : 0.0;
    const int alpha = 40 + static_cast<int>(std::lround(215.0 * rel));
    char color[16];
    std::snprintf(color, sizeof color, "#%s%02x", t >= 0.0 ? "c0392b" : "2471a3", alpha);
    os << "  " << g.edge(e).u << " -- " << g.edge(e).v << " [color=\"" << color
       << "\", penwidth=" << std::fixed << std::setprecision(2) << 0.5 + 3.5 * rel
       << std::defaultfloat << ", weight=" << dot_quote(json(t).dump()) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace planar_ising::io
