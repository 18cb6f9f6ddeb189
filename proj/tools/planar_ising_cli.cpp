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

// planar-ising: learn, fit, sample and evaluate planar Ising models.
//
// Exit codes: 0 success, 1 usage error, 2 data error (including non-planar
// input and oversized exact runs), 3 numerical failure. Errors are reported
// on stderr as {"error": {"kind": ..., "message": ...}}.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "planar_ising/extension.hpp"
#include "planar_ising/fit.hpp"
#include "planar_ising/inference.hpp"
#include "planar_ising/io.hpp"
#include "planar_ising/learn.hpp"
#include "planar_ising/oracle.hpp"
#include "planar_ising/sample.hpp"

namespace pi = planar_ising;
namespace io = planar_ising::io;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code(pi::ErrorKind kind) {
  switch (kind) {
    case pi::ErrorKind::invalid_argument: return 1;
    case pi::ErrorKind::data:
    case pi::ErrorKind::not_planar:
    case pi::ErrorKind::size: return 2;
    case pi::ErrorKind::numerical: return 3;
  }
  return 2;
}

int report_error(std::string_view kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  return code;
}

json base_meta(const std::string& command, std::uint64_t seed) {
  return {{"tool", "planar-ising"}, {"version", kVersion}, {"command", command}, {"seed", seed}};
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

struct Data {
  pi::MomentSet moments;
  std::optional<pi::SampleMatrix> samples;
  std::vector<std::string> names;
};

/// Moments from --moments (JSON or CSV) or --samples (CSV).
Data load_data(const std::string& moments_path, const std::string& samples_path) {
  Data d;
  if (!moments_path.empty()) {
    const std::string text = io::read_file(moments_path);
    d.moments = looks_like_json(text) ? io::moments_from_json(io::parse_json(text, "moments"))
                                      : io::moments_from_csv(text);
  } else {
    auto table = io::samples_from_csv(io::read_file(samples_path));
    d.moments = pi::empirical_moments(table.samples);
    d.samples = std::move(table.samples);
    d.names = std::move(table.names);
  }
  return d;
}

std::vector<std::string> meta_names(const json& meta) {
  if (meta.is_object() && meta.contains("names") && meta["names"].is_array())
    return meta["names"].get<std::vector<std::string>>();
  return {};
}

void write_json(const std::string& path, const json& j) {
  if (path == "-") {
    std::cout << io::dump(j);
  } else {
    io::write_file_atomic(path, io::dump(j));
  }
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
  std::string moments, samples, out = "model.json", trace, dot;
  std::string mode = "zero-field";
  double gamma = 0.0;
  std::optional<int> max_edges, stop_at_edges;
};

int run_learn(const LearnArgs& a, std::uint64_t seed) {
  const auto mode = pi::parse_learn_mode(a.mode);
  if (!mode) pi::detail::fail(pi::ErrorKind::invalid_argument, "unknown --mode '" + a.mode + "'");
  const Data d = load_data(a.moments, a.samples);
  pi::LearnConfig cfg;
  cfg.mode = *mode;
  cfg.gain_threshold = a.gamma;
  cfg.max_edges = a.max_edges;
  cfg.stop_at_edges = a.stop_at_edges;
  const pi::LearnResult r = pi::greedy_select(d.moments, cfg);

  json meta = base_meta("learn", seed);
  meta["mode"] = pi::to_string(*mode);
  meta["gamma"] = a.gamma;
  if (a.max_edges) meta["max_edges"] = *a.max_edges;
  if (a.stop_at_edges) meta["stop_at_edges"] = *a.stop_at_edges;
  if (!d.names.empty()) meta["names"] = d.names;
  write_json(a.out, io::model_to_json(r.model, meta));
  if (!a.trace.empty()) write_json(a.trace, io::trace_to_json(r.trace));
  if (!a.dot.empty()) io::write_file_atomic(a.dot, io::to_dot(r.model, d.names));

  std::cout << json{{"edges", r.model.num_edges()},
                    {"stop_reason", r.trace.stop_reason},
                    {"completed", r.trace.completed},
                    {"log_likelihood", r.trace.steps.empty() ? r.trace.initial_log_likelihood
                                                             : r.trace.steps.back().log_likelihood}}
                   .dump()
            << "\n";
  if (!r.trace.completed) return report_error("numerical", r.trace.diagnostic, 3);
  return 0;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string graph, moments, samples, out = "model.json", report;
  bool with_fields = false;
};

int run_fit(const FitArgs& a, std::uint64_t seed) {
  const pi::Graph g = io::graph_from_json(io::parse_json(io::read_file(a.graph), "graph"));
  const Data d = load_data(a.moments, a.samples);
  if (d.moments.n != g.num_vertices())
    pi::detail::fail(pi::ErrorKind::data, "fit: moments have n = " + std::to_string(d.moments.n) +
                                              " but the graph has " + std::to_string(g.num_vertices()) +
                                              " vertices");
  const int n = g.num_vertices();
  pi::Graph learner = g;
  pi::MomentSet targets = d.moments;
  if (a.with_fields) {
    learner = pi::Graph(n + 1);
    for (const auto& e : g.edges()) learner.add_edge(e.u, e.v);
    for (pi::Vertex i = 0; i < n; ++i) learner.add_edge(i, n);
    targets = pi::extend_moments(d.moments);
  }
  if (!pi::is_planar(learner))
    pi::detail::fail(pi::ErrorKind::not_planar, a.with_fields ? "fit: graph plus the auxiliary field vertex is not planar"
                                                              : "fit: graph is not planar");
  std::vector<double> t;
  for (const auto& e : learner.edges()) t.push_back(targets.mu_pairs(e.u, e.v));
  const pi::FitReport rep = pi::fit_ml(learner, t, pi::FitConfig{});
  pi::IsingModel fitted(learner, rep.theta);
  const pi::IsingModel model = a.with_fields ? pi::contract_model(fitted, n) : fitted;

  json meta = base_meta("fit", seed);
  meta["with_fields"] = a.with_fields;
  if (!d.names.empty()) meta["names"] = d.names;
  write_json(a.out, io::model_to_json(model, meta));
  json report = io::fit_report_to_json(rep);
  if (a.with_fields) report["log_likelihood"] = rep.log_likelihood + std::numbers::ln2;
  if (!a.report.empty()) write_json(a.report, report);
  std::cout << json{{"converged", rep.converged}, {"iterations", rep.iterations},
                    {"log_likelihood", report["log_likelihood"]}}.dump()
            << "\n";
  if (!rep.converged) return report_error("numerical", rep.diagnostic, 3);
  return 0;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string model, grid, out = "samples.csv", model_out, init = "all-plus";
  bool outer_planar = false;
  int outer_n = 12, chords = 4;
  int num_samples = 0, burn_in = 1000, thin = 10;
  std::optional<std::uint64_t> generator_seed;
  bool header = false;
};

int run_sample(const SampleArgs& a, std::uint64_t seed) {
  const int sources = !a.model.empty() + !a.grid.empty() + a.outer_planar;
  if (sources != 1)
    pi::detail::fail(pi::ErrorKind::invalid_argument, "sample: give exactly one of --model, --grid, --outer-planar");
  const std::uint64_t gen_seed = a.generator_seed.value_or(seed);
  pi::IsingModel model;
  json meta = base_meta("sample", seed);
  std::vector<std::string> names;
  if (!a.model.empty()) {
    const json j = io::parse_json(io::read_file(a.model), "model");
    model = io::model_from_json(j);
    names = meta_names(j.value("meta", json(nullptr)));
  } else if (!a.grid.empty()) {
    int rows = 0, cols = 0;
    char x = 0;
    std::istringstream is(a.grid);
    if (!(is >> rows >> x >> cols) || (x != 'x' && x != 'X') || !is.eof())
      pi::detail::fail(pi::ErrorKind::invalid_argument, "sample: --grid expects ROWSxCOLS, e.g. 7x7");
    model = pi::random_grid_model(rows, cols, gen_seed);
    meta["generator"] = {{"kind", "grid"}, {"rows", rows}, {"cols", cols}, {"seed", gen_seed}};
  } else {
    pi::OuterPlanarModelSpec spec;
    spec.n = a.outer_n;
    spec.chords = a.chords;
    model = pi::random_outer_planar_model(spec, gen_seed);
    meta["generator"] = {{"kind", "outer-planar"}, {"n", spec.n}, {"chords", spec.chords}, {"seed", gen_seed}};
  }

  pi::SamplerConfig cfg;
  cfg.burn_in = a.burn_in;
  cfg.thin = a.thin;
  cfg.seed = seed;
  if (a.init == "random") {
    cfg.init = pi::SamplerInit::uniform_random;
  } else if (a.init != "all-plus") {
    pi::detail::fail(pi::ErrorKind::invalid_argument, "sample: --init must be all-plus or random");
  }
  const pi::SampleMatrix s = pi::gibbs_sample(model, a.num_samples, cfg);
  if (a.header && names.empty())
    for (int i = 0; i < model.num_vertices(); ++i) names.push_back("x" + std::to_string(i));
  io::write_file_atomic(a.out, io::samples_to_csv(s, a.header ? names : std::vector<std::string>{}));
  if (!a.model_out.empty()) write_json(a.model_out, io::model_to_json(model, meta));
  std::cout << json{{"samples", s.num_samples()}, {"variables", s.num_variables()}, {"seed", seed}}.dump()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string model, moments, samples, out = "-", moments_out;
  bool exact = false;
};

int run_eval(const EvalArgs& a, std::uint64_t seed) {
  const json mj = io::parse_json(io::read_file(a.model), "model");
  const pi::IsingModel model = io::model_from_json(mj);
  const pi::Graph& g = model.graph();
  const int n = model.num_vertices();
  if (a.exact) pi::detail::require_oracle_size(n);
  if (!a.moments_out.empty() && !a.exact)
    pi::detail::fail(pi::ErrorKind::invalid_argument, "eval: --moments-out requires --exact");

  json out = {{"n", n}, {"edges", g.num_edges()}, {"seed", seed}};
  std::optional<pi::Inference> inf;
  if (pi::is_planar(g)) {
    inf = pi::infer(model);
    out["log_partition"] = inf->log_partition;
    out["mu_nodes"] = inf->mu_nodes;
    out["mu_edges"] = inf->mu_edges;
  } else if (!a.exact) {
    pi::detail::fail(pi::ErrorKind::not_planar, "eval: model graph is not planar; --exact handles n <= 24");
  }

  std::optional<Data> d;
  if (!a.moments.empty() || !a.samples.empty()) {
    d = load_data(a.moments, a.samples);
    if (d->moments.n != n) pi::detail::fail(pi::ErrorKind::data, "eval: data and model differ in n");
  }

  std::optional<pi::StateDistribution> exact;
  if (a.exact) {
    exact = pi::enum_distribution(model);
    const double logz = pi::enum_log_partition(model);
    const pi::MomentSet em = pi::enum_moments(model);
    json ex = {{"log_partition", logz}};
    if (inf) {
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(inf->mu_nodes[i] - em.mu_nodes[i]));
      for (int e = 0; e < g.num_edges(); ++e)
        diff = std::max(diff, std::abs(inf->mu_edges[e] - em.mu_pairs(g.edge(e).u, g.edge(e).v)));
      ex["log_partition_abs_diff"] = std::abs(logz - inf->log_partition);
      ex["moment_max_abs_diff"] = diff;
    } else {
      out["log_partition"] = logz;
    }
    out["exact"] = std::move(ex);
    if (!a.moments_out.empty()) write_json(a.moments_out, io::moments_to_json(em));
  }

  if (d) {
    const double logz = out["log_partition"].get<double>();
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += model.theta_nodes()[i] * d->moments.mu_nodes[i];
    for (int e = 0; e < g.num_edges(); ++e)
      dot += model.theta_edges()[e] * d->moments.mu_pairs(g.edge(e).u, g.edge(e).v);
    out["log_likelihood_per_sample"] = dot - logz;
    if (exact && d->samples) {
      pi::StateDistribution emp{n, std::vector<double>(exact->probs.size(), 0.0)};
      const int s_count = d->samples->num_samples();
      for (int s = 0; s < s_count; ++s) {
        std::uint32_t state = 0;
        for (int i = 0; i < n; ++i)
          if ((*d->samples)(s, i) > 0) state |= 1u << i;
        emp.probs[state] += 1.0 / s_count;
      }
      out["exact"]["kl_empirical_to_model"] = pi::enum_divergence(emp, *exact);
    }
  }
  write_json(a.out, out);
  return 0;
}

// ---------------------------------------------------------------- ingest-votes

struct VoteArgs {
  std::string input, out = "samples.csv";
  double min_participation = 0.75;
};

int run_votes(const VoteArgs& a) {
  const io::VoteIngest v = io::ingest_votes(io::read_file(a.input), a.min_participation);
  io::write_file_atomic(a.out, io::samples_to_csv(v.samples, v.names));
  std::cout << json{{"votes", v.samples.num_samples()}, {"retained", v.names.size()},
                    {"dropped", v.dropped}}.dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn, fit, sample and evaluate planar Ising models", "planar-ising"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomness; recorded in output metadata")->default_val(0);

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Greedy planar structure learning");
  auto* lm = learn->add_option("--moments", la.moments, "Moments file (JSON or CSV)")->check(CLI::ExistingFile);
  auto* ls = learn->add_option("--samples", la.samples, "Samples CSV")->check(CLI::ExistingFile);
  lm->excludes(ls);
  learn->add_option("--mode", la.mode, "zero-field, outer-planar or partial-outer-planar")->capture_default_str();
  learn->add_option("--gamma", la.gamma, "Stop when the best score is not above this gain")->capture_default_str();
  learn->add_option("--max-edges", la.max_edges, "Maximum number of greedy additions");
  learn->add_option("--stop-at-edges", la.stop_at_edges, "Stop once the model has this many couplings");
  learn->add_option("-o,--out", la.out, "Model JSON output ('-' for stdout)")->capture_default_str();
  learn->add_option("--trace", la.trace, "Trace JSON output");
  learn->add_option("--dot", la.dot, "DOT graph output");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit on a fixed planar graph");
  fit->add_option("--graph", fa.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  auto* fm = fit->add_option("--moments", fa.moments, "Moments file (JSON or CSV)")->check(CLI::ExistingFile);
  auto* fs = fit->add_option("--samples", fa.samples, "Samples CSV")->check(CLI::ExistingFile);
  fm->excludes(fs);
  fit->add_flag("--with-fields", fa.with_fields, "Also fit node fields through the auxiliary vertex");
  fit->add_option("-o,--out", fa.out, "Model JSON output ('-' for stdout)")->capture_default_str();
  fit->add_option("--report", fa.report, "Fit report JSON output");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Gibbs sampling from a model or a generated one");
  sample->add_option("--model", sa.model, "Model JSON")->check(CLI::ExistingFile);
  sample->add_option("--grid", sa.grid, "Generate a ROWSxCOLS zero-field grid model");
  sample->add_flag("--outer-planar", sa.outer_planar, "Generate an outer-planar model with fields");
  sample->add_option("--outer-n", sa.outer_n, "Vertices of the generated outer-planar model")->capture_default_str();
  sample->add_option("--chords", sa.chords, "Chords of the generated outer-planar model")->capture_default_str();
  sample->add_option("--generator-seed", sa.generator_seed, "Seed of the model generator (default: --seed)");
  sample->add_option("-n,--num-samples", sa.num_samples, "Number of samples")->required();
  sample->add_option("--burn-in", sa.burn_in, "Sweeps discarded before sampling")->capture_default_str();
  sample->add_option("--thin", sa.thin, "Sweeps between retained samples")->capture_default_str();
  sample->add_option("--init", sa.init, "all-plus or random")->capture_default_str();
  sample->add_flag("--header", sa.header, "Write a header row of variable names");
  sample->add_option("-o,--out", sa.out, "Samples CSV output")->capture_default_str();
  sample->add_option("--model-out", sa.model_out, "Write the sampled model as JSON");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Log-partition, moments and data log-likelihood of a model");
  eval->add_option("--model", ea.model, "Model JSON")->required()->check(CLI::ExistingFile);
  auto* em = eval->add_option("--moments", ea.moments, "Moments file (JSON or CSV)")->check(CLI::ExistingFile);
  auto* es = eval->add_option("--samples", ea.samples, "Samples CSV")->check(CLI::ExistingFile);
  em->excludes(es);
  eval->add_flag("--exact", ea.exact, "Cross-check against exhaustive enumeration (n <= 24)");
  eval->add_option("--moments-out", ea.moments_out, "With --exact, write all exact moments as JSON");
  eval->add_option("-o,--out", ea.out, "Report JSON output ('-' for stdout)")->capture_default_str();

  VoteArgs va;
  auto* votes = app.add_subcommand("ingest-votes", "Convert a roll-call CSV into a samples CSV");
  votes->add_option("--input", va.input, "Vote CSV: name column, then one column per vote")
      ->required()
      ->check(CLI::ExistingFile);
  votes->add_option("--min-participation", va.min_participation, "Drop voters below this Yea/Nay fraction")
      ->capture_default_str();
  votes->add_option("-o,--out", va.out, "Samples CSV output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 1);
  }

  try {
    if (*learn || *fit || *eval) {
      const bool has_data = *learn ? !la.moments.empty() || !la.samples.empty()
                                   : *fit ? !fa.moments.empty() || !fa.samples.empty() : true;
      if (!has_data) return report_error("usage", "one of --moments or --samples is required", 1);
    }
    if (*learn) return run_learn(la, seed);
    if (*fit) return run_fit(fa, seed);
    if (*sample) return run_sample(sa, seed);
    if (*eval) return run_eval(ea, seed);
    return run_votes(va);
  } catch (const pi::Error& e) {
    return report_error(pi::to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 3);
  }
}
