#include "pgibbs/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pgibbs/batch.hpp"
#include "pgibbs/diagnostics.hpp"
#include "pgibbs/dynamic.hpp"
#include "pgibbs/errors.hpp"
#include "pgibbs/instances.hpp"
#include "pgibbs/io.hpp"
#include "pgibbs/local_inference.hpp"

namespace pgibbs::cli {

namespace {

struct ModelOptions {
  std::string graph;
  std::string model = "coloring";
  std::size_t q = 3;
  std::string lambda = "1";
  double beta = 0.0;
  double field = 0.0;
};

struct SamplingOptions {
  unsigned ell = 1;
  std::uint64_t seed = 0;
  std::string mode = "mumin";
  std::string numeric = "f64";
  std::optional<std::uint64_t> max_iterations;
  int jobs = 0;
};

std::size_t parse_count(std::string_view text, std::string_view source) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw InvalidInput("bad graph source '" + std::string(source) + "'");
  return value;
}

std::pair<std::size_t, std::size_t> parse_dims(std::string_view text, std::string_view source) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw InvalidInput("bad graph source '" + std::string(source) + "', expected WxH");
  return {parse_count(text.substr(0, x), source), parse_count(text.substr(x + 1), source)};
}

Graph parse_graph(std::string_view source) {
  const auto colon = source.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("bad graph source '" + std::string(source) + "'");
  const std::string_view kind = source.substr(0, colon), rest = source.substr(colon + 1);
  if (kind == "grid" || kind == "torus") {
    const auto [w, h] = parse_dims(rest, source);
    return grid_graph(w, h, kind == "torus");
  }
  if (kind == "random") {
    const auto c1 = rest.find(',');
    const auto c2 = rest.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw InvalidInput("bad graph source '" + std::string(source) + "', expected random:n,p,seed");
    const std::size_t n = parse_count(rest.substr(0, c1), source);
    const double p = to_double(parse_rational(rest.substr(c1 + 1, c2 - c1 - 1)));
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("edge probability must lie in [0, 1]");
    return erdos_renyi(n, p, parse_count(rest.substr(c2 + 1), source));
  }
  const std::size_t n = parse_count(rest, source);
  if (kind == "path") return path_graph(n);
  if (kind == "cycle") return cycle_graph(n);
  if (kind == "complete") return complete_graph(n);
  if (kind == "empty") return empty_graph(n);
  throw InvalidInput("unknown graph source '" + std::string(kind) + "'");
}

ExactSpinSystem build_from_graph(const ModelOptions& m, const Graph& g) {
  if (m.model == "coloring") return exact_coloring_instance(g, m.q, full_lists(g.num_vertices(), m.q));
  const Rational lambda = parse_rational(m.lambda);
  if (lambda <= 0 && m.model != "ising") throw InvalidInput("lambda must be positive");
  if (m.model == "hardcore") return hardcore_instance(g, lambda);
  if (m.model == "matching") return hardcore_instance(line_graph(g).graph, lambda);
  if (m.model == "ising") {
    const std::array<double, 2> b{std::exp(-m.field), std::exp(m.field)};
    return to_exact(ising_instance(g, m.beta, std::vector<std::array<double, 2>>(g.num_vertices(), b)));
  }
  throw InvalidInput("unknown model '" + m.model + "'");
}

ExactSpinSystem build_instance(const ModelOptions& m) {
  if (m.graph.rfind("file:", 0) == 0) return load_instance(m.graph.substr(5));
  return build_from_graph(m, parse_graph(m.graph));
}

SamplerConfig sampler_config(const SamplingOptions& s) {
  SamplerConfig cfg;
  cfg.ell = s.ell;
  cfg.seed = s.seed;
  cfg.filter = s.mode == "mulow" ? FilterMode::MuLow : FilterMode::MuMin;
  cfg.max_iterations = s.max_iterations;
  cfg.cap = EnumerationCap::from_env();
  return cfg;
}

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--graph", m.graph, "grid:WxH, torus:WxH, file:PATH, random:n,p,seed, path:n, cycle:n, complete:n, empty:n")
      ->required();
  app->add_option("--model", m.model, "coloring, hardcore, ising or matching")
      ->check(CLI::IsMember({"coloring", "hardcore", "ising", "matching"}));
  app->add_option("--q", m.q, "number of colours");
  app->add_option("--lambda", m.lambda, "fugacity (hardcore, matching)");
  app->add_option("--beta", m.beta, "Ising coupling");
  app->add_option("--field", m.field, "Ising external field");
}

void add_sampling_options(CLI::App* app, SamplingOptions& s) {
  app->add_option("--ell", s.ell, "block radius");
  app->add_option("--seed", s.seed, "random seed");
  app->add_option("--mode", s.mode, "filter numerator")->check(CLI::IsMember({"mumin", "mulow"}));
  app->add_option("--numeric", s.numeric, "arithmetic")->check(CLI::IsMember({"f64", "rational"}));
  app->add_option("--max-iterations", s.max_iterations, "restart runs after this many steps");
  app->add_option("--jobs", s.jobs, "worker threads (0 = all)");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path);
  return f;
}

void write_run_stats(std::ostream& out, const BatchResult& b) {
  out << "trial,iterations,filter_successes,filter_failures,boundary_added,filter_overflows,attempts\n";
  for (std::size_t i = 0; i < b.stats.size(); ++i) {
    const RunStats& s = b.stats[i];
    out << i << ',' << s.iterations << ',' << s.filter_successes << ',' << s.filter_failures << ','
        << s.boundary_added << ',' << s.filter_overflows << ',' << b.attempts[i] << '\n';
  }
}

std::string sidecar_path(const std::string& out_path, const std::string& stats_path) {
  if (!stats_path.empty()) return stats_path;
  if (!out_path.empty()) return out_path + ".stats.csv";
  return {};
}

// sample

struct SampleCommand {
  ModelOptions model;
  SamplingOptions sampling;
  std::size_t samples = 1;
  std::string out_path;
  std::string stats_path;
};

template <class S>
BatchResult draw(const SpinSystemT<S>& sys, const SampleCommand& c) {
  return sample_batch(sys, sampler_config(c.sampling), c.samples, c.sampling.jobs);
}

int cmd_sample(const SampleCommand& c, std::ostream& out) {
  const ExactSpinSystem exact = build_instance(c.model);
  const BatchResult b = c.sampling.numeric == "rational" ? draw(exact, c) : draw(to_float(exact), c);
  if (c.out_path.empty()) {
    write_configurations(out, b.samples);
  } else {
    auto f = open_output(c.out_path);
    write_configurations(f, b.samples);
  }
  if (const auto path = sidecar_path(c.out_path, c.stats_path); !path.empty()) {
    auto f = open_output(path);
    write_run_stats(f, b);
  }
  return kOk;
}

// verify

struct VerifyCommand {
  ModelOptions model;
  SamplingOptions sampling;
  std::size_t samples = 10000;
};

int cmd_verify(const VerifyCommand& c, std::ostream& out, const Hooks& hooks) {
  const ExactSpinSystem exact = build_instance(c.model);
  const auto oracle = brute_force_distribution(exact, EnumerationCap::from_env());
  const SamplerConfig cfg = sampler_config(c.sampling);
  std::vector<Configuration> samples;
  if (hooks.sampler)
    samples = hooks.sampler(to_float(exact), cfg, c.samples, c.sampling.jobs);
  else if (c.sampling.numeric == "rational")
    samples = sample_batch(exact, cfg, c.samples, c.sampling.jobs).samples;
  else
    samples = sample_batch(to_float(exact), cfg, c.samples, c.sampling.jobs).samples;

  const Tally t = tally<Configuration>(samples, oracle);
  const ChiSquareResult chi = chi_square_gof(t, oracle);
  const double tv = tv_distance(empirical(t, oracle), DiscreteDistribution<Configuration, double>{
                                                          oracle.outcomes, [&] {
                                                            std::vector<double> p;
                                                            for (const auto& x : oracle.probs) p.push_back(to_double(x));
                                                            return p;
                                                          }()});
  const bool pass = chi.p_value > 0.001;
  out << "outcomes " << oracle.size() << " samples " << t.total << " out_of_support " << t.out_of_support << '\n';
  out << std::setprecision(6) << "chi2 " << chi.statistic << " dof " << chi.dof << " bins " << chi.bins << " p "
      << chi.p_value << '\n';
  out << "tv " << tv << '\n';
  out << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kOk : kStatisticalFail;
}

// bench

struct BenchCommand {
  ModelOptions model;
  SamplingOptions sampling;
  std::string family = "grid";
  std::vector<std::size_t> sizes;
  std::size_t trials = 50;
  double budget_ms = 0.0;
  std::string out_path;
};

Graph family_graph(const std::string& family, std::size_t n) {
  if (family == "grid" || family == "torus") {
    const auto w = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (w * w != n) throw InvalidInput("grid sizes must be perfect squares, got " + std::to_string(n));
    return grid_graph(w, w, family == "torus");
  }
  if (family == "path") return path_graph(n);
  if (family == "cycle") return cycle_graph(n);
  if (family == "empty") return empty_graph(n);
  throw InvalidInput("unknown family '" + family + "'");
}

int cmd_bench(const BenchCommand& c, std::ostream& out, std::ostream& err) {
  if (c.sizes.empty()) throw InvalidInput("--sizes must list at least one size");
  for (std::size_t n : c.sizes) family_graph(c.family, n);
  const auto make = [&](std::size_t n) { return to_float(build_from_graph(c.model, family_graph(c.family, n))); };
  const double budget = c.budget_ms > 0 ? c.budget_ms : std::numeric_limits<double>::infinity();
  const auto rows = bench_scaling(make, c.sizes, c.trials, sampler_config(c.sampling), c.sampling.jobs, budget);
  for (const BenchRow& r : rows)
    if (r.timed_out) err << "perfect_gibbs: warning: size " << r.n << " hit the time budget after " << r.trials << " trials\n";
  if (c.out_path.empty()) {
    write_bench_csv(out, rows);
  } else {
    auto f = open_output(c.out_path);
    write_bench_csv(f, rows);
  }
  return kOk;
}

// dynamic

struct DynamicCommand {
  ModelOptions model;
  SamplingOptions sampling;
  std::string update_path;
  std::size_t samples = 1;
  std::string out_path;
  std::string stats_path;
};

struct DynamicTrial {
  Configuration sample;
  RunStats initial;
  RunStats repair;
};

template <class S>
std::vector<DynamicTrial> dynamic_trials(const SpinSystemT<S>& sys, const UpdateBatch<S>& upd, const DynamicCommand& c) {
  const SamplerConfig cfg = sampler_config(c.sampling);
  const SpinSystemT<S> updated = apply_update(sys, upd);
  const auto d = update_support(upd);
  std::vector<DynamicTrial> trials(c.samples);
  struct Worker {
    PerfectSampler<S> before;
    PerfectSampler<S> after;
  };
  parallel_trials(
      c.samples, c.sampling.jobs, [&] { return Worker{PerfectSampler<S>(sys, cfg), PerfectSampler<S>(updated, cfg)}; },
      [&](std::size_t i, Worker& w) {
        Rng rng(derive_seed(cfg.seed, i));
        for (;;) {
          RunResult r = w.before.run(rng);
          if (auto* done = std::get_if<Completed>(&r)) {
            trials[i].initial = done->stats;
            Completed fixed = repair_sample(w.after, std::move(done->sample), d, rng);
            trials[i].sample = std::move(fixed.sample);
            trials[i].repair = std::move(fixed.stats);
            return;
          }
        }
      });
  return trials;
}

int cmd_dynamic(const DynamicCommand& c, std::ostream& out) {
  const ExactSpinSystem exact = build_instance(c.model);
  const auto upd = load_update(c.update_path, exact.q());
  const auto trials = c.sampling.numeric == "rational" ? dynamic_trials(exact, upd, c)
                                                        : dynamic_trials(to_float(exact), to_float(upd), c);
  std::vector<Configuration> samples;
  for (const auto& t : trials) samples.push_back(t.sample);
  if (c.out_path.empty()) {
    write_configurations(out, samples);
  } else {
    auto f = open_output(c.out_path);
    write_configurations(f, samples);
  }
  if (const auto path = sidecar_path(c.out_path, c.stats_path); !path.empty()) {
    auto f = open_output(path);
    f << "trial,initial_iterations,repair_iterations,repair_filter_failures\n";
    for (std::size_t i = 0; i < trials.size(); ++i)
      f << i << ',' << trials[i].initial.iterations << ',' << trials[i].repair.iterations << ','
        << trials[i].repair.filter_failures << '\n';
  }
  return kOk;
}

// probe

struct ProbeCommand {
  ModelOptions model;
  unsigned ell = 1;
  bool ssm = false;
  bool gamma = false;
  std::optional<Vertex> vertex;
  std::string numeric = "f64";
};

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream ss;
  ss << std::setprecision(6) << x;
  return ss.str();
}

int cmd_probe(const ProbeCommand& c, std::ostream& out, std::ostream& err) {
  const ExactSpinSystem exact = build_instance(c.model);
  const EnumerationCap cap = EnumerationCap::from_env();
  if (c.ssm) {
    const SpinSystem sys = to_float(exact);
    std::vector<Vertex> vs;
    if (c.vertex) {
      sys.graph().check_vertex(*c.vertex);
      vs.push_back(*c.vertex);
    } else {
      for (Vertex v = 0; v < sys.num_vertices(); ++v) vs.push_back(v);
    }
    out << "v,ell,sphere,threshold,ratio_bound,weak_bound,gamma,ratio_ok,weak_ok\n";
    for (Vertex v : vs) {
      const SsmReport r = ssm_ratio_probe(sys, v, c.ell, cap);
      out << r.v << ',' << r.ell << ',' << r.sphere_size << ',' << fmt(r.threshold) << ',' << fmt(r.ratio_bound) << ','
          << fmt(r.weak_bound) << ',' << fmt(r.gamma) << ',' << (r.ratio_ok() ? "yes" : "no") << ','
          << (r.weak_ok() ? "yes" : "no") << '\n';
    }
  }
  if (c.gamma) {
    bool zero;
    if (c.numeric == "rational") {
      const Rational g = gamma_probe(exact, c.ell, cap);
      out << "gamma " << g.str() << '\n';
      zero = g == 0;
    } else {
      const double g = gamma_probe(to_float(exact), c.ell, cap);
      out << "gamma " << fmt(g) << '\n';
      zero = g == 0;
    }
    if (zero) err << "perfect_gibbs: warning: gamma is 0, some step has a zero acceptance bound at ell=" << c.ell << '\n';
  }
  return kOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Perfect sampling from Gibbs distributions of spin systems", "perfect_gibbs"};
  app.require_subcommand(1);

  SampleCommand sample;
  auto* s = app.add_subcommand("sample", "draw perfect samples");
  add_model_options(s, sample.model);
  add_sampling_options(s, sample.sampling);
  s->add_option("--samples", sample.samples, "number of samples");
  s->add_option("--out", sample.out_path, "sample file (default: standard output)");
  s->add_option("--stats", sample.stats_path, "per-run statistics CSV (default: OUT.stats.csv)");

  VerifyCommand verify;
  auto* v = app.add_subcommand("verify", "compare sampler output with the exact distribution");
  add_model_options(v, verify.model);
  add_sampling_options(v, verify.sampling);
  v->add_option("--samples", verify.samples, "number of samples");

  BenchCommand bench;
  auto* b = app.add_subcommand("bench", "iteration count and run time against size");
  bench.model.graph = "unused";
  b->add_option("--model", bench.model.model, "coloring, hardcore, ising or matching")
      ->check(CLI::IsMember({"coloring", "hardcore", "ising", "matching"}));
  b->add_option("--q", bench.model.q, "number of colours");
  b->add_option("--lambda", bench.model.lambda, "fugacity");
  b->add_option("--beta", bench.model.beta, "Ising coupling");
  b->add_option("--field", bench.model.field, "Ising external field");
  add_sampling_options(b, bench.sampling);
  b->add_option("--family", bench.family, "graph family")->check(CLI::IsMember({"grid", "torus", "path", "cycle", "empty"}));
  b->add_option("--sizes", bench.sizes, "comma-separated vertex counts")->delimiter(',')->required();
  b->add_option("--trials", bench.trials, "runs per size");
  b->add_option("--budget-ms", bench.budget_ms, "wall-clock budget per size (0 = none)");
  b->add_option("--out", bench.out_path, "CSV file (default: standard output)");

  DynamicCommand dyn;
  auto* d = app.add_subcommand("dynamic", "sample, apply an update, repair the sample");
  add_model_options(d, dyn.model);
  add_sampling_options(d, dyn.sampling);
  d->add_option("--update", dyn.update_path, "update JSON file")->required();
  d->add_option("--samples", dyn.samples, "number of samples");
  d->add_option("--out", dyn.out_path, "sample file (default: standard output)");
  d->add_option("--stats", dyn.stats_path, "per-trial statistics CSV (default: OUT.stats.csv)");

  ProbeCommand probe;
  auto* p = app.add_subcommand("probe", "exhaustive spatial mixing and acceptance bound probes");
  add_model_options(p, probe.model);
  p->add_option("--ell", probe.ell, "distance or block radius");
  auto* ssm_flag = p->add_flag("--ssm", probe.ssm, "spatial mixing ratios");
  auto* gamma_flag = p->add_flag("--gamma", probe.gamma, "smallest acceptance bound");
  ssm_flag->excludes(gamma_flag);
  p->add_option("--vertex", probe.vertex, "probe a single vertex");
  p->add_option("--numeric", probe.numeric, "arithmetic")->check(CLI::IsMember({"f64", "rational"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "perfect_gibbs: " << one_line(e.what()) << '\n';
    return kUsage;
  }

  try {
    if (s->parsed()) return cmd_sample(sample, out);
    if (v->parsed()) return cmd_verify(verify, out, hooks);
    if (b->parsed()) return cmd_bench(bench, out, err);
    if (d->parsed()) return cmd_dynamic(dyn, out);
    if (!probe.ssm && !probe.gamma) throw InvalidInput("probe needs --ssm or --gamma");
    return cmd_probe(probe, out, err);
  } catch (const EnumerationCapExceeded& e) {
    err << "perfect_gibbs: " << one_line(e.what()) << '\n';
    return kResource;
  } catch (const std::bad_alloc&) {
    err << "perfect_gibbs: out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    err << "perfect_gibbs: " << one_line(e.what()) << '\n';
    return kUsage;
  }
}

}  // namespace pgibbs::cli
