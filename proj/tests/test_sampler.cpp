#include <chrono>
#include <cmath>

#include "doctest.h"
#include "golden.hpp"
#include "instances_util.hpp"
#include "oracle.hpp"
#include "pgibbs/batch.hpp"
#include "pgibbs/diagnostics.hpp"
#include "pgibbs/local_inference.hpp"
#include "pgibbs/sampler.hpp"

using namespace pgibbs;
using V = std::vector<Vertex>;

namespace {

ExactSpinSystem exact_of(const SpinSystem& sys) { return to_exact(sys); }
ExactSpinSystem exact_of(const ExactSpinSystem& sys) { return sys; }

template <class S>
double gof_p_value(const SpinSystemT<S>& sys, const std::vector<Configuration>& samples) {
  const auto exact = brute_force_distribution(exact_of(sys));
  DiscreteDistribution<Configuration, double> expected{exact.outcomes, {}};
  for (const auto& p : exact.probs) expected.probs.push_back(p.template convert_to<double>());
  const auto t = tally<Configuration>(samples, expected);
  return chi_square_gof(t, expected).p_value;
}

SamplerConfig config(unsigned ell, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.ell = ell;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("init") {
  const auto soft = golden::soft_pair();
  PerfectSampler<double> s1(soft, config(1, 0));
  const auto st1 = s1.init();
  CHECK(st1.x == Configuration{0, 0});
  CHECK(st1.r.size() == 2);

  const auto hc = hardcore_instance(path_graph(4), 1.0);
  PerfectSampler<double> s2(hc, config(1, 0));
  CHECK(s2.init().x == Configuration(4, 0));

  const auto k3 = fixtures::triangle_coloring();
  PerfectSampler<double> s3(k3, config(1, 0));
  const auto st3 = s3.init();
  CHECK(st3.x == Configuration{0, 1, 2});
  CHECK(st3.r.to_vector() == V{0, 1, 2});
  CHECK(st3.stats.iterations == 0);

  CHECK_THROWS_AS(PerfectSampler<double>(k3, config(0, 0)), HardConstraintRejected);
}

TEST_CASE("edgeless graph: every filter succeeds and T = n") {
  const SpinSystem sys(Graph(7), 3, std::vector<std::vector<double>>(7, {1, 2, 3}), {});
  for (unsigned ell : {0u, 1u, 3u}) {
    PerfectSampler<double> sampler(sys, config(ell, 5));
    Rng rng(ell);
    auto st = sampler.init();
    for (std::size_t k = 7; k > 0; --k) {
      const auto rec = sampler.step(st, rng);
      CHECK(rec.probability == 1.0);
      CHECK(rec.accepted);
      CHECK(st.r.size() == k - 1);
    }
    const auto res = sampler.run();
    REQUIRE(std::holds_alternative<Completed>(res));
    CHECK(std::get<Completed>(res).stats.iterations == 7);
  }
}

TEST_CASE("hardcore path with R = {b}") {
  const auto sys = hardcore_instance(path_graph(3), Rational(1));
  PerfectSampler<Rational> sampler(sys, config(1, 0));
  auto st = sampler.make_state({0, 0, 0}, V{1});
  Rng rng(3);
  const auto rec = sampler.step(st, rng);
  CHECK(rec.u == 1);
  CHECK(rec.mu_min == Rational(4, 5));
  CHECK(rec.marginal == Rational(4, 5));
  CHECK(rec.probability == 1);
  CHECK(rec.accepted);
  CHECK(st.r.empty());
  CHECK(sampler.last_boundary().empty());
}

TEST_CASE("coloring path filter probability one half") {
  const auto sys = exact_coloring_instance(path_graph(3), 3, full_lists(3, 3));
  PerfectSampler<Rational> sampler(sys, config(1, 0));
  int accepted = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto st = sampler.make_state({0, 1, 0}, V{0});
    Rng rng(seed);
    const auto rec = sampler.step(st, rng);
    CHECK(rec.u == 0);
    CHECK(rec.mu_min == Rational(1, 4));
    CHECK(rec.marginal == Rational(1, 2));
    CHECK(rec.probability == Rational(1, 2));
    if (rec.accepted) {
      ++accepted;
      CHECK(st.r.empty());
    } else {
      ++rejected;
      CHECK(rec.added == 1);
      CHECK(st.r.to_vector() == V{0, 2});
      CHECK(st.x == Configuration{0, 1, 0});
    }
  }
  CHECK(accepted > 150);
  CHECK(rejected > 150);
}

TEST_CASE("single vertex b=(1,3)") {
  const SpinSystem sys(Graph(1), 2, {{1, 3}}, {});
  const auto batch = sample_batch(sys, config(1, 11), 100000, 1);
  std::uint64_t ones = 0;
  for (const auto& x : batch.samples) ones += x[0];
  CHECK(std::abs(static_cast<double>(ones) / 1e5 - 0.75) < 4 * std::sqrt(0.75 * 0.25 / 1e5));
}

TEST_CASE("triangle coloring and C4 hardcore") {
  const auto k3 = fixtures::triangle_coloring();
  CHECK(gof_p_value(k3, sample_batch(k3, config(1, 21), 60000, 1).samples) > 0.001);
  const auto c4 = hardcore_instance(grid_graph(2, 2, false), 1.0);
  CHECK(brute_force_distribution(c4).size() == 7);
  CHECK(gof_p_value(c4, sample_batch(c4, config(1, 22), 100000, 1).samples) > 0.001);
}

TEST_CASE("exact rational mode") {
  const auto k3 = fixtures::exact_triangle_coloring();
  const auto batch = sample_batch(k3, config(1, 23), 20000, 1);
  CHECK(gof_p_value(k3, batch.samples) > 0.001);
  for (const auto& s : batch.stats) CHECK(s.filter_overflows == 0);
}

TEST_CASE("single-site sampler") {
  const SpinSystem edgeless(Graph(4), 2, std::vector<std::vector<double>>(4, {1, 2}), {});
  const auto r = run_single_site(edgeless, 1);
  REQUIRE(std::holds_alternative<Completed>(r));
  CHECK(std::get<Completed>(r).stats.iterations == 4);

  const auto pair = golden::soft_pair();
  const auto exact = brute_force_distribution(to_exact(pair));
  CHECK(exact.probs == std::vector<Rational>{Rational(1, 3), Rational(1, 6), Rational(1, 6), Rational(1, 3)});
  std::vector<Configuration> samples;
  for (std::uint64_t seed = 0; seed < 100000; ++seed)
    samples.push_back(std::get<Completed>(run_single_site(pair, derive_seed(7, seed))).sample);
  CHECK(gof_p_value(pair, samples) > 0.001);

  // Same code path as ell = 0.
  PerfectSampler<double> zero(pair, config(0, derive_seed(7, 5)));
  CHECK(std::get<Completed>(zero.run()).sample == samples[5]);

  CHECK_THROWS_AS(run_single_site(fixtures::triangle_coloring(), 1), HardConstraintRejected);
}

TEST_CASE("step invariants on random instances") {
  std::mt19937_64 gen(41);
  std::uint64_t steps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = erdos_renyi(2 + gen() % 7, 0.4, gen());
    const auto sys = trial % 2 ? fixtures::random_instance(gen, 8, true)
                               : coloring_instance(g, 5, full_lists(g.num_vertices(), 5));
    if (sys.num_vertices() > 1 && sys.graph().max_degree() >= 5) continue;
    const unsigned ell = static_cast<unsigned>(gen() % 3) + (sys.is_soft() ? 0 : 1);
    PerfectSampler<double> sampler(sys, config(ell, gen()));
    auto st = sampler.init();
    Rng rng(gen());
    while (!st.r.empty()) {
      const auto before_x = st.x;
      const auto before_r = st.r.to_vector();
      const auto rec = sampler.step(st, rng);
      ++steps;
      CHECK(weight(sys, st.x) > 0);
      CHECK(rec.mu_min <= rec.marginal * (1 + 1e-12));
      CHECK(std::binary_search(before_r.begin(), before_r.end(), rec.u));
      auto after_r = st.r.to_vector();
      if (rec.accepted) {
        auto expect = before_r;
        expect.erase(std::find(expect.begin(), expect.end(), rec.u));
        CHECK(after_r == expect);
        for (Vertex v = 0; v < sys.num_vertices(); ++v)
          if (st.x[v] != before_x[v])
            CHECK(std::binary_search(sampler.last_block().begin(), sampler.last_block().end(), v));
      } else {
        CHECK(st.x == before_x);
        V expect = before_r;
        for (Vertex w : sampler.last_boundary()) expect.push_back(w);
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        CHECK(after_r == expect);
        CHECK(rec.added == after_r.size() - before_r.size());
      }
    }
    CHECK(st.stats.feasibility_violations == 0);
    CHECK(st.stats.filter_overflows == 0);
    CHECK(st.stats.filter_successes + st.stats.filter_failures == st.stats.iterations);
  }
  CHECK(steps > 1000);
}

TEST_CASE("runs are deterministic and independent of the memo") {
  const auto sys = coloring_instance(grid_graph(4, 4, false), 6, full_lists(16, 6));
  auto cfg = config(1, 99);
  cfg.record_trace = true;
  PerfectSampler<double> a(sys, cfg);
  cfg.memoize = false;
  PerfectSampler<double> b(sys, cfg);
  for (int i = 0; i < 20; ++i) {
    Rng ra(i), rb(i);
    const auto x = std::get<Completed>(a.run(ra));
    const auto y = std::get<Completed>(b.run(rb));
    CHECK(x.sample == y.sample);
    CHECK(x.stats.r_trace == y.stats.r_trace);
    CHECK(x.stats.iterations == x.stats.r_trace.size());
  }
  CHECK(a.memo_size() > 0);
  CHECK(b.memo_size() == 0);
}

TEST_CASE("parallel batch equals serial batch") {
  const auto sys = coloring_instance(grid_graph(3, 3, false), 5, full_lists(9, 5));
  auto cfg = config(1, 1234);
  cfg.max_iterations = 9;
  const auto par = sample_batch(sys, cfg, 300, 4);
  const auto ser = sample_batch_serial(sys, cfg, 300);
  CHECK(par.samples == ser.samples);
  CHECK(par.attempts == ser.attempts);
  for (std::size_t i = 0; i < 300; ++i) CHECK(par.stats[i].iterations == ser.stats[i].iterations);
}

TEST_CASE("interrupted runs carry no sample and restart without bias") {
  const auto k3 = fixtures::triangle_coloring();
  auto cfg = config(1, 77);
  cfg.max_iterations = 1;
  PerfectSampler<double> sampler(k3, cfg);
  Rng rng(1);
  const auto r = sampler.run(rng);
  REQUIRE(std::holds_alternative<Interrupted>(r));
  CHECK(std::get<Interrupted>(r).stats.iterations == 1);

  cfg.max_iterations = 6;
  CHECK(gof_p_value(k3, sample_batch(k3, cfg, 60000, 1).samples) > 0.001);

  // C5 filters do fail, so a cap of 2n forces restarts.
  const auto c5 = coloring_instance(cycle_graph(5), 3, full_lists(5, 3));
  cfg.max_iterations = 10;
  const auto batch = sample_batch(c5, cfg, 60000, 1);
  std::uint64_t restarts = 0;
  for (auto a : batch.attempts) restarts += a - 1;
  CHECK(restarts > 1000);
  CHECK(gof_p_value(c5, batch.samples) > 0.001);
}

TEST_CASE("iteration count has a geometric tail") {
  const auto sys = coloring_instance(cycle_graph(6), 3, full_lists(6, 3));
  const auto batch = sample_batch(sys, config(1, 5), 20000, 1);
  std::vector<double> tail(6, 0);
  for (const auto& s : batch.stats)
    for (std::size_t k = 0; k < tail.size(); ++k)
      if (s.iterations >= (k + 1) * 6) tail[k] += 1;
  for (std::size_t k = 1; k < tail.size(); ++k)
    if (tail[k] > 50) CHECK(tail[k] / tail[k - 1] < 0.9);
  CHECK(tail[0] > 0);
}

TEST_CASE("golden suite exactness") {
  std::uint64_t seed = 500;
  for (const auto& c : golden::suite()) {
    for (unsigned ell : c.ells) {
      const auto start = std::chrono::steady_clock::now();
      const auto batch = sample_batch(c.system, config(ell, ++seed), 100000, 1);
      const double p = gof_p_value(c.system, batch.samples);
      const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
      MESSAGE(c.name, " ell=", ell, " p=", p, " s=", secs.count());
      CHECK(p > 0.001);
    }
  }
}
