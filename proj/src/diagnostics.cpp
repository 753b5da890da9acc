#include "pgibbs/diagnostics.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "pgibbs/batch.hpp"
#include "pgibbs/block.hpp"

namespace pgibbs {

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                               std::uint64_t out_of_support) {
  if (counts.size() != probs.size()) throw OutcomeMismatch("counts and probabilities differ in length");
  std::uint64_t n = out_of_support;
  for (std::uint64_t c : counts) n += c;
  if (n == 0) throw TooFewSamples("no samples");

  ChiSquareResult res;
  struct Bin {
    double expected;
    double observed;
  };
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] > 0.0)
      bins.push_back({probs[i] * static_cast<double>(n), static_cast<double>(counts[i])});
    else
      out_of_support += counts[i];
  }
  if (out_of_support > 0) {
    res.statistic = std::numeric_limits<double>::infinity();
    res.bins = bins.size();
    res.dof = bins.empty() ? 0 : bins.size() - 1;
    res.p_value = 0.0;
    return res;
  }

  auto by_expected = [](const Bin& a, const Bin& b) { return a.expected < b.expected; };
  std::stable_sort(bins.begin(), bins.end(), by_expected);
  while (bins.size() >= 2 && bins.front().expected < 5.0) {
    bins[1].expected += bins[0].expected;
    bins[1].observed += bins[0].observed;
    bins.erase(bins.begin());
    std::stable_sort(bins.begin(), bins.end(), by_expected);
  }
  if (bins.size() < 2) throw TooFewSamples("fewer than two bins with expected count >= 5");

  for (const Bin& b : bins) res.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  res.bins = bins.size();
  res.dof = bins.size() - 1;
  res.p_value = boost::math::gamma_q(static_cast<double>(res.dof) / 2.0, res.statistic / 2.0);
  return res;
}

namespace {

// Spins of the members of `mask` (ascending) encoded base q, first member
// most significant.
std::vector<Vertex> members_of(std::uint64_t mask, const std::vector<Vertex>& others) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < others.size(); ++i)
    if (mask >> i & 1) out.push_back(others[i]);
  return out;
}

void decode(std::uint64_t index, std::span<const Vertex> vs, std::size_t q, PartialConfiguration& sigma) {
  for (std::size_t i = vs.size(); i-- > 0;) {
    sigma.assign(vs[i], static_cast<Spin>(index % q));
    index /= q;
  }
}

std::uint64_t encode(const PartialConfiguration& sigma, std::span<const Vertex> vs, std::size_t q) {
  std::uint64_t index = 0;
  for (Vertex v : vs) index = index * q + sigma[v];
  return index;
}

}  // namespace

template <class S>
SsmReport ssm_ratio_probe(const SpinSystemT<S>& sys, Vertex v, unsigned ell, const EnumerationCap& cap) {
  const Graph& g = sys.graph();
  g.check_vertex(v);
  if (ell == 0) throw InvalidInput("SSM probe needs ell >= 1");
  const std::size_t n = g.num_vertices();
  const std::size_t q = sys.q();
  std::vector<Vertex> others;
  for (Vertex w = 0; w < n; ++w)
    if (w != v) others.push_back(w);
  checked_state_count(q * q + 1, others.size(), cap, "SSM probe");
  const auto dist = distances_from(g, v);

  SsmReport rep;
  rep.v = v;
  rep.ell = ell;
  rep.sphere_size = sphere(g, v, ell).size();
  rep.threshold = rep.sphere_size == 0 ? std::numeric_limits<double>::infinity()
                                       : 1.0 / (5.0 * static_cast<double>(rep.sphere_size));

  // marginals[mask][sigma index * q + a]
  const std::uint64_t masks = std::uint64_t{1} << others.size();
  std::vector<std::vector<S>> marginals(masks);
  PartialConfiguration sigma(n);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const auto lam = members_of(mask, others);
    const std::uint64_t count = checked_state_count(q, lam.size(), cap, "SSM probe");
    auto& table = marginals[mask];
    table.reserve(count * q);
    for (std::uint64_t i = 0; i < count; ++i) {
      decode(i, lam, q, sigma);
      const auto m = marginal(sys, v, sigma, cap);
      for (Spin a = 0; a < q; ++a) {
        table.push_back(m.probs[a]);
        if (m.probs[a] > 0) rep.gamma = std::min(rep.gamma, to_double(m.probs[a]));
      }
    }
    for (Vertex w : lam) sigma.clear(w);
  }

  PartialConfiguration tau(n);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const auto lam = members_of(mask, others);
    const std::uint64_t count = marginals[mask].size() / q;
    const auto& table = marginals[mask];

    // Ratio form over ordered pairs.
    for (std::uint64_t i = 0; i < count; ++i) {
      decode(i, lam, q, sigma);
      for (std::uint64_t j = 0; j < count; ++j) {
        if (i == j) continue;
        decode(j, lam, q, tau);
        std::uint32_t closest = UINT32_MAX;
        for (Vertex w : lam)
          if (sigma[w] != tau[w]) closest = std::min(closest, dist[w]);
        if (closest != ell) continue;
        for (Spin a = 0; a < q; ++a) {
          const S& ps = table[i * q + a];
          const S& pt = table[j * q + a];
          double r;
          if (pt == 0)
            r = ps == 0 ? 0.0 : std::numeric_limits<double>::infinity();
          else
            r = std::abs(to_double(S(ps / pt)) - 1.0);
          rep.ratio_bound = std::max(rep.ratio_bound, r);
        }
      }
    }

    // Weak form: B ranges over nonempty submasks of mask at distance ell.
    for (std::uint64_t bmask = mask; bmask != 0; bmask = (bmask - 1) & mask) {
      const auto bset = members_of(bmask, others);
      std::uint32_t closest = UINT32_MAX;
      for (Vertex w : bset) closest = std::min(closest, dist[w]);
      if (closest != ell) continue;
      const std::uint64_t amask = mask & ~bmask;
      const auto aset = members_of(amask, others);
      const auto& outer = marginals[amask];
      std::vector<std::optional<S>> lowest(outer.size());
      for (std::uint64_t i = 0; i < count; ++i) {
        decode(i, lam, q, sigma);
        const std::uint64_t ia = encode(sigma, aset, q);
        for (Spin a = 0; a < q; ++a) {
          auto& slot = lowest[ia * q + a];
          const S& p = table[i * q + a];
          if (!slot || p < *slot) slot = p;
        }
      }
      for (std::size_t k = 0; k < outer.size(); ++k) {
        if (outer[k] == 0) continue;
        rep.weak_bound = std::max(rep.weak_bound, 1.0 - to_double(S(*lowest[k] / outer[k])));
      }
    }
    for (Vertex w : lam) {
      sigma.clear(w);
      tau.clear(w);
    }
  }
  return rep;
}

template <class S>
S gamma_probe(const SpinSystemT<S>& sys, unsigned ell, const EnumerationCap& cap) {
  const std::size_t n = sys.num_vertices();
  if (n >= 63) throw EnumerationCapExceeded("gamma probe: too many vertices", cap.states);
  const auto support = brute_force_distribution(sys, cap).outcomes;
  const std::uint64_t masks = std::uint64_t{1} << n;
  if (masks > cap.states / std::max<std::size_t>(1, support.size()))
    throw EnumerationCapExceeded("gamma probe enumeration exceeds cap", cap.states);

  Neighborhood nb(sys.graph());
  BlockEngine<S> engine(sys, cap);
  std::optional<S> best;
  std::vector<std::uint8_t> in_r(n);
  std::vector<Spin> x(n, 0), spins;
  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    std::vector<Vertex> r;
    for (Vertex w = 0; w < n; ++w) {
      in_r[w] = mask >> w & 1;
      if (in_r[w]) r.push_back(w);
    }
    std::set<std::vector<Spin>> projections;
    for (const auto& cfg : support) {
      std::vector<Spin> p;
      for (Vertex w : r) p.push_back(cfg[w]);
      projections.insert(std::move(p));
    }
    for (Vertex u : r) {
      engine.assign(nb, u, ell, in_r);
      for (const auto& p : projections) {
        for (std::size_t i = 0; i < r.size(); ++i) x[r[i]] = p[i];
        engine.gather_boundary(x, spins);
        S m = engine.mu_min(spins, x[u]);
        if (!best || m < *best) best = std::move(m);
        if (*best == 0) return *best;
      }
    }
  }
  return best.value_or(S(1));
}

std::pair<double, double> mean_sd(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

template <class S>
BenchRow bench_instance(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials, int jobs,
                        double budget_ms) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> t(trials), ms(trials);
  std::vector<std::uint8_t> done(trials, 0);
  std::atomic<bool> out_of_time{false};
  parallel_trials(
      trials, jobs, [&] { return PerfectSampler<S>(sys, cfg); },
      [&](std::size_t i, PerfectSampler<S>& sampler) {
        const double elapsed =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > budget_ms) {
          out_of_time = true;
          return;
        }
        Rng rng(derive_seed(cfg.seed, i));
        for (;;) {
          RunResult result = sampler.run(rng);
          if (auto* c = std::get_if<Completed>(&result)) {
            t[i] = static_cast<double>(c->stats.iterations);
            ms[i] = c->stats.wall_ms;
            done[i] = 1;
            return;
          }
        }
      });
  std::vector<double> tt, mm;
  for (std::size_t i = 0; i < trials; ++i)
    if (done[i]) {
      tt.push_back(t[i]);
      mm.push_back(ms[i]);
    }
  BenchRow row;
  row.n = sys.num_vertices();
  row.trials = tt.size();
  std::tie(row.mean_T, row.sd_T) = mean_sd(tt);
  std::tie(row.mean_ms, row.sd_ms) = mean_sd(mm);
  row.T_over_n = row.n ? row.mean_T / static_cast<double>(row.n) : 0.0;
  row.timed_out = out_of_time;
  return row;
}

std::vector<BenchRow> bench_scaling(const std::function<SpinSystem(std::size_t)>& make,
                                    std::span<const std::size_t> sizes, std::size_t trials,
                                    const SamplerConfig& cfg, int jobs, double budget_ms) {
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    const SpinSystem sys = make(n);
    rows.push_back(bench_instance(sys, cfg, trials, jobs, budget_ms));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "n,trials,mean_T,sd_T,mean_ms,sd_ms,T_over_n\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.n, r.trials, r.mean_T, r.sd_T,
                  r.mean_ms, r.sd_ms, r.T_over_n);
    out << buf;
  }
}

template SsmReport ssm_ratio_probe(const SpinSystemT<double>&, Vertex, unsigned, const EnumerationCap&);
template SsmReport ssm_ratio_probe(const SpinSystemT<Rational>&, Vertex, unsigned, const EnumerationCap&);
template double gamma_probe(const SpinSystemT<double>&, unsigned, const EnumerationCap&);
template Rational gamma_probe(const SpinSystemT<Rational>&, unsigned, const EnumerationCap&);
template BenchRow bench_instance(const SpinSystemT<double>&, const SamplerConfig&, std::size_t, int, double);
template BenchRow bench_instance(const SpinSystemT<Rational>&, const SamplerConfig&, std::size_t, int, double);

}  // namespace pgibbs
