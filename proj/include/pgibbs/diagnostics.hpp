#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "pgibbs/local_inference.hpp"
#include "pgibbs/sampler.hpp"

namespace pgibbs {

// Half the L1 distance. Both distributions must list the same outcomes
// (in any order); otherwise OutcomeMismatch.
template <class Outcome, class S>
double tv_distance(const DiscreteDistribution<Outcome, S>& p, const DiscreteDistribution<Outcome, S>& r) {
  if (p.outcomes.size() != r.outcomes.size()) throw OutcomeMismatch("distributions have different outcome counts");
  std::map<Outcome, double> other;
  for (std::size_t i = 0; i < r.size(); ++i) other.emplace(r.outcomes[i], to_double(r.probs[i]));
  if (other.size() != r.size()) throw OutcomeMismatch("repeated outcome");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto it = other.find(p.outcomes[i]);
    if (it == other.end()) throw OutcomeMismatch("outcome sets differ");
    sum += std::abs(to_double(p.probs[i]) - it->second);
  }
  return 0.5 * sum;
}

// Tally of samples against the outcomes of `expected`.
struct Tally {
  std::vector<std::uint64_t> counts;  // aligned with expected.outcomes
  std::uint64_t out_of_support = 0;
  std::uint64_t total = 0;
};

template <class Outcome, class S>
Tally tally(std::span<const Outcome> samples, const DiscreteDistribution<Outcome, S>& expected) {
  std::map<Outcome, std::size_t> index;
  for (std::size_t i = 0; i < expected.size(); ++i) index.emplace(expected.outcomes[i], i);
  Tally t;
  t.counts.assign(expected.size(), 0);
  for (const Outcome& s : samples) {
    const auto it = index.find(s);
    if (it == index.end())
      ++t.out_of_support;
    else
      ++t.counts[it->second];
  }
  t.total = samples.size();
  return t;
}

// Empirical distribution over the outcomes of `expected` (for TV distance).
template <class Outcome, class S>
DiscreteDistribution<Outcome, double> empirical(const Tally& t, const DiscreteDistribution<Outcome, S>& expected) {
  DiscreteDistribution<Outcome, double> out;
  out.outcomes = expected.outcomes;
  for (std::uint64_t c : t.counts)
    out.probs.push_back(t.total ? static_cast<double>(c) / static_cast<double>(t.total) : 0.0);
  return out;
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;  // after pooling
};

// Pearson goodness of fit. Outcomes with expected count below 5 are pooled
// (smallest first) until every bin expects at least 5. Samples outside the
// support make the statistic infinite and p = 0. Throws TooFewSamples when
// fewer than two bins remain.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                               std::uint64_t out_of_support = 0);

template <class Outcome, class S>
ChiSquareResult chi_square_gof(const Tally& t, const DiscreteDistribution<Outcome, S>& expected) {
  std::vector<double> probs;
  for (const S& p : expected.probs) probs.push_back(to_double(p));
  return chi_square_gof(t.counts, probs, t.out_of_support);
}

struct SsmReport {
  Vertex v = 0;
  unsigned ell = 0;
  std::size_t sphere_size = 0;
  // 1 / (5 |S_ell(v)|); infinite when the sphere is empty.
  double threshold = 0.0;
  // max |mu^sigma(a) / mu^tau(a) - 1| over sigma, tau whose closest
  // disagreement is at distance ell; +inf when a zero meets a positive value.
  double ratio_bound = 0.0;
  // max 1 - min_tau mu^{sigma+tau}(a) / mu^sigma(a) over disjoint A, B with
  // dist(v, B) = ell.
  double weak_bound = 0.0;
  // Smallest positive marginal of v over all conditionings.
  double gamma = 1.0;
  bool ratio_ok() const { return ratio_bound <= threshold; }
  bool weak_ok() const { return weak_bound <= threshold; }
};

template <class S>
SsmReport ssm_ratio_probe(const SpinSystemT<S>& sys, Vertex v, unsigned ell, const EnumerationCap& cap = {});

// min over R, u in R and feasible X of mu_min(R, u, X); 0 means some step
// has a zero acceptance bound.
template <class S>
S gamma_probe(const SpinSystemT<S>& sys, unsigned ell, const EnumerationCap& cap = {});

struct BenchRow {
  std::size_t n = 0;
  std::size_t trials = 0;  // completed
  double mean_T = 0.0;
  double sd_T = 0.0;
  double mean_ms = 0.0;
  double sd_ms = 0.0;
  double T_over_n = 0.0;
  bool timed_out = false;
};

// Runs `trials` independent samples (seeds derived from cfg.seed) and
// summarizes T and wall time per run. Stops starting trials once
// budget_ms has elapsed and marks the row timed out.
template <class S>
BenchRow bench_instance(const SpinSystemT<S>& sys, const SamplerConfig& cfg, std::size_t trials, int jobs,
                        double budget_ms = std::numeric_limits<double>::infinity());

std::vector<BenchRow> bench_scaling(const std::function<SpinSystem(std::size_t)>& make, std::span<const std::size_t> sizes,
                                    std::size_t trials, const SamplerConfig& cfg, int jobs,
                                    double budget_ms = std::numeric_limits<double>::infinity());

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

// Sample mean and standard deviation (n - 1 denominator).
std::pair<double, double> mean_sd(std::span<const double> xs);

}  // namespace pgibbs
