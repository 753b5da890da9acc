#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pgibbs/graph.hpp"
#include "pgibbs/random.hpp"
#include "pgibbs/spin_system.hpp"

namespace pgibbs {

/// Explicit probability vector over an enumerated outcome set.
template <class Outcome, class S>
struct DiscreteDistribution {
  std::vector<Outcome> outcomes;
  std::vector<S> probs;

  std::size_t size() const noexcept { return outcomes.size(); }
};

template <class S>
using SpinDistribution = DiscreteDistribution<Spin, S>;
template <class S>
using ConfigDistribution = DiscreteDistribution<Configuration, S>;

/// The instance induced on G[B u boundary(B)] together with the map from
/// local to global vertex indices (to_global is sorted, so local order
/// follows global order).
template <class S>
struct RestrictedSystem {
  SpinSystemT<S> system;
  std::vector<Vertex> to_global;
};

template <class S>
RestrictedSystem<S> restricted_system(const SpinSystemT<S>& sys, std::span<const Vertex> block);

// Marginal law of v under mu^sigma, enumerating only the connected region of
// unassigned vertices containing v. Throws ZeroConditionalPartition when
// that region's partition function is zero; other regions are not examined.
template <class S>
SpinDistribution<S> marginal(const SpinSystemT<S>& sys, Vertex v, const PartialConfiguration& sigma,
                             const EnumerationCap& cap = {});

// X_B ~ mu_B^{boundary}. `boundary` must assign every vertex of boundary(B);
// other assigned vertices are ignored. Returns the spins of B in ascending
// vertex order.
template <class S>
std::vector<Spin> sample_block(const SpinSystemT<S>& sys, std::span<const Vertex> block,
                               const PartialConfiguration& boundary, Rng& rng,
                               const EnumerationCap& cap = {});

// Block of a sampler step: (ball(u, radius) \ R) u {u}, sorted.
std::vector<Vertex> step_block(const Graph& g, std::span<const Vertex> r, Vertex u, unsigned radius);

// Minimum of mu_u^sigma(X_u) over sigma on boundary(B) agreeing with X on R.
// R is sorted and contains u.
template <class S>
S mu_min(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, const EnumerationCap& cap = {});

// Marginal at the boundary that agrees with X on R and holds reference_spin
// elsewhere, times (1 - 1/(5 m)) with m = |sphere(u, radius + 1)| (factor 1
// when m = 0).
template <class S>
S mu_low(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, Spin reference_spin = 0, const EnumerationCap& cap = {});

template <class S>
S mu_low_slack(std::size_t sphere_size);

// Exact Gibbs distribution over the support, outcomes in lexicographic order.
template <class S>
ConfigDistribution<S> brute_force_distribution(const SpinSystemT<S>& sys, const EnumerationCap& cap = {});

}  // namespace pgibbs
