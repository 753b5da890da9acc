#pragma once

// Straightforward implementations of the local computations, kept as test
// oracles and benchmark baselines for the block engine.

#include <span>
#include <vector>

#include "pgibbs/local_inference.hpp"

namespace pgibbs::reference {

// Marginal of v under mu^sigma by enumerating every unassigned vertex.
template <class S>
SpinDistribution<S> global_marginal(const SpinSystemT<S>& sys, Vertex v, const PartialConfiguration& sigma,
                                    const EnumerationCap& cap = {});

// mu_min by evaluating the marginal separately for each boundary assignment,
// free boundary vertices enumerated lexicographically.
template <class S>
S mu_min(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, const EnumerationCap& cap = {});

// Block sample by listing all q^|B| weights on the restricted system in
// lexicographic order and inverting one uniform over the flat list.
template <class S>
std::vector<Spin> sample_block(const SpinSystemT<S>& sys, std::span<const Vertex> block,
                               const PartialConfiguration& boundary, Rng& rng,
                               const EnumerationCap& cap = {});

}  // namespace pgibbs::reference
