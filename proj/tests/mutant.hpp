#pragma once

// The block sampler with the Bayes filter removed: every step resamples the
// block and drops u from R. Its output law differs from the Gibbs
// distribution whenever some filter probability is below 1.

#include <vector>

#include "pgibbs/block.hpp"
#include "pgibbs/random.hpp"
#include "pgibbs/sampler.hpp"
#include "pgibbs/vertex_set.hpp"

namespace mutant {

using namespace pgibbs;

template <class S>
Configuration filterless_run(const SpinSystemT<S>& sys, unsigned ell, Rng& rng) {
  Neighborhood nb(sys.graph());
  BlockEngine<S> engine(sys);
  Configuration x = greedy_feasible(sys);
  VertexSet r = VertexSet::full(sys.num_vertices());
  std::vector<Spin> boundary, block;
  while (!r.empty()) {
    const Vertex u = r.kth(uniform_index<S>(r.size(), rng));
    engine.assign(nb, u, ell, r.membership());
    engine.gather_boundary(x, boundary);
    engine.sample(boundary, rng, block);
    const auto b = engine.block();
    for (std::size_t i = 0; i < b.size(); ++i) x[b[i]] = block[i];
    r.erase(u);
  }
  return x;
}

inline std::vector<Configuration> filterless_batch(const SpinSystem& sys, const SamplerConfig& cfg,
                                                   std::size_t trials, int) {
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    out.push_back(filterless_run(sys, cfg.ell, rng));
  }
  return out;
}

}  // namespace mutant
