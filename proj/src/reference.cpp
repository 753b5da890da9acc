#include "pgibbs/reference.hpp"

#include <algorithm>

#include "pgibbs/detail/enumerate.hpp"

namespace pgibbs::reference {

template <class S>
SpinDistribution<S> global_marginal(const SpinSystemT<S>& sys, Vertex v, const PartialConfiguration& sigma,
                                    const EnumerationCap& cap) {
  sys.graph().check_vertex(v);
  if (sigma.assigned(v)) throw InvalidInput("marginal vertex must lie outside the conditioned set");
  std::vector<Vertex> free;
  for (Vertex w = 0; w < sys.num_vertices(); ++w)
    if (!sigma.assigned(w)) free.push_back(w);
  checked_state_count(sys.q(), free.size(), cap, "global marginal enumeration");
  std::vector<Spin> spins(sigma.dense().begin(), sigma.dense().end());
  std::vector<S> acc(sys.q(), S(0));
  detail::FreeEnumerator<S> walk(sys, spins, free);
  walk.run([&](const S& w) { acc[spins[v]] += w; });
  S z = 0;
  for (const S& a : acc) z += a;
  if (z == 0) throw ZeroConditionalPartition("conditional partition function is zero");
  SpinDistribution<S> out;
  for (Spin a = 0; a < sys.q(); ++a) {
    out.outcomes.push_back(a);
    out.probs.push_back(acc[a] / z);
  }
  return out;
}

template <class S>
S mu_min(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, const EnumerationCap& cap) {
  const Graph& g = sys.graph();
  if (!std::binary_search(r.begin(), r.end(), u)) throw InvalidInput("u must be a member of R");
  const auto block = step_block(g, r, u, radius);
  const auto bd = boundary(g, block);
  std::vector<Vertex> free;
  PartialConfiguration sigma(g.num_vertices());
  for (Vertex w : bd) {
    if (std::binary_search(r.begin(), r.end(), w))
      sigma.assign(w, x[w]);
    else
      free.push_back(w);
  }
  checked_state_count(sys.q(), free.size(), cap, "mu_min boundary enumeration");
  for (Vertex w : free) sigma.assign(w, 0);

  S best = 1;
  for (;;) {
    const S p = marginal(sys, u, sigma, cap).probs[x[u]];
    if (p < best) best = p;
    // Odometer, last free vertex fastest.
    std::size_t i = free.size();
    while (i > 0) {
      const Vertex w = free[i - 1];
      if (sigma[w] + 1 < sys.q()) {
        sigma.assign(w, sigma[w] + 1);
        break;
      }
      sigma.assign(w, 0);
      --i;
    }
    if (i == 0) break;
  }
  return best;
}

template <class S>
std::vector<Spin> sample_block(const SpinSystemT<S>& sys, std::span<const Vertex> block,
                               const PartialConfiguration& bnd, Rng& rng, const EnumerationCap& cap) {
  const auto restricted = restricted_system(sys, block);
  const auto& local = restricted.system;
  const auto& to_global = restricted.to_global;
  checked_state_count(sys.q(), block.size(), cap, "block enumeration");

  std::vector<Spin> spins(to_global.size(), kUnassigned);
  std::vector<Vertex> free;
  for (Vertex i = 0; i < to_global.size(); ++i) {
    if (std::binary_search(block.begin(), block.end(), to_global[i])) {
      free.push_back(i);
    } else {
      if (!bnd.assigned(to_global[i])) throw InvalidInput("boundary vertex is unassigned");
      spins[i] = bnd[to_global[i]];
    }
  }
  std::vector<S> weights;
  detail::FreeEnumerator<S> walk(local, spins, free);
  walk.run([&](const S& w) { weights.push_back(w); });
  std::size_t index = UniformDraw<S>(rng).choose(weights);

  std::vector<Spin> out(block.size());
  for (std::size_t i = block.size(); i-- > 0;) {
    out[i] = static_cast<Spin>(index % sys.q());
    index /= sys.q();
  }
  return out;
}

#define PGIBBS_INSTANTIATE(S)                                                                              \
  template SpinDistribution<S> global_marginal(const SpinSystemT<S>&, Vertex, const PartialConfiguration&, \
                                               const EnumerationCap&);                                     \
  template S mu_min(const SpinSystemT<S>&, std::span<const Vertex>, Vertex, std::span<const Spin>,         \
                    unsigned, const EnumerationCap&);                                                      \
  template std::vector<Spin> sample_block(const SpinSystemT<S>&, std::span<const Vertex>,                  \
                                          const PartialConfiguration&, Rng&, const EnumerationCap&);

PGIBBS_INSTANTIATE(double)
PGIBBS_INSTANTIATE(Rational)

}  // namespace pgibbs::reference
