#include "pgibbs/local_inference.hpp"

#include <algorithm>

#include "pgibbs/block.hpp"
#include "pgibbs/detail/enumerate.hpp"

namespace pgibbs {

namespace {

void check_configuration(const Graph& g, std::size_t size, const char* what) {
  if (size != g.num_vertices())
    throw InvalidInput(std::string(what) + " has " + std::to_string(size) + " entries, graph has " +
                       std::to_string(g.num_vertices()) + " vertices");
}

void check_sorted_set(const Graph& g, std::span<const Vertex> set, const char* what) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    g.check_vertex(set[i]);
    if (i > 0 && set[i - 1] >= set[i])
      throw InvalidInput(std::string(what) + " must be sorted without repetitions");
  }
}

std::vector<std::uint8_t> membership(std::size_t n, std::span<const Vertex> set) {
  std::vector<std::uint8_t> m(n, 0);
  for (Vertex v : set) m[v] = 1;
  return m;
}

}  // namespace

template <class S>
RestrictedSystem<S> restricted_system(const SpinSystemT<S>& sys, std::span<const Vertex> block) {
  const Graph& g = sys.graph();
  if (block.empty()) throw InvalidInput("restricted_system needs a nonempty block");
  check_sorted_set(g, block, "block");
  RestrictedSystem<S> out;
  const auto bd = boundary(g, block);
  std::merge(block.begin(), block.end(), bd.begin(), bd.end(), std::back_inserter(out.to_global));
  const auto& keep = out.to_global;
  auto local = [&](Vertex v) -> std::int64_t {
    const auto it = std::lower_bound(keep.begin(), keep.end(), v);
    return it != keep.end() && *it == v ? it - keep.begin() : -1;
  };

  std::vector<std::vector<S>> b;
  for (Vertex v : keep) {
    const auto w = sys.vertex_weights(v);
    b.emplace_back(w.begin(), w.end());
  }
  std::vector<Edge> edges;
  std::vector<WeightMatrix<S>> matrices;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto lu = local(g.edge(e).u);
    const auto lv = local(g.edge(e).v);
    if (lu < 0 || lv < 0) continue;
    edges.push_back({static_cast<Vertex>(lu), static_cast<Vertex>(lv)});
    matrices.push_back(sys.edge_weights(e));
  }
  // Edges are visited in sorted global order, which maps to sorted local
  // order, so matrices line up with the local edge ids.
  out.system = SpinSystemT<S>(Graph(keep.size(), std::move(edges)), sys.q(), std::move(b), std::move(matrices));
  return out;
}

template <class S>
SpinDistribution<S> marginal(const SpinSystemT<S>& sys, Vertex v, const PartialConfiguration& sigma,
                             const EnumerationCap& cap) {
  const Graph& g = sys.graph();
  g.check_vertex(v);
  check_configuration(g, sigma.num_vertices(), "conditioning");
  if (sigma.assigned(v)) throw InvalidInput("marginal vertex must lie outside the conditioned set");

  // Connected region of unassigned vertices around v.
  std::vector<std::uint8_t> seen(g.num_vertices(), 0);
  std::vector<Vertex> region{v};
  seen[v] = 1;
  for (std::size_t head = 0; head < region.size(); ++head)
    for (Vertex w : g.neighbors(region[head]))
      if (!seen[w] && !sigma.assigned(w)) {
        seen[w] = 1;
        region.push_back(w);
      }
  std::sort(region.begin(), region.end());
  checked_state_count(sys.q(), region.size(), cap, "marginal enumeration");

  std::vector<Spin> spins(sigma.dense().begin(), sigma.dense().end());
  std::vector<S> acc(sys.q(), S(0));
  detail::FreeEnumerator<S> walk(sys, spins, region);
  walk.run([&](const S& w) { acc[spins[v]] += w; }, true);
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
std::vector<Spin> sample_block(const SpinSystemT<S>& sys, std::span<const Vertex> block,
                               const PartialConfiguration& bnd, Rng& rng, const EnumerationCap& cap) {
  const Graph& g = sys.graph();
  if (block.empty()) throw InvalidInput("sample_block needs a nonempty block");
  check_sorted_set(g, block, "block");
  check_configuration(g, bnd.num_vertices(), "boundary configuration");
  Neighborhood nb(g);
  BlockEngine<S> engine(sys, cap);
  engine.assign_block(nb, block, block.front());
  std::vector<Spin> spins(engine.boundary().size());
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const Vertex w = engine.boundary()[i];
    if (!bnd.assigned(w)) throw InvalidInput("boundary vertex " + std::to_string(w) + " is unassigned");
    spins[i] = bnd[w];
  }
  std::vector<Spin> out;
  engine.sample(spins, rng, out);
  return out;
}

std::vector<Vertex> step_block(const Graph& g, std::span<const Vertex> r, Vertex u, unsigned radius) {
  std::vector<Vertex> out;
  for (Vertex x : ball(g, u, radius))
    if (x == u || !std::binary_search(r.begin(), r.end(), x)) out.push_back(x);
  return out;
}

namespace {

template <class S>
void prepare_step(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x) {
  const Graph& g = sys.graph();
  check_sorted_set(g, r, "R");
  g.check_vertex(u);
  check_configuration(g, x.size(), "configuration");
  if (!std::binary_search(r.begin(), r.end(), u)) throw InvalidInput("u must be a member of R");
}

}  // namespace

template <class S>
S mu_min(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, const EnumerationCap& cap) {
  prepare_step(sys, r, u, x);
  Neighborhood nb(sys.graph());
  BlockEngine<S> engine(sys, cap);
  const auto in_r = membership(sys.num_vertices(), r);
  engine.assign(nb, u, radius, in_r);
  std::vector<Spin> spins;
  engine.gather_boundary(x, spins);
  return engine.mu_min(spins, x[u]);
}

template <class S>
S mu_low_slack(std::size_t sphere_size) {
  if (sphere_size == 0) return S(1);
  return S(1) - S(1) / S(5 * static_cast<long long>(sphere_size));
}

template <class S>
S mu_low(const SpinSystemT<S>& sys, std::span<const Vertex> r, Vertex u, std::span<const Spin> x,
         unsigned radius, Spin reference_spin, const EnumerationCap& cap) {
  prepare_step(sys, r, u, x);
  if (reference_spin >= sys.q()) throw InvalidInput("reference spin out of range");
  Neighborhood nb(sys.graph());
  BlockEngine<S> engine(sys, cap);
  const auto in_r = membership(sys.num_vertices(), r);
  engine.assign(nb, u, radius, in_r);
  std::vector<Spin> spins;
  engine.gather_boundary(x, spins);
  for (std::size_t i = 0; i < spins.size(); ++i)
    if (!engine.boundary_fixed(i)) spins[i] = reference_spin;
  return engine.marginal(spins, x[u]) * mu_low_slack<S>(sphere(sys.graph(), u, radius + 1).size());
}

template <class S>
ConfigDistribution<S> brute_force_distribution(const SpinSystemT<S>& sys, const EnumerationCap& cap) {
  const std::size_t n = sys.num_vertices();
  checked_state_count(sys.q(), n, cap, "brute-force distribution");
  std::vector<Vertex> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
  std::vector<Spin> spins(n, kUnassigned);
  ConfigDistribution<S> out;
  S z = 0;
  detail::FreeEnumerator<S> walk(sys, spins, all);
  walk.run(
      [&](const S& w) {
        out.outcomes.push_back(spins);
        out.probs.push_back(w);
        z += w;
      },
      true);
  if (z == 0) throw ZeroPartition("partition function is zero");
  for (S& p : out.probs) p /= z;
  return out;
}

#define PGIBBS_INSTANTIATE(S)                                                                          \
  template RestrictedSystem<S> restricted_system(const SpinSystemT<S>&, std::span<const Vertex>);      \
  template SpinDistribution<S> marginal(const SpinSystemT<S>&, Vertex, const PartialConfiguration&,    \
                                        const EnumerationCap&);                                        \
  template std::vector<Spin> sample_block(const SpinSystemT<S>&, std::span<const Vertex>,              \
                                          const PartialConfiguration&, Rng&, const EnumerationCap&);   \
  template S mu_min(const SpinSystemT<S>&, std::span<const Vertex>, Vertex, std::span<const Spin>,     \
                    unsigned, const EnumerationCap&);                                                  \
  template S mu_low(const SpinSystemT<S>&, std::span<const Vertex>, Vertex, std::span<const Spin>,     \
                    unsigned, Spin, const EnumerationCap&);                                            \
  template S mu_low_slack<S>(std::size_t);                                                             \
  template ConfigDistribution<S> brute_force_distribution(const SpinSystemT<S>&, const EnumerationCap&);

PGIBBS_INSTANTIATE(double)
PGIBBS_INSTANTIATE(Rational)

}  // namespace pgibbs
