#include "pgibbs/dynamic.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "pgibbs/spin_system.hpp"

namespace pgibbs {

template <class S>
SpinSystemT<S> apply_update(const SpinSystemT<S>& sys, const UpdateBatch<S>& upd) {
  const Graph& g = sys.graph();
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<S>> b(n);
  for (Vertex v = 0; v < n; ++v) {
    const auto w = sys.vertex_weights(v);
    b[v].assign(w.begin(), w.end());
  }
  std::vector<std::uint8_t> seen(n, 0);
  for (const auto& vu : upd.vertices) {
    g.check_vertex(vu.v);
    if (seen[vu.v]) throw InvalidInput("vertex " + std::to_string(vu.v) + " updated twice in one batch");
    seen[vu.v] = 1;
    if (vu.b.size() != sys.q()) throw InvalidInput("vertex update must give q weights");
    b[vu.v] = vu.b;
  }

  std::map<Edge, WeightMatrix<S>> matrices;
  for (EdgeId e = 0; e < g.num_edges(); ++e) matrices.emplace(g.edge(e), sys.edge_weights(e));
  std::vector<Edge> touched;
  for (const auto& eu : upd.edges) {
    g.check_vertex(eu.edge.u);
    g.check_vertex(eu.edge.v);
    if (eu.edge.u == eu.edge.v) throw SelfLoop("self-loop at vertex " + std::to_string(eu.edge.u));
    const Edge e{std::min(eu.edge.u, eu.edge.v), std::max(eu.edge.u, eu.edge.v)};
    if (std::find(touched.begin(), touched.end(), e) != touched.end())
      throw DuplicateEdge("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} updated twice in one batch");
    touched.push_back(e);
    if (eu.matrix.q() != sys.q()) throw InvalidInput("edge update matrix must be q x q");
    matrices.insert_or_assign(e, eu.matrix);
  }

  std::vector<Edge> edges;
  std::vector<WeightMatrix<S>> a;
  for (auto& [e, m] : matrices) {
    edges.push_back(e);
    a.push_back(m);
  }
  return SpinSystemT<S>(Graph(n, std::move(edges)), sys.q(), std::move(b), std::move(a));
}

template <class S>
std::vector<Vertex> update_support(const UpdateBatch<S>& upd) {
  std::vector<Vertex> d;
  for (const auto& vu : upd.vertices) d.push_back(vu.v);
  for (const auto& eu : upd.edges) {
    d.push_back(eu.edge.u);
    d.push_back(eu.edge.v);
  }
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

template <class S>
void greedy_repair(const SpinSystemT<S>& sys, std::span<const Vertex> d, Configuration& x, RepairAccess* access) {
  const Graph& g = sys.graph();
  auto in_d = [&](Vertex w) { return std::binary_search(d.begin(), d.end(), w); };
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vertex v = d[i];
    const auto nbrs = g.neighbors(v);
    const auto edges = g.incident_edges(v);
    Spin chosen = kUnassigned;
    for (Spin a = 0; a < sys.q() && chosen == kUnassigned; ++a) {
      if (sys.b(v, a) == 0) continue;
      bool ok = true;
      for (std::size_t t = 0; t < nbrs.size() && ok; ++t) {
        const Vertex w = nbrs[t];
        // Members of D not yet repaired carry stale values and are skipped.
        if (in_d(w) && w > v) continue;
        if (access) access->reads.push_back(w);
        ok = sys.edge_weights(edges[t])(a, x[w]) != 0;
      }
      if (ok) chosen = a;
    }
    if (chosen == kUnassigned) throw InfeasibleGreedyStep(v);
    x[v] = chosen;
    if (access) access->writes.push_back(v);
  }
}

template <class S>
std::vector<Vertex> repair_region(const SpinSystemT<S>& sys, std::span<const Vertex> d, Configuration& x,
                                  RepairAccess* access) {
  std::vector<Vertex> region(d.begin(), d.end());
  const Configuration original = x;
  for (;;) {
    try {
      greedy_repair(sys, region, x, access);
      return region;
    } catch (const InfeasibleGreedyStep&) {
      const auto bd = boundary(sys.graph(), region);
      if (bd.empty()) throw;
      x = original;
      region.insert(region.end(), bd.begin(), bd.end());
      std::sort(region.begin(), region.end());
    }
  }
}

template <class S>
Completed repair_sample(PerfectSampler<S>& sampler, Configuration x, std::span<const Vertex> d, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const SpinSystemT<S>& sys = sampler.system();
  std::vector<Vertex> r = repair_region(sys, d, x);
  const auto bd = boundary(sys.graph(), r);
  r.insert(r.end(), bd.begin(), bd.end());
  RepairState state = sampler.make_state(std::move(x), r);
  while (!state.r.empty()) sampler.step(state, rng);
  state.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return Completed{std::move(state.x), std::move(state.stats)};
}

template <class S>
DynamicOutcome<S> dynamic_sample(const SpinSystemT<S>& sys, Configuration x, const UpdateBatch<S>& upd,
                                 const SamplerConfig& cfg, Rng& rng) {
  if (x.size() != sys.num_vertices()) throw InvalidInput("configuration size does not match the graph");
  DynamicOutcome<S> out{apply_update(sys, upd), {}, {}};
  PerfectSampler<S> sampler(out.system, cfg);
  const auto d = update_support(upd);
  Completed done = repair_sample(sampler, std::move(x), d, rng);
  out.sample = std::move(done.sample);
  out.stats = std::move(done.stats);
  return out;
}

template <class S>
DynamicSession<S>::DynamicSession(SpinSystemT<S> sys, SamplerConfig cfg, Rng rng)
    : sys_(std::move(sys)), cfg_(std::move(cfg)), rng_(rng) {
  PerfectSampler<S> sampler(sys_, cfg_);
  for (;;) {
    RunResult result = sampler.run(rng_);
    if (auto* done = std::get_if<Completed>(&result)) {
      x_ = std::move(done->sample);
      break;
    }
  }
}

template <class S>
RunStats DynamicSession<S>::apply(const UpdateBatch<S>& upd) {
  auto out = dynamic_sample(sys_, std::move(x_), upd, cfg_, rng_);
  sys_ = std::move(out.system);
  x_ = std::move(out.sample);
  return out.stats;
}

#define PGIBBS_INSTANTIATE(S)                                                                       \
  template SpinSystemT<S> apply_update(const SpinSystemT<S>&, const UpdateBatch<S>&);               \
  template std::vector<Vertex> update_support(const UpdateBatch<S>&);                               \
  template void greedy_repair(const SpinSystemT<S>&, std::span<const Vertex>, Configuration&,       \
                              RepairAccess*);                                                       \
  template std::vector<Vertex> repair_region(const SpinSystemT<S>&, std::span<const Vertex>,         \
                                             Configuration&, RepairAccess*);                         \
  template Completed repair_sample(PerfectSampler<S>&, Configuration, std::span<const Vertex>, Rng&); \
  template DynamicOutcome<S> dynamic_sample(const SpinSystemT<S>&, Configuration,                   \
                                            const UpdateBatch<S>&, const SamplerConfig&, Rng&);     \
  template class DynamicSession<S>;

PGIBBS_INSTANTIATE(double)
PGIBBS_INSTANTIATE(Rational)

}  // namespace pgibbs
