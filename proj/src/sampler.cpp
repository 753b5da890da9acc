#include "pgibbs/sampler.hpp"

#include <cassert>
#include <chrono>

#include <boost/container_hash/hash.hpp>

#include "pgibbs/local_inference.hpp"

namespace pgibbs {

template <class S>
std::size_t PerfectSampler<S>::KeyHash::operator()(const std::vector<std::uint32_t>& key) const noexcept {
  return boost::hash_range(key.begin(), key.end());
}

template <class S>
PerfectSampler<S>::PerfectSampler(const SpinSystemT<S>& sys, SamplerConfig cfg)
    : sys_(&sys), cfg_(std::move(cfg)), nb_(sys.graph()), engine_(sys, cfg_.cap) {
  if (cfg_.ell == 0 && !sys.is_soft())
    throw HardConstraintRejected("block radius 0 requires a soft system (all weights positive)");
  if (cfg_.reference_spin >= sys.q()) throw InvalidInput("reference spin out of range");
}

template <class S>
RepairState PerfectSampler<S>::init() const {
  RepairState state;
  state.x = greedy_feasible(*sys_);
  state.r = VertexSet::full(sys_->num_vertices());
  return state;
}

template <class S>
RepairState PerfectSampler<S>::make_state(Configuration x, std::span<const Vertex> r) const {
  if (x.size() != sys_->num_vertices()) throw InvalidInput("configuration size does not match the graph");
  RepairState state;
  state.x = std::move(x);
  state.r = VertexSet(sys_->num_vertices());
  for (Vertex v : r) {
    sys_->graph().check_vertex(v);
    state.r.insert(v);
  }
  return state;
}

template <class S>
S PerfectSampler<S>::filter_numerator(const RepairState& state, Vertex u) {
  const Spin xu = state.x[u];
  if (cfg_.filter == FilterMode::MuLow) {
    relabeled_ = boundary_spins_;
    for (std::size_t i = 0; i < relabeled_.size(); ++i)
      if (!engine_.boundary_fixed(i)) relabeled_[i] = cfg_.reference_spin;
    nb_.sphere(u, cfg_.ell + 1, sphere_);
    return engine_.marginal(relabeled_, xu) * mu_low_slack<S>(sphere_.size());
  }
  Spin value = 0;
  engine_.canonical_key(boundary_spins_, xu, key_, relabeled_, value);
  if (cfg_.memoize) {
    if (auto it = memo_.find(key_); it != memo_.end()) return it->second;
  }
  S m = engine_.mu_min(relabeled_, value);
  if (cfg_.memoize) {
    if (memo_.size() >= cfg_.memo_limit) memo_.clear();
    memo_.emplace(key_, m);
  }
  return m;
}

template <class S>
bool PerfectSampler<S>::locally_feasible(std::span<const Spin> x) const {
  const Graph& g = sys_->graph();
  for (Vertex v : engine_.block()) {
    if (sys_->b(v, x[v]) == 0) return false;
    const auto nbrs = g.neighbors(v);
    const auto edges = g.incident_edges(v);
    for (std::size_t t = 0; t < nbrs.size(); ++t)
      if (sys_->edge_weights(edges[t])(x[v], x[nbrs[t]]) == 0) return false;
  }
  return true;
}

template <class S>
StepRecord<S> PerfectSampler<S>::step(RepairState& state, Rng& rng) {
  if (state.r.empty()) throw InvalidInput("step called with R empty");
  StepRecord<S> rec;
  const Vertex u = state.r.kth(uniform_index<S>(state.r.size(), rng));
  rec.u = u;
  engine_.assign(nb_, u, cfg_.ell, state.r.membership());
  engine_.gather_boundary(state.x, boundary_spins_);
  rec.marginal = engine_.marginal(boundary_spins_, state.x[u]);
  rec.mu_min = filter_numerator(state, u);
  rec.probability = rec.mu_min / rec.marginal;
  if constexpr (std::is_same_v<S, double>) {
    if (rec.probability > 1.0 + 1e-12) ++state.stats.filter_overflows;
  } else {
    if (rec.probability > 1) ++state.stats.filter_overflows;
  }
  if (rec.probability > 1) rec.probability = 1;

  ++state.stats.iterations;
  rec.accepted = bernoulli(rec.probability, rng);
  if (rec.accepted) {
    engine_.sample(boundary_spins_, rng, block_spins_);
    const auto block = engine_.block();
    for (std::size_t i = 0; i < block.size(); ++i) state.x[block[i]] = block_spins_[i];
    state.r.erase(u);
    ++state.stats.filter_successes;
    if (!locally_feasible(state.x)) ++state.stats.feasibility_violations;
    assert(locally_feasible(state.x));
  } else {
    for (Vertex w : engine_.boundary())
      if (state.r.insert(w)) ++rec.added;
    state.stats.boundary_added += rec.added;
    ++state.stats.filter_failures;
  }
  if (cfg_.record_trace) state.stats.r_trace.push_back(static_cast<std::uint32_t>(state.r.size()));
  return rec;
}

template <class S>
RunResult PerfectSampler<S>::resume(RepairState& state, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t begin = state.stats.iterations;
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  while (!state.r.empty()) {
    if (cfg_.max_iterations && state.stats.iterations - begin >= *cfg_.max_iterations) {
      state.stats.wall_ms += elapsed();
      return Interrupted{state.stats};
    }
    step(state, rng);
  }
  state.stats.wall_ms += elapsed();
  return Completed{state.x, state.stats};
}

template <class S>
RunResult PerfectSampler<S>::run(Rng& rng) {
  RepairState state = init();
  return resume(state, rng);
}

template <class S>
RunResult PerfectSampler<S>::run() {
  Rng rng(cfg_.seed);
  return run(rng);
}

template <class S>
RunResult run_single_site(const SpinSystemT<S>& sys, std::uint64_t seed) {
  if (!sys.is_soft()) throw HardConstraintRejected("single-site sampler requires all weights positive");
  SamplerConfig cfg;
  cfg.ell = 0;
  cfg.seed = seed;
  PerfectSampler<S> sampler(sys, cfg);
  return sampler.run();
}

template class PerfectSampler<double>;
template class PerfectSampler<Rational>;
template RunResult run_single_site(const SpinSystemT<double>&, std::uint64_t);
template RunResult run_single_site(const SpinSystemT<Rational>&, std::uint64_t);

}  // namespace pgibbs
