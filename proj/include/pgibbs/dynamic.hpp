#pragma once

#include <span>
#include <vector>

#include "pgibbs/sampler.hpp"

namespace pgibbs {

template <class S>
struct VertexUpdate {
  Vertex v = 0;
  std::vector<S> b;
};

// Replaces the matrix of an existing edge or adds a new edge.
template <class S>
struct EdgeUpdate {
  Edge edge;
  WeightMatrix<S> matrix;
};

template <class S>
struct UpdateBatch {
  std::vector<VertexUpdate<S>> vertices;
  std::vector<EdgeUpdate<S>> edges;

  bool empty() const noexcept { return vertices.empty() && edges.empty(); }
};

// The updated instance; `sys` is unchanged. Throws UnknownVertex, SelfLoop,
// DuplicateEdge (an edge listed twice in the batch) and InvalidInput (a
// vertex listed twice, malformed weights).
template <class S>
SpinSystemT<S> apply_update(const SpinSystemT<S>& sys, const UpdateBatch<S>& upd);

// D: updated vertices and endpoints of updated edges, sorted.
template <class S>
std::vector<Vertex> update_support(const UpdateBatch<S>& upd);

// Vertices whose spins the greedy repair looked at or changed.
struct RepairAccess {
  std::vector<Vertex> reads;
  std::vector<Vertex> writes;
};

// Rewrites X on D (ascending order, lowest admissible spin) so that every
// factor touching D is positive under `sys`. A vertex's spin is checked
// against neighbors in the boundary of D and against already repaired
// members of D. Throws InfeasibleGreedyStep.
template <class S>
void greedy_repair(const SpinSystemT<S>& sys, std::span<const Vertex> d, Configuration& x,
                   RepairAccess* access = nullptr);

// Greedy repair on D; while it fails, retries on D u boundary(D) from the
// original X. The region grown this way depends only on X inside it, so the
// conditional Gibbs property survives. Returns the repaired region; throws
// InfeasibleGreedyStep once the region stops growing.
template <class S>
std::vector<Vertex> repair_region(const SpinSystemT<S>& sys, std::span<const Vertex> d, Configuration& x,
                                  RepairAccess* access = nullptr);

template <class S>
struct DynamicOutcome {
  SpinSystemT<S> system;
  Configuration sample;
  RunStats stats;
};

// Repair against the already updated system sampler.system(): repair_region
// on D, then sampler steps from R = region u boundary(region) until R is
// empty. The sampler's max_iterations is ignored.
template <class S>
Completed repair_sample(PerfectSampler<S>& sampler, Configuration x, std::span<const Vertex> d, Rng& rng);

// X ~ mu_I in, X ~ mu_I' out, where I' = apply_update(sys, upd).
template <class S>
DynamicOutcome<S> dynamic_sample(const SpinSystemT<S>& sys, Configuration x, const UpdateBatch<S>& upd,
                                 const SamplerConfig& cfg, Rng& rng);

/// An instance with a maintained sample that follows updates.
template <class S>
class DynamicSession {
 public:
  DynamicSession(SpinSystemT<S> sys, SamplerConfig cfg, Rng rng);

  const SpinSystemT<S>& system() const noexcept { return sys_; }
  const Configuration& sample() const noexcept { return x_; }

  // Applies the update and repairs the sample; returns the repair stats.
  RunStats apply(const UpdateBatch<S>& upd);

 private:
  SpinSystemT<S> sys_;
  SamplerConfig cfg_;
  Rng rng_;
  Configuration x_;
};

}  // namespace pgibbs
