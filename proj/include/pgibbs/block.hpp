#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pgibbs/graph.hpp"
#include "pgibbs/random.hpp"
#include "pgibbs/spin_system.hpp"

namespace pgibbs {

/// Exact inference on one block B of a spin system with its vertex boundary
/// fixed.
///
/// With every vertex of the boundary assigned, each boundary edge becomes a
/// unary factor on its block endpoint, so conditional quantities on B are
/// those of a small pairwise model. The engine compiles a variable
/// elimination plan for that model once per block and re-runs it for each
/// boundary assignment; the query vertex is eliminated last so one pass
/// yields its unnormalized marginal.
///
/// Boundary vertices are split into fixed ones (their spin is known to the
/// caller, e.g. members of R) and free ones, which mu_min() minimizes over.
template <class S>
class BlockEngine {
 public:
  explicit BlockEngine(const SpinSystemT<S>& sys, EnumerationCap cap = {});
  BlockEngine(SpinSystemT<S>&&, EnumerationCap = {}) = delete;

  // B = (ball(u, radius) \ R) u {u}; boundary vertices in R are fixed.
  // `in_r` is a dense membership vector over all vertices.
  void assign(Neighborhood& nb, Vertex u, unsigned radius, std::span<const std::uint8_t> in_r);
  // Explicit sorted block; every boundary vertex is fixed.
  void assign_block(Neighborhood& nb, std::span<const Vertex> block, Vertex query);

  std::span<const Vertex> block() const noexcept { return block_; }
  std::span<const Vertex> boundary() const noexcept { return boundary_; }
  bool boundary_fixed(std::size_t i) const { return fixed_[i] != 0; }
  Vertex query() const noexcept { return block_[query_local_]; }
  std::size_t num_free_boundary() const;

  // Spins of the boundary read from a dense configuration.
  void gather_boundary(std::span<const Spin> config, std::vector<Spin>& out) const;

  // Unnormalized marginal weights at the query vertex. `clamps` is empty or
  // holds one entry per block vertex (kUnassigned = not clamped).
  void query_weights(std::span<const Spin> boundary_spins, std::span<const Spin> clamps,
                     std::vector<S>& out);

  // mu^{boundary}_query(value). Throws ZeroConditionalPartition.
  S marginal(std::span<const Spin> boundary_spins, Spin value);

  // Minimum of mu^{sigma}_query(value) over sigma agreeing with
  // boundary_spins on the fixed boundary vertices. Free entries of
  // boundary_spins are ignored. Assignments of the free vertices are
  // enumerated up to permutations of interchangeable spins (spins whose
  // transposition preserves every local weight and that are not used by
  // the query value or the fixed boundary), which leaves the minimum
  // unchanged.
  S mu_min(std::span<const Spin> boundary_spins, Spin value);

  // Draws X_B ~ mu_B^{boundary} by inverting the lexicographic cumulative
  // distribution (first block vertex most significant) with one uniform.
  // Result is aligned with block().
  void sample(std::span<const Spin> boundary_spins, Rng& rng, std::vector<Spin>& out);

  // Memo key identifying the block's local environment together with the
  // query value and fixed boundary spins, after relabeling interchangeable
  // spins canonically. mu_min is a function of the key alone; the relabeled
  // spins to evaluate it with are returned alongside.
  void canonical_key(std::span<const Spin> boundary_spins, Spin value, std::vector<std::uint32_t>& key,
                     std::vector<Spin>& relabeled_boundary, Spin& relabeled_value) const;

  // Number of leaves visited by the last mu_min() call.
  std::uint64_t last_mu_min_leaves() const noexcept { return last_leaves_; }

 private:
  struct Attachment {
    std::uint32_t boundary_index;
    std::uint32_t edge_class;
  };
  struct LocalEdge {
    std::uint32_t i;
    std::uint32_t j;
    std::uint32_t edge_class;
  };
  struct Factor {
    std::vector<std::uint32_t> scope;
    std::vector<S> table;
  };
  struct Elimination {
    std::vector<std::uint32_t> inputs;
    std::uint32_t output = 0;
    std::size_t assignments = 0;
    std::vector<std::vector<std::uint32_t>> input_index;
    std::vector<std::uint32_t> output_index;
  };

  void build_structure();
  void compile_plan();
  void run_plan(std::vector<S>& out);
  // Classes of interchangeable spins; class_of[c] = -1 when c is alone or excluded.
  void spin_classes(std::span<const std::uint8_t> excluded, std::vector<int>& class_of,
                    std::vector<std::vector<Spin>>& members) const;

  const SpinSystemT<S>* sys_;
  EnumerationCap cap_;
  std::size_t q_;

  std::vector<Vertex> ball_;
  std::vector<Vertex> block_;
  std::vector<Vertex> boundary_;
  std::vector<std::uint8_t> fixed_;
  std::uint32_t query_local_ = 0;

  std::vector<std::vector<Attachment>> attach_;
  std::vector<LocalEdge> internal_;

  std::vector<Factor> factors_;
  std::vector<Elimination> steps_;
  std::vector<std::uint32_t> final_slots_;

  std::vector<S> scratch_weights_;
  std::vector<Spin> scratch_clamps_;
  std::vector<Spin> scratch_spins_;
  std::uint64_t last_leaves_ = 0;
};

}  // namespace pgibbs
