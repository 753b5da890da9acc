#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pgibbs/errors.hpp"
#include "pgibbs/graph.hpp"
#include "pgibbs/scalar.hpp"

namespace pgibbs {

// Spins are 0-based internally; user-facing text adds 1 where it says so.
using Spin = std::uint32_t;
using Configuration = std::vector<Spin>;

inline constexpr Spin kUnassigned = std::numeric_limits<Spin>::max();

/// Dense symmetric q x q interaction matrix.
template <class S>
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t q, std::vector<S> row_major);

  static WeightMatrix constant(std::size_t q, const S& value);
  // All-ones minus identity.
  static WeightMatrix proper_coloring(std::size_t q);

  std::size_t q() const noexcept { return q_; }
  const S& operator()(Spin i, Spin j) const { return data_[i * q_ + j]; }
  const std::vector<S>& data() const noexcept { return data_; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t q_ = 0;
  std::vector<S> data_;
};

/// Assignment of spins to a subset Lambda of the vertices.
class PartialConfiguration {
 public:
  PartialConfiguration() = default;
  explicit PartialConfiguration(std::size_t n) : spins_(n, kUnassigned) {}

  static PartialConfiguration from_full(std::span<const Spin> config);

  std::size_t num_vertices() const noexcept { return spins_.size(); }
  bool assigned(Vertex v) const { return spins_[v] != kUnassigned; }
  Spin operator[](Vertex v) const { return spins_[v]; }
  void assign(Vertex v, Spin s) { spins_[v] = s; }
  void clear(Vertex v) { spins_[v] = kUnassigned; }

  // Lambda, sorted ascending.
  std::vector<Vertex> domain() const;
  std::size_t domain_size() const;
  // Dense view: kUnassigned outside Lambda.
  std::span<const Spin> dense() const noexcept { return spins_; }

  friend bool operator==(const PartialConfiguration&, const PartialConfiguration&) = default;

 private:
  std::vector<Spin> spins_;
};

/// Spin system instance (G, [q], b, A).
///
/// Weight vectors and matrices are interned into classes so that identical
/// local environments can be recognised by id. For every class the
/// constructor also records which spin transpositions leave the class
/// invariant; the block engine uses these to exploit spin symmetry.
template <class S>
class SpinSystemT {
 public:
  using Scalar = S;

  SpinSystemT() = default;
  // edge_weights is indexed by EdgeId of `graph`.
  SpinSystemT(Graph graph, std::size_t q, std::vector<std::vector<S>> vertex_weights,
              std::vector<WeightMatrix<S>> edge_weights);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t num_vertices() const noexcept { return graph_.num_vertices(); }

  std::span<const S> vertex_weights(Vertex v) const { return vertex_tables_[vertex_class_[v]]; }
  const S& b(Vertex v, Spin a) const { return vertex_tables_[vertex_class_[v]][a]; }
  const WeightMatrix<S>& edge_weights(EdgeId e) const { return edge_tables_[edge_class_[e]]; }

  std::uint32_t vertex_class(Vertex v) const { return vertex_class_[v]; }
  std::uint32_t edge_class(EdgeId e) const { return edge_class_[e]; }
  std::span<const S> vertex_class_weights(std::uint32_t c) const { return vertex_tables_[c]; }
  const WeightMatrix<S>& edge_class_weights(std::uint32_t c) const { return edge_tables_[c]; }
  std::size_t num_vertex_classes() const noexcept { return vertex_tables_.size(); }
  std::size_t num_edge_classes() const noexcept { return edge_tables_.size(); }

  // Whether swapping spins a and b maps the class's weights onto themselves.
  bool vertex_class_swappable(std::uint32_t c, Spin a, Spin b) const {
    return vertex_swap_[c][a * q_ + b] != 0;
  }
  bool edge_class_swappable(std::uint32_t c, Spin a, Spin b) const {
    return edge_swap_[c][a * q_ + b] != 0;
  }

  // All weights strictly positive.
  bool is_soft() const noexcept { return soft_; }

 private:
  Graph graph_;
  std::size_t q_ = 0;
  std::vector<std::vector<S>> vertex_tables_;
  std::vector<std::uint32_t> vertex_class_;
  std::vector<WeightMatrix<S>> edge_tables_;
  std::vector<std::uint32_t> edge_class_;
  std::vector<std::vector<std::uint8_t>> vertex_swap_;
  std::vector<std::vector<std::uint8_t>> edge_swap_;
  bool soft_ = true;
};

using SpinSystem = SpinSystemT<double>;
using ExactSpinSystem = SpinSystemT<Rational>;

// Product of all vertex and edge factors of a full configuration.
template <class S>
S weight(const SpinSystemT<S>& sys, std::span<const Spin> config);

// Weight of tau (on V \ Lambda) conditional on sigma (on Lambda). Edges with
// both endpoints in Lambda contribute no factor.
template <class S>
S conditional_weight(const SpinSystemT<S>& sys, const PartialConfiguration& sigma,
                     const PartialConfiguration& tau);

// Z^sigma: sum of conditional_weight over all tau in [q]^(V \ Lambda).
template <class S>
S conditional_partition(const SpinSystemT<S>& sys, const PartialConfiguration& sigma,
                        const EnumerationCap& cap = {});

template <class S>
bool is_feasible(const SpinSystemT<S>& sys, std::span<const Spin> config);

// Exhaustive check that Z^sigma > 0 for every Lambda and sigma. Small
// instances only: visits (q+1)^n partial configurations.
template <class S>
bool is_permissive(const SpinSystemT<S>& sys, const EnumerationCap& cap = {});

// Ascending vertex order, lowest admissible spin. Throws InfeasibleGreedyStep.
template <class S>
Configuration greedy_feasible(const SpinSystemT<S>& sys);

// Exact conversion of a floating-point system to rationals (binary values).
ExactSpinSystem to_exact(const SpinSystem& sys);
SpinSystem to_float(const ExactSpinSystem& sys);

}  // namespace pgibbs
