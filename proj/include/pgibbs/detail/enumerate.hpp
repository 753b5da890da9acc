#pragma once

// Depth-first enumeration of assignments to a set of free vertices, in
// lexicographic order (first free vertex most significant), with the
// conditional weight maintained as a running product.

#include <span>
#include <vector>

#include "pgibbs/spin_system.hpp"

namespace pgibbs::detail {

template <class S>
class FreeEnumerator {
 public:
  // `spins` is a dense configuration: entries of `free` are overwritten
  // during the walk; every other assigned entry acts as the conditioning.
  // Vertices that are neither free nor assigned must not be adjacent to a
  // free vertex.
  FreeEnumerator(const SpinSystemT<S>& sys, std::vector<Spin>& spins,
                 std::span<const Vertex> free)
      : sys_(sys), spins_(spins), free_(free.begin(), free.end()),
        rank_(sys.num_vertices(), -1), prefix_(free.size() + 1, S(1)) {
    for (std::size_t i = 0; i < free_.size(); ++i) rank_[free_[i]] = static_cast<int>(i);
  }

  // Calls visit(weight) at every leaf with spins_ holding the assignment.
  // Leaves of zero weight are visited too unless skip_zero is set.
  template <class Visit>
  void run(Visit&& visit, bool skip_zero = false) {
    skip_zero_ = skip_zero;
    walk(0, visit);
    for (Vertex v : free_) spins_[v] = kUnassigned;
  }

  // Stops the walk after the current leaf.
  void stop() { stopped_ = true; }

 private:
  template <class Visit>
  void walk(std::size_t depth, Visit& visit) {
    if (depth == free_.size()) {
      visit(prefix_[depth]);
      return;
    }
    const Vertex v = free_[depth];
    const auto nbrs = sys_.graph().neighbors(v);
    const auto edges = sys_.graph().incident_edges(v);
    for (Spin a = 0; a < sys_.q() && !stopped_; ++a) {
      S factor = prefix_[depth] * sys_.b(v, a);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const Vertex w = nbrs[k];
        const int r = rank_[w];
        if (r >= 0) {
          if (static_cast<std::size_t>(r) < depth) factor *= sys_.edge_weights(edges[k])(a, spins_[w]);
        } else if (spins_[w] != kUnassigned) {
          factor *= sys_.edge_weights(edges[k])(a, spins_[w]);
        }
      }
      if (skip_zero_ && factor == 0) continue;
      spins_[v] = a;
      prefix_[depth + 1] = factor;
      walk(depth + 1, visit);
    }
  }

  const SpinSystemT<S>& sys_;
  std::vector<Spin>& spins_;
  std::vector<Vertex> free_;
  std::vector<int> rank_;
  std::vector<S> prefix_;
  bool skip_zero_ = false;
  bool stopped_ = false;
};

}  // namespace pgibbs::detail
