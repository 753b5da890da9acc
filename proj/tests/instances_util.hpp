#pragma once

// Small instances shared by several test files.

#include <random>

#include "pgibbs/instances.hpp"
#include "pgibbs/spin_system.hpp"

namespace fixtures {

using namespace pgibbs;

inline SpinSystem triangle_coloring(std::size_t q = 3) {
  return coloring_instance(complete_graph(3), q, full_lists(3, q));
}

inline ExactSpinSystem exact_triangle_coloring(std::size_t q = 3) {
  return exact_coloring_instance(complete_graph(3), q, full_lists(3, q));
}

inline SpinSystem path_coloring(std::size_t n = 3, std::size_t q = 3) {
  return coloring_instance(path_graph(n), q, full_lists(n, q));
}

// Random instance on <= max_n vertices: soft or hard (some zero entries),
// with q in {2, 3, 4}. Hard instances are not necessarily permissive.
inline SpinSystem random_instance(std::mt19937_64& gen, std::size_t max_n, bool soft) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n), qd(2, 4);
  const std::size_t n = nd(gen), q = qd(gen);
  std::uniform_real_distribution<double> pd(0.2, 0.7);
  const Graph g = erdos_renyi(n, pd(gen), gen());
  std::uniform_real_distribution<double> wd(0.25, 2.0);
  std::bernoulli_distribution zero(soft ? 0.0 : 0.2);
  std::vector<std::vector<double>> b(n, std::vector<double>(q));
  for (auto& row : b) {
    for (auto& x : row) x = zero(gen) ? 0.0 : wd(gen);
    row[gen() % q] = wd(gen);
  }
  std::vector<WeightMatrix<double>> a;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::vector<double> m(q * q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = i; j < q; ++j) m[i * q + j] = m[j * q + i] = zero(gen) ? 0.0 : wd(gen);
    m[0] = wd(gen);
    a.emplace_back(q, std::move(m));
  }
  return SpinSystem(g, q, std::move(b), std::move(a));
}

}  // namespace fixtures
