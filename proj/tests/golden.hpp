#pragma once

// Small permissive instances (at most 8 vertices) used for distributional
// checks, each with the block radii it is run at.

#include <cmath>
#include <string>
#include <vector>

#include "pgibbs/instances.hpp"
#include "pgibbs/random.hpp"
#include "pgibbs/spin_system.hpp"

namespace golden {

using namespace pgibbs;

struct Case {
  std::string name;
  SpinSystem system;
  std::vector<unsigned> ells;
};

inline SpinSystem soft_pair() {
  return SpinSystem(path_graph(2), 2, {{1, 1}, {1, 1}}, {WeightMatrix<double>(2, {2, 1, 1, 2})});
}

inline SpinSystem random_soft(std::size_t n, std::size_t q, double p, std::uint64_t seed) {
  const Graph g = erdos_renyi(n, p, seed);
  Rng rng(seed + 1);
  std::vector<std::vector<double>> b(n, std::vector<double>(q));
  for (auto& row : b)
    for (auto& x : row) x = 0.5 + rng.uniform01();
  std::vector<WeightMatrix<double>> a;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::vector<double> m(q * q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = i; j < q; ++j) m[i * q + j] = m[j * q + i] = 0.5 + rng.uniform01();
    a.emplace_back(q, std::move(m));
  }
  return SpinSystem(g, q, std::move(b), std::move(a));
}

inline std::vector<Case> suite() {
  std::vector<Case> cases;
  cases.push_back({"single vertex b=(1,3)", SpinSystem(Graph(1), 2, {{1, 3}}, {}), {0, 1}});
  cases.push_back({"soft pair", soft_pair(), {0, 1, 2}});
  cases.push_back({"soft ising C3", ising_instance(cycle_graph(3), std::log(2.0) / 2), {0, 1, 2}});
  cases.push_back({"soft random n=6 q=3", random_soft(6, 3, 0.4, 5), {0, 1, 2}});
  cases.push_back({"soft random n=8 q=2", random_soft(8, 2, 0.3, 8), {0, 1}});
  cases.push_back({"K3 coloring q=3", coloring_instance(complete_graph(3), 3, full_lists(3, 3)), {1, 2}});
  cases.push_back({"path coloring q=3", coloring_instance(path_graph(3), 3, full_lists(3, 3)), {1, 2}});
  cases.push_back({"C5 coloring q=3", coloring_instance(cycle_graph(5), 3, full_lists(5, 3)), {1, 2}});
  cases.push_back({"K4 coloring q=5", coloring_instance(complete_graph(4), 5, full_lists(4, 5)), {1}});
  cases.push_back({"3x2 grid coloring q=4", coloring_instance(grid_graph(3, 2, false), 4, full_lists(6, 4)), {1, 2}});
  cases.push_back({"list coloring C4",
                   coloring_instance(cycle_graph(4), 4, {{0, 1, 2}, {1, 2, 3}, {0, 2, 3}, {0, 1, 3}}), {1}});
  cases.push_back({"hardcore C4 lambda=1", hardcore_instance(grid_graph(2, 2, false), 1.0), {1, 2}});
  const Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  cases.push_back({"hardcore star lambda=2", hardcore_instance(star, 2.0), {1}});
  cases.push_back({"hardcore 3x2 grid lambda=0.7", hardcore_instance(grid_graph(3, 2, false), 0.7), {1, 2}});
  cases.push_back({"monomer-dimer P3", monomer_dimer_instance(path_graph(3), 1.0).system, {1}});
  cases.push_back({"monomer-dimer C5 lambda=1.5", monomer_dimer_instance(cycle_graph(5), 1.5).system, {1, 2}});
  return cases;
}

}  // namespace golden
