#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pgibbs/graph.hpp"
#include "pgibbs/spin_system.hpp"

namespace pgibbs {

// Allowed colors per vertex, each list sorted and nonempty.
using ColorLists = std::vector<std::vector<Spin>>;

ColorLists full_lists(std::size_t n, std::size_t q);

// b_v = indicator of L_v, A_e = proper-coloring matrix.
SpinSystem coloring_instance(const Graph& g, std::size_t q, const ColorLists& lists);
ExactSpinSystem exact_coloring_instance(const Graph& g, std::size_t q, const ColorLists& lists);

inline constexpr double kAlphaStar = 1.7632228343518965;  // root of x^x = e

struct ColoringConditionsReport {
  std::size_t max_degree = 0;
  std::size_t min_list_size = 0;
  bool triangle_free = false;
  // |L_v| >= 2 deg(v) for all v (alpha = 2, beta = 0).
  bool lists_twice_degree = false;
  // Triangle-free, |L_v| >= alpha deg(v) + beta, beta >= sqrt2/(sqrt2-1),
  // alpha > alpha*, and (1 - 1/beta) alpha e^{(1/alpha)(1 - 1/beta)} > 1.
  // Only evaluated when alpha and beta are supplied.
  std::optional<bool> lists_triangle_free_bound;
  bool linear_degree_lists = false;
  // |L_v| >= Delta^2 - Delta + 2 for all v.
  bool quadratic_degree_lists = false;
};

ColoringConditionsReport check_coloring_conditions(const Graph& g, const ColorLists& lists,
                                                   std::optional<double> alpha = std::nullopt,
                                                   std::optional<double> beta = std::nullopt);

// q = 2, spin 1 = occupied: b = (1, lambda), A = [[1,1],[1,0]].
template <class S>
SpinSystemT<S> hardcore_instance(const Graph& g, const S& lambda);

// q = 2, A = [[e^c, e^-c], [e^-c, e^c]], b_v = field[v] (or uniform when
// field is empty).
SpinSystem ising_instance(const Graph& g, double coupling, const std::vector<std::array<double, 2>>& field = {});

struct LineGraph {
  Graph graph;
  // Vertex i of the line graph is edge edges[i] of the base graph.
  std::vector<Edge> edges;
};

// Throws EmptyEdgeSet.
LineGraph line_graph(const Graph& g);

struct MonomerDimer {
  SpinSystem system;
  LineGraph line;
};
MonomerDimer monomer_dimer_instance(const Graph& g, double lambda);

// Edges chosen by an occupancy configuration of the line graph.
std::vector<Edge> decode_matching(const LineGraph& line, std::span<const Spin> config);
bool is_matching(std::size_t n, std::span<const Edge> edges);

// Vertex (x, y) has index y * width + x.
Graph grid_graph(std::size_t width, std::size_t height, bool torus);
Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph empty_graph(std::size_t n);
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Upper bounds s(l) on sphere sizes, for l = 0..size()-1.
struct GrowthFunction {
  std::vector<double> s;
  double operator()(std::size_t l) const { return s.at(l); }
};

// max_v |sphere(v, l)| for l = 0..max_radius.
GrowthFunction measured_growth(const Graph& g, std::size_t max_radius);

// Smallest l0 in [2, l_max] with
// alpha exp(-beta floor(l0/2)) <= 1 / (50 q s(floor(l0/2)) s(l0)).
std::optional<std::size_t> solve_ell0(std::size_t q, double alpha, double beta, const GrowthFunction& s,
                                      std::size_t l_max);

}  // namespace pgibbs
