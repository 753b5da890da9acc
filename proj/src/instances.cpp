#include "pgibbs/instances.hpp"

#include <algorithm>
#include <cmath>

#include "pgibbs/random.hpp"

namespace pgibbs {

ColorLists full_lists(std::size_t n, std::size_t q) {
  std::vector<Spin> all(q);
  for (Spin a = 0; a < q; ++a) all[a] = a;
  return ColorLists(n, all);
}

namespace {

template <class S>
SpinSystemT<S> coloring(const Graph& g, std::size_t q, const ColorLists& lists) {
  if (q < 2) throw InvalidInput("coloring instances need q >= 2");
  if (lists.size() != g.num_vertices()) throw InvalidInput("need one color list per vertex");
  std::vector<std::vector<S>> b(g.num_vertices(), std::vector<S>(q, S(0)));
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (lists[v].empty()) throw InvalidInput("color list of vertex " + std::to_string(v) + " is empty");
    for (Spin a : lists[v]) {
      if (a >= q) throw InvalidInput("color " + std::to_string(a) + " out of range");
      b[v][a] = 1;
    }
  }
  std::vector<WeightMatrix<S>> a(g.num_edges(), WeightMatrix<S>::proper_coloring(q));
  return SpinSystemT<S>(g, q, std::move(b), std::move(a));
}

bool triangle_free(const Graph& g) {
  for (const Edge& e : g.edges()) {
    const auto a = g.neighbors(e.u);
    const auto b = g.neighbors(e.v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return false;
      if (a[i] < b[j])
        ++i;
      else
        ++j;
    }
  }
  return true;
}

}  // namespace

SpinSystem coloring_instance(const Graph& g, std::size_t q, const ColorLists& lists) {
  return coloring<double>(g, q, lists);
}

ExactSpinSystem exact_coloring_instance(const Graph& g, std::size_t q, const ColorLists& lists) {
  return coloring<Rational>(g, q, lists);
}

ColoringConditionsReport check_coloring_conditions(const Graph& g, const ColorLists& lists,
                                                   std::optional<double> alpha, std::optional<double> beta) {
  if (lists.size() != g.num_vertices()) throw InvalidInput("need one color list per vertex");
  ColoringConditionsReport r;
  r.max_degree = g.max_degree();
  r.min_list_size = lists.empty() ? 0 : SIZE_MAX;
  for (const auto& l : lists) r.min_list_size = std::min(r.min_list_size, l.size());
  r.triangle_free = triangle_free(g);

  auto lists_cover = [&](double a, double b) {
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      if (static_cast<double>(lists[v].size()) < a * static_cast<double>(g.degree(v)) + b) return false;
    return true;
  };
  r.lists_twice_degree = lists_cover(2.0, 0.0);
  if (alpha && beta) {
    const double a = *alpha, b = *beta;
    const double beta_min = std::sqrt(2.0) / (std::sqrt(2.0) - 1.0);
    const double t = 1.0 - 1.0 / b;
    r.lists_triangle_free_bound = r.triangle_free && a > kAlphaStar && b >= beta_min &&
                                 t * a * std::exp(t / a) > 1.0 && lists_cover(a, b);
  }
  r.linear_degree_lists = r.lists_twice_degree || r.lists_triangle_free_bound.value_or(false);
  const double d = static_cast<double>(r.max_degree);
  r.quadratic_degree_lists = lists_cover(0.0, d * d - d + 2.0);
  return r;
}

template <class S>
SpinSystemT<S> hardcore_instance(const Graph& g, const S& lambda) {
  if (!(lambda > 0)) throw InvalidInput("hardcore fugacity must be positive");
  std::vector<std::vector<S>> b(g.num_vertices(), std::vector<S>{S(1), lambda});
  const WeightMatrix<S> a(2, {S(1), S(1), S(1), S(0)});
  return SpinSystemT<S>(g, 2, std::move(b), std::vector<WeightMatrix<S>>(g.num_edges(), a));
}

template SpinSystem hardcore_instance(const Graph&, const double&);
template ExactSpinSystem hardcore_instance(const Graph&, const Rational&);

SpinSystem ising_instance(const Graph& g, double coupling, const std::vector<std::array<double, 2>>& field) {
  if (!std::isfinite(coupling)) throw InvalidInput("Ising coupling must be finite");
  if (!field.empty() && field.size() != g.num_vertices()) throw InvalidInput("need one field pair per vertex");
  std::vector<std::vector<double>> b(g.num_vertices(), {1.0, 1.0});
  for (std::size_t v = 0; v < field.size(); ++v) b[v] = {field[v][0], field[v][1]};
  const double same = std::exp(coupling), diff = std::exp(-coupling);
  const WeightMatrix<double> a(2, {same, diff, diff, same});
  return SpinSystem(g, 2, std::move(b), std::vector<WeightMatrix<double>>(g.num_edges(), a));
}

LineGraph line_graph(const Graph& g) {
  if (g.num_edges() == 0) throw EmptyEdgeSet("line graph of a graph without edges");
  LineGraph out;
  out.edges.assign(g.edges().begin(), g.edges().end());
  std::vector<Edge> adj;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto inc = g.incident_edges(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j)
        adj.push_back({std::min(inc[i], inc[j]), std::max(inc[i], inc[j])});
  }
  // Two edges share at most one endpoint in a simple graph, so no duplicates.
  out.graph = Graph(g.num_edges(), std::move(adj));
  return out;
}

MonomerDimer monomer_dimer_instance(const Graph& g, double lambda) {
  LineGraph line = line_graph(g);
  SpinSystem sys = hardcore_instance(line.graph, lambda);
  return {std::move(sys), std::move(line)};
}

std::vector<Edge> decode_matching(const LineGraph& line, std::span<const Spin> config) {
  if (config.size() != line.edges.size()) throw InvalidInput("configuration does not match the line graph");
  std::vector<Edge> out;
  for (std::size_t i = 0; i < config.size(); ++i)
    if (config[i] == 1) out.push_back(line.edges[i]);
  return out;
}

bool is_matching(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::uint8_t> used(n, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n || used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = 1;
  }
  return true;
}

Graph grid_graph(std::size_t width, std::size_t height, bool torus) {
  if (width == 0 || height == 0) throw InvalidInput("grid dimensions must be positive");
  if (torus && (width < 3 || height < 3)) throw DegenerateTorus("torus needs width and height >= 3");
  std::vector<Edge> edges;
  auto id = [&](std::size_t x, std::size_t y) { return static_cast<Vertex>(y * width + x); };
  auto add = [&](Vertex a, Vertex b) { edges.push_back({std::min(a, b), std::max(a, b)}); };
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width)
        add(id(x, y), id(x + 1, y));
      else if (torus)
        add(id(x, y), id(0, y));
      if (y + 1 < height)
        add(id(x, y), id(x, y + 1));
      else if (torus)
        add(id(x, y), id(x, 0));
    }
  return Graph(width * height, std::move(edges));
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  edges.push_back({0, static_cast<Vertex>(n - 1)});
  return Graph(n, std::move(edges));
}

Graph empty_graph(std::size_t n) { return Graph(n); }

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

GrowthFunction measured_growth(const Graph& g, std::size_t max_radius) {
  GrowthFunction s;
  s.s.assign(max_radius + 1, 0.0);
  Neighborhood nb(g);
  std::vector<Vertex> sp;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    for (std::size_t l = 0; l <= max_radius; ++l) {
      nb.sphere(v, static_cast<unsigned>(l), sp);
      s.s[l] = std::max(s.s[l], static_cast<double>(sp.size()));
    }
  return s;
}

std::optional<std::size_t> solve_ell0(std::size_t q, double alpha, double beta, const GrowthFunction& s,
                                      std::size_t l_max) {
  if (!(alpha > 0) || !(beta > 0)) throw InvalidInput("alpha and beta must be positive");
  for (std::size_t l0 = 2; l0 <= l_max && l0 < s.s.size(); ++l0) {
    const std::size_t h = l0 / 2;
    const double lhs = alpha * std::exp(-beta * static_cast<double>(h));
    const double rhs = 1.0 / (50.0 * static_cast<double>(q) * s(h) * s(l0));
    if (lhs <= rhs) return l0;
  }
  return std::nullopt;
}

}  // namespace pgibbs
