#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pgibbs {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

// Undirected edge in canonical form (u < v).
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices 0..n-1 stored in CSR form.
///
/// Adjacency lists are sorted ascending and edge ids follow the sorted
/// (min endpoint, max endpoint) order, so iteration is deterministic.
/// Construction rejects self-loops, duplicate edges and out-of-range
/// endpoints. Immutable once built.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  // Edge ids parallel to neighbors(v).
  std::span<const EdgeId> incident_edges(Vertex v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const { return find_edge(u, v).has_value(); }

  // Throws UnknownVertex unless v < n.
  void check_vertex(Vertex v) const;

 private:
  std::size_t n_ = 0;
  std::size_t max_degree_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
  std::vector<EdgeId> adj_edge_;
};

/// Reusable scratch space for distance queries around a vertex.
///
/// Each query touches only the explored region (epoch-stamped marks), so a
/// sampler step costs time proportional to the ball, not to n.
class Neighborhood {
 public:
  explicit Neighborhood(const Graph& g);

  // Vertices at distance <= radius from u, sorted ascending.
  void ball(Vertex u, unsigned radius, std::vector<Vertex>& out);
  // Vertices at distance exactly radius from u, sorted ascending.
  void sphere(Vertex u, unsigned radius, std::vector<Vertex>& out);
  // Vertices outside `set` adjacent to some vertex of `set`, sorted ascending.
  void boundary(std::span<const Vertex> set, std::vector<Vertex>& out);

  const Graph& graph() const noexcept { return *g_; }

 private:
  std::uint32_t next_epoch();
  void explore(Vertex u, unsigned radius);

  const Graph* g_;
  std::vector<std::uint32_t> mark_;
  std::vector<std::uint32_t> dist_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> order_;  // BFS order of the last explore()
};

std::vector<Vertex> ball(const Graph& g, Vertex u, unsigned radius);
std::vector<Vertex> sphere(const Graph& g, Vertex u, unsigned radius);
std::vector<Vertex> boundary(const Graph& g, std::span<const Vertex> set);

// BFS distances from u; unreachable vertices get UINT32_MAX.
std::vector<std::uint32_t> distances_from(const Graph& g, Vertex u);

}  // namespace pgibbs
