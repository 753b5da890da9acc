#include "pgibbs/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pgibbs/errors.hpp"

namespace pgibbs {

Graph::Graph(std::size_t n) : Graph(n, {}) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n > std::numeric_limits<Vertex>::max() - 1) {
    throw InvalidInput("graph too large: " + std::to_string(n) + " vertices");
  }
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw UnknownVertex("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          "} has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    if (e.u == e.v) throw SelfLoop("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw DuplicateEdge("duplicate edge {" + std::to_string(dup->u) + "," +
                        std::to_string(dup->v) + "}");
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adj_.resize(offsets_[n]);
  adj_edge_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in order keeps every list sorted:
  // for a fixed vertex x, neighbors y < x arrive (as e.u = y) before y > x.
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adj_[fill[e.u]] = e.v;
    adj_edge_[fill[e.u]++] = id;
    adj_[fill[e.v]] = e.u;
    adj_edge_[fill[e.v]++] = id;
  }
  for (std::size_t v = 0; v < n; ++v) {
    max_degree_ = std::max(max_degree_, offsets_[v + 1] - offsets_[v]);
  }
}

std::optional<EdgeId> Graph::find_edge(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return std::nullopt;
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return std::nullopt;
  return incident_edges(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

void Graph::check_vertex(Vertex v) const {
  if (v >= n_) {
    throw UnknownVertex("vertex " + std::to_string(v) + " out of range (n = " +
                        std::to_string(n_) + ")");
  }
}

Neighborhood::Neighborhood(const Graph& g)
    : g_(&g), mark_(g.num_vertices(), 0), dist_(g.num_vertices(), 0) {}

std::uint32_t Neighborhood::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
  return epoch_;
}

void Neighborhood::explore(Vertex u, unsigned radius) {
  g_->check_vertex(u);
  const std::uint32_t stamp = next_epoch();
  order_.clear();
  order_.push_back(u);
  mark_[u] = stamp;
  dist_[u] = 0;
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const Vertex x = order_[head];
    if (dist_[x] == radius) continue;
    for (Vertex y : g_->neighbors(x)) {
      if (mark_[y] != stamp) {
        mark_[y] = stamp;
        dist_[y] = dist_[x] + 1;
        order_.push_back(y);
      }
    }
  }
}

void Neighborhood::ball(Vertex u, unsigned radius, std::vector<Vertex>& out) {
  explore(u, radius);
  out.assign(order_.begin(), order_.end());
  std::sort(out.begin(), out.end());
}

void Neighborhood::sphere(Vertex u, unsigned radius, std::vector<Vertex>& out) {
  explore(u, radius);
  out.clear();
  for (Vertex x : order_) {
    if (dist_[x] == radius) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
}

void Neighborhood::boundary(std::span<const Vertex> set, std::vector<Vertex>& out) {
  const std::uint32_t seen = next_epoch();
  for (Vertex x : set) {
    g_->check_vertex(x);
    mark_[x] = seen;
  }
  out.clear();
  for (Vertex x : set) {
    for (Vertex y : g_->neighbors(x)) {
      if (mark_[y] != seen) {
        mark_[y] = seen;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

std::vector<Vertex> ball(const Graph& g, Vertex u, unsigned radius) {
  Neighborhood nb(g);
  std::vector<Vertex> out;
  nb.ball(u, radius, out);
  return out;
}

std::vector<Vertex> sphere(const Graph& g, Vertex u, unsigned radius) {
  Neighborhood nb(g);
  std::vector<Vertex> out;
  nb.sphere(u, radius, out);
  return out;
}

std::vector<Vertex> boundary(const Graph& g, std::span<const Vertex> set) {
  Neighborhood nb(g);
  std::vector<Vertex> out;
  nb.boundary(set, out);
  return out;
}

std::vector<std::uint32_t> distances_from(const Graph& g, Vertex u) {
  g.check_vertex(u);
  std::vector<std::uint32_t> dist(g.num_vertices(), std::numeric_limits<std::uint32_t>::max());
  std::vector<Vertex> queue{u};
  dist[u] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == std::numeric_limits<std::uint32_t>::max()) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

}  // namespace pgibbs
