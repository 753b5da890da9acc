#include <algorithm>
#include <random>

#include "doctest.h"
#include "pgibbs/graph.hpp"
#include "pgibbs/instances.hpp"
#include "pgibbs/vertex_set.hpp"

using namespace pgibbs;
using V = std::vector<Vertex>;

TEST_CASE("graph construction validates input") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), SelfLoop);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), DuplicateEdge);
  CHECK_THROWS_AS(Graph(3, {{0, 5}}), UnknownVertex);
  const Graph g(4, {{2, 3}, {1, 0}, {0, 2}});
  CHECK(g.num_edges() == 3);
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge(2) == Edge{2, 3});
  CHECK(V(g.neighbors(0).begin(), g.neighbors(0).end()) == V{1, 2});
  CHECK(g.has_edge(3, 2));
  CHECK_FALSE(g.has_edge(1, 3));
  CHECK(g.max_degree() == 2);
  for (Vertex v = 0; v < 4; ++v)
    for (Vertex w : g.neighbors(v)) {
      const auto back = g.neighbors(w);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
    }
}

TEST_CASE("ball") {
  const Graph p = path_graph(3);
  CHECK(ball(p, 1, 1) == V{0, 1, 2});
  CHECK(ball(p, 2, 0) == V{2});
  CHECK(ball(grid_graph(3, 3, false), 4, 2).size() == 9);
  CHECK(ball(grid_graph(3, 3, false), 0, 1) == V{0, 1, 3});
}

TEST_CASE("sphere") {
  const Graph p = path_graph(3);
  CHECK(sphere(p, 0, 1) == V{1});
  CHECK(sphere(p, 0, 2) == V{2});
  CHECK(sphere(p, 0, 0) == V{0});
  CHECK(sphere(cycle_graph(4), 0, 2) == V{2});
  CHECK(sphere(p, 0, 5).empty());
}

TEST_CASE("boundary") {
  const Graph p = path_graph(3);
  CHECK(boundary(p, V{1}) == V{0, 2});
  CHECK(boundary(p, V{0, 1, 2}).empty());
  CHECK(boundary(grid_graph(3, 3, false), V{4}) == V{1, 3, 5, 7});
}

TEST_CASE("distances") {
  const auto d = distances_from(Graph(4, {{0, 1}, {1, 2}}), 0);
  CHECK(d == std::vector<std::uint32_t>{0, 1, 2, UINT32_MAX});
}

TEST_CASE("neighborhood queries agree with the free functions on random graphs") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = erdos_renyi(5 + gen() % 10, 0.3, gen());
    Neighborhood nb(g);
    std::vector<Vertex> out;
    for (Vertex u = 0; u < g.num_vertices(); ++u)
      for (unsigned l = 0; l <= 4; ++l) {
        const auto d = distances_from(g, u);
        V expect_ball, expect_sphere;
        for (Vertex w = 0; w < g.num_vertices(); ++w) {
          if (d[w] <= l) expect_ball.push_back(w);
          if (d[w] == l) expect_sphere.push_back(w);
        }
        nb.ball(u, l, out);
        CHECK(out == expect_ball);
        nb.sphere(u, l, out);
        CHECK(out == expect_sphere);
        if (l >= 1) {
          // sphere(u, l) = ball(u, l) \ ball(u, l - 1)
          V diff;
          const auto inner = ball(g, u, l - 1);
          std::set_difference(expect_ball.begin(), expect_ball.end(), inner.begin(), inner.end(),
                              std::back_inserter(diff));
          CHECK(diff == expect_sphere);
        }
      }
  }
}

TEST_CASE("boundary is disjoint from the set and adjacent to it") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = erdos_renyi(2 + gen() % 10, 0.3, gen());
    V set;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      if (gen() % 2) set.push_back(v);
    const auto bd = boundary(g, set);
    for (Vertex w = 0; w < g.num_vertices(); ++w) {
      const bool in_set = std::binary_search(set.begin(), set.end(), w);
      bool adjacent = false;
      for (Vertex x : g.neighbors(w)) adjacent = adjacent || std::binary_search(set.begin(), set.end(), x);
      CHECK(std::binary_search(bd.begin(), bd.end(), w) == (!in_set && adjacent));
    }
  }
}

TEST_CASE("step block boundary lies in the next sphere or in R") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t n = 8 + trial;  // up to 11 vertices, every R
    const Graph g = erdos_renyi(n, 0.3, gen());
    for (std::uint32_t mask = 1; mask < (1u << n); mask += (trial < 2 ? 1 : 3)) {
      V r;
      for (Vertex v = 0; v < n; ++v)
        if (mask >> v & 1) r.push_back(v);
      for (Vertex u : r)
        for (unsigned l = 0; l <= 3; ++l) {
          V block;
          for (Vertex x : ball(g, u, l))
            if (x == u || !std::binary_search(r.begin(), r.end(), x)) block.push_back(x);
          const auto sp = sphere(g, u, l + 1);
          for (Vertex w : boundary(g, block)) {
            const bool ok = std::binary_search(sp.begin(), sp.end(), w) || std::binary_search(r.begin(), r.end(), w);
            if (!ok) FAIL("boundary vertex outside sphere and R");
          }
        }
    }
  }
}

TEST_CASE("vertex set rank selection") {
  VertexSet s(10);
  CHECK(s.empty());
  CHECK(s.insert(7));
  CHECK(s.insert(2));
  CHECK_FALSE(s.insert(7));
  CHECK(s.insert(9));
  CHECK(s.size() == 3);
  CHECK(s.kth(0) == 2);
  CHECK(s.kth(1) == 7);
  CHECK(s.kth(2) == 9);
  CHECK(s.erase(7));
  CHECK(s.kth(1) == 9);
  CHECK(s.to_vector() == V{2, 9});

  const VertexSet full = VertexSet::full(13);
  for (Vertex i = 0; i < 13; ++i) CHECK(full.kth(i) == i);

  std::mt19937_64 gen(3);
  VertexSet t(37);
  std::vector<Vertex> ref;
  for (int step = 0; step < 2000; ++step) {
    const Vertex v = gen() % 37;
    if (gen() % 2) {
      t.insert(v);
      if (!std::binary_search(ref.begin(), ref.end(), v)) ref.insert(std::lower_bound(ref.begin(), ref.end(), v), v);
    } else {
      t.erase(v);
      const auto it = std::lower_bound(ref.begin(), ref.end(), v);
      if (it != ref.end() && *it == v) ref.erase(it);
    }
    REQUIRE(t.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(t.kth(i) == ref[i]);
  }
}
