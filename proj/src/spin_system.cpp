#include "pgibbs/spin_system.hpp"

#include <cmath>
#include <map>
#include <string>

#include "pgibbs/detail/enumerate.hpp"

namespace pgibbs {

namespace {

template <class S>
bool finite(const S& x) {
  if constexpr (std::is_same_v<S, double>) {
    return std::isfinite(x);
  } else {
    return true;
  }
}

template <class S>
void check_weights(std::span<const S> values, const std::string& what) {
  bool positive = false;
  for (const S& x : values) {
    if (!finite(x) || x < 0) throw InvalidInput(what + " has a negative or non-finite weight");
    if (x > 0) positive = true;
  }
  if (!positive) throw InvalidInput(what + " has no positive weight");
}

}  // namespace

template <class S>
WeightMatrix<S>::WeightMatrix(std::size_t q, std::vector<S> row_major)
    : q_(q), data_(std::move(row_major)) {
  if (data_.size() != q * q) {
    throw InvalidInput("interaction matrix has " + std::to_string(data_.size()) +
                       " entries, expected " + std::to_string(q * q));
  }
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) {
      if (data_[i * q + j] != data_[j * q + i]) throw InvalidInput("interaction matrix is not symmetric");
    }
  }
}

template <class S>
WeightMatrix<S> WeightMatrix<S>::constant(std::size_t q, const S& value) {
  return WeightMatrix(q, std::vector<S>(q * q, value));
}

template <class S>
WeightMatrix<S> WeightMatrix<S>::proper_coloring(std::size_t q) {
  std::vector<S> data(q * q, S(1));
  for (std::size_t i = 0; i < q; ++i) data[i * q + i] = S(0);
  return WeightMatrix(q, std::move(data));
}

PartialConfiguration PartialConfiguration::from_full(std::span<const Spin> config) {
  PartialConfiguration p(config.size());
  for (std::size_t v = 0; v < config.size(); ++v) p.spins_[v] = config[v];
  return p;
}

std::vector<Vertex> PartialConfiguration::domain() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < spins_.size(); ++v) {
    if (spins_[v] != kUnassigned) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::size_t PartialConfiguration::domain_size() const {
  std::size_t count = 0;
  for (Spin s : spins_) count += s != kUnassigned;
  return count;
}

template <class S>
SpinSystemT<S>::SpinSystemT(Graph graph, std::size_t q, std::vector<std::vector<S>> vertex_weights,
                            std::vector<WeightMatrix<S>> edge_weights)
    : graph_(std::move(graph)), q_(q) {
  if (q < 2) throw InvalidInput("spin count q must be at least 2");
  if (q > 4096) throw InvalidInput("spin count q is too large");
  const std::size_t n = graph_.num_vertices();
  if (vertex_weights.size() != n) {
    throw InvalidInput("expected " + std::to_string(n) + " vertex weight vectors, got " +
                       std::to_string(vertex_weights.size()));
  }
  if (edge_weights.size() != graph_.num_edges()) {
    throw InvalidInput("expected " + std::to_string(graph_.num_edges()) +
                       " interaction matrices, got " + std::to_string(edge_weights.size()));
  }

  std::map<std::vector<S>, std::uint32_t> vertex_ids;
  vertex_class_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& w = vertex_weights[v];
    if (w.size() != q) {
      throw InvalidInput("vertex " + std::to_string(v) + " has " + std::to_string(w.size()) +
                         " weights, expected q = " + std::to_string(q));
    }
    check_weights<S>(w, "vertex " + std::to_string(v));
    auto [it, inserted] = vertex_ids.try_emplace(w, static_cast<std::uint32_t>(vertex_tables_.size()));
    if (inserted) vertex_tables_.push_back(std::move(w));
    vertex_class_[v] = it->second;
  }

  std::map<std::vector<S>, std::uint32_t> edge_ids;
  edge_class_.resize(edge_weights.size());
  for (std::size_t e = 0; e < edge_weights.size(); ++e) {
    auto& m = edge_weights[e];
    const Edge& ed = graph_.edge(static_cast<EdgeId>(e));
    const std::string what = "edge {" + std::to_string(ed.u) + "," + std::to_string(ed.v) + "}";
    if (m.q() != q) throw InvalidInput(what + " matrix has the wrong dimension");
    check_weights<S>(m.data(), what);
    auto [it, inserted] = edge_ids.try_emplace(m.data(), static_cast<std::uint32_t>(edge_tables_.size()));
    if (inserted) edge_tables_.push_back(std::move(m));
    edge_class_[e] = it->second;
  }

  for (const auto& table : vertex_tables_) {
    std::vector<std::uint8_t> swap(q * q, 0);
    for (Spin a = 0; a < q; ++a) {
      for (Spin b = 0; b < q; ++b) swap[a * q + b] = table[a] == table[b];
    }
    vertex_swap_.push_back(std::move(swap));
    for (const S& x : table) soft_ = soft_ && x > 0;
  }
  for (const auto& m : edge_tables_) {
    std::vector<std::uint8_t> swap(q * q, 0);
    for (Spin a = 0; a < q; ++a) {
      swap[a * q + a] = 1;
      for (Spin b = a + 1; b < q; ++b) {
        auto image = [a, b](Spin s) { return s == a ? b : (s == b ? a : s); };
        bool ok = true;
        for (Spin i = 0; i < q && ok; ++i) {
          for (Spin j = i; j < q && ok; ++j) ok = m(image(i), image(j)) == m(i, j);
        }
        swap[a * q + b] = swap[b * q + a] = ok;
      }
    }
    edge_swap_.push_back(std::move(swap));
    for (const S& x : m.data()) soft_ = soft_ && x > 0;
  }
}

template <class S>
S weight(const SpinSystemT<S>& sys, std::span<const Spin> config) {
  const Graph& g = sys.graph();
  if (config.size() != g.num_vertices()) throw InvalidInput("configuration has the wrong length");
  S w(1);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (config[v] >= sys.q()) throw InvalidInput("spin out of range at vertex " + std::to_string(v));
    w *= sys.b(v, config[v]);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    w *= sys.edge_weights(e)(config[ed.u], config[ed.v]);
  }
  return w;
}

template <class S>
S conditional_weight(const SpinSystemT<S>& sys, const PartialConfiguration& sigma,
                     const PartialConfiguration& tau) {
  const Graph& g = sys.graph();
  const std::size_t n = g.num_vertices();
  if (sigma.num_vertices() != n || tau.num_vertices() != n) {
    throw InvalidInput("partial configurations must be sized to the instance");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (sigma.assigned(v) == tau.assigned(v)) {
      throw InvalidInput("domains of sigma and tau must partition the vertex set (vertex " +
                         std::to_string(v) + ")");
    }
  }
  S w(1);
  for (Vertex v = 0; v < n; ++v) {
    if (tau.assigned(v)) w *= sys.b(v, tau[v]);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const bool u_in = sigma.assigned(ed.u);
    const bool v_in = sigma.assigned(ed.v);
    if (u_in && v_in) continue;
    const Spin su = u_in ? sigma[ed.u] : tau[ed.u];
    const Spin sv = v_in ? sigma[ed.v] : tau[ed.v];
    w *= sys.edge_weights(e)(su, sv);
  }
  return w;
}

template <class S>
S conditional_partition(const SpinSystemT<S>& sys, const PartialConfiguration& sigma,
                        const EnumerationCap& cap) {
  if (sigma.num_vertices() != sys.num_vertices()) {
    throw InvalidInput("partial configuration must be sized to the instance");
  }
  std::vector<Vertex> free;
  for (Vertex v = 0; v < sys.num_vertices(); ++v) {
    if (!sigma.assigned(v)) free.push_back(v);
  }
  checked_state_count(sys.q(), free.size(), cap, "conditional partition function");
  std::vector<Spin> spins(sigma.dense().begin(), sigma.dense().end());
  S z(0);
  detail::FreeEnumerator<S> walker(sys, spins, free);
  walker.run([&z](const S& w) { z += w; }, /*skip_zero=*/true);
  return z;
}

template <class S>
bool is_feasible(const SpinSystemT<S>& sys, std::span<const Spin> config) {
  return weight(sys, config) > 0;
}

template <class S>
bool is_permissive(const SpinSystemT<S>& sys, const EnumerationCap& cap) {
  const std::size_t n = sys.num_vertices();
  const std::size_t q = sys.q();
  checked_state_count(q + 1, n, cap, "permissiveness check");
  checked_state_count(q, n, cap, "permissiveness check");
  // Odometer over {unassigned, 0..q-1}^n.
  std::vector<Spin> code(n, 0);
  std::vector<Spin> spins(n, kUnassigned);
  for (;;) {
    std::vector<Vertex> free;
    for (Vertex v = 0; v < n; ++v) {
      spins[v] = code[v] == 0 ? kUnassigned : code[v] - 1;
      if (code[v] == 0) free.push_back(v);
    }
    bool positive = false;
    detail::FreeEnumerator<S> walker(sys, spins, free);
    walker.run(
        [&](const S&) {
          positive = true;
          walker.stop();
        },
        /*skip_zero=*/true);
    if (!positive) return false;
    std::size_t i = 0;
    while (i < n && ++code[i] == q + 1) code[i++] = 0;
    if (i == n) return true;
  }
}

template <class S>
Configuration greedy_feasible(const SpinSystemT<S>& sys) {
  const Graph& g = sys.graph();
  Configuration x(g.num_vertices(), kUnassigned);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto nbrs = g.neighbors(v);
    const auto edges = g.incident_edges(v);
    for (Spin a = 0; a < sys.q() && x[v] == kUnassigned; ++a) {
      if (!(sys.b(v, a) > 0)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < nbrs.size() && ok; ++k) {
        if (nbrs[k] < v) ok = sys.edge_weights(edges[k])(a, x[nbrs[k]]) > 0;
      }
      if (ok) x[v] = a;
    }
    if (x[v] == kUnassigned) throw InfeasibleGreedyStep(v);
  }
  return x;
}

namespace {

template <class To, class From, class Convert>
SpinSystemT<To> convert_system(const SpinSystemT<From>& sys, Convert convert) {
  std::vector<std::vector<To>> b(sys.num_vertices());
  for (Vertex v = 0; v < sys.num_vertices(); ++v) {
    for (const From& x : sys.vertex_weights(v)) b[v].push_back(convert(x));
  }
  std::vector<WeightMatrix<To>> a;
  for (EdgeId e = 0; e < sys.graph().num_edges(); ++e) {
    std::vector<To> data;
    for (const From& x : sys.edge_weights(e).data()) data.push_back(convert(x));
    a.emplace_back(sys.q(), std::move(data));
  }
  return SpinSystemT<To>(sys.graph(), sys.q(), std::move(b), std::move(a));
}

}  // namespace

ExactSpinSystem to_exact(const SpinSystem& sys) {
  return convert_system<Rational>(sys, [](double x) { return Rational(x); });
}

SpinSystem to_float(const ExactSpinSystem& sys) {
  return convert_system<double>(sys, [](const Rational& x) { return x.convert_to<double>(); });
}

#define PGIBBS_INSTANTIATE(S)                                                                   \
  template class WeightMatrix<S>;                                                               \
  template class SpinSystemT<S>;                                                                \
  template S weight(const SpinSystemT<S>&, std::span<const Spin>);                              \
  template S conditional_weight(const SpinSystemT<S>&, const PartialConfiguration&,             \
                                const PartialConfiguration&);                                   \
  template S conditional_partition(const SpinSystemT<S>&, const PartialConfiguration&,          \
                                   const EnumerationCap&);                                      \
  template bool is_feasible(const SpinSystemT<S>&, std::span<const Spin>);                      \
  template bool is_permissive(const SpinSystemT<S>&, const EnumerationCap&);                    \
  template Configuration greedy_feasible(const SpinSystemT<S>&);

PGIBBS_INSTANTIATE(double)
PGIBBS_INSTANTIATE(Rational)

#undef PGIBBS_INSTANTIATE

}  // namespace pgibbs
