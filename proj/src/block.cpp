#include "pgibbs/block.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace pgibbs {

namespace {

std::uint32_t local_index(std::span<const Vertex> sorted, Vertex v) {
  return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

bool contains(std::span<const Vertex> sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

template <class S>
BlockEngine<S>::BlockEngine(const SpinSystemT<S>& sys, EnumerationCap cap)
    : sys_(&sys), cap_(cap), q_(sys.q()) {}

template <class S>
void BlockEngine<S>::assign(Neighborhood& nb, Vertex u, unsigned radius,
                            std::span<const std::uint8_t> in_r) {
  nb.ball(u, radius, ball_);
  block_.clear();
  for (Vertex x : ball_)
    if (x == u || !in_r[x]) block_.push_back(x);
  nb.boundary(block_, boundary_);
  fixed_.resize(boundary_.size());
  for (std::size_t i = 0; i < boundary_.size(); ++i) fixed_[i] = in_r[boundary_[i]];
  query_local_ = local_index(block_, u);
  build_structure();
  compile_plan();
}

template <class S>
void BlockEngine<S>::assign_block(Neighborhood& nb, std::span<const Vertex> block, Vertex query) {
  block_.assign(block.begin(), block.end());
  nb.boundary(block_, boundary_);
  fixed_.assign(boundary_.size(), 1);
  query_local_ = local_index(block_, query);
  build_structure();
  compile_plan();
}

template <class S>
std::size_t BlockEngine<S>::num_free_boundary() const {
  return static_cast<std::size_t>(std::count(fixed_.begin(), fixed_.end(), 0));
}

template <class S>
void BlockEngine<S>::gather_boundary(std::span<const Spin> config, std::vector<Spin>& out) const {
  out.resize(boundary_.size());
  for (std::size_t i = 0; i < boundary_.size(); ++i) out[i] = config[boundary_[i]];
}

template <class S>
void BlockEngine<S>::build_structure() {
  const Graph& g = sys_->graph();
  const std::size_t k = block_.size();
  checked_state_count(q_, k, cap_, "block configurations");
  attach_.assign(k, {});
  internal_.clear();
  for (std::uint32_t i = 0; i < k; ++i) {
    const Vertex v = block_[i];
    const auto nbrs = g.neighbors(v);
    const auto edges = g.incident_edges(v);
    for (std::size_t t = 0; t < nbrs.size(); ++t) {
      const Vertex w = nbrs[t];
      const std::uint32_t ec = sys_->edge_class(edges[t]);
      if (contains(block_, w)) {
        if (w > v) internal_.push_back({i, local_index(block_, w), ec});
      } else {
        attach_[i].push_back({local_index(boundary_, w), ec});
      }
    }
  }
}

template <class S>
void BlockEngine<S>::compile_plan() {
  const std::size_t k = block_.size();
  factors_.clear();
  steps_.clear();
  factors_.resize(k + internal_.size());
  for (std::uint32_t i = 0; i < k; ++i) {
    factors_[i].scope = {i};
    factors_[i].table.assign(q_, S(0));
  }
  for (std::size_t e = 0; e < internal_.size(); ++e) {
    Factor& f = factors_[k + e];
    f.scope = {internal_[e].i, internal_[e].j};
    f.table = sys_->edge_class_weights(internal_[e].edge_class).data();
  }

  std::vector<std::uint32_t> active(factors_.size());
  std::iota(active.begin(), active.end(), 0u);
  std::vector<std::uint8_t> eliminated(k, 0);
  std::vector<std::uint32_t> scope_union;

  auto union_of = [&](std::uint32_t x, std::vector<std::uint32_t>& out) {
    out.clear();
    for (std::uint32_t s : active) {
      const auto& sc = factors_[s].scope;
      if (std::find(sc.begin(), sc.end(), x) == sc.end()) continue;
      out.insert(out.end(), sc.begin(), sc.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  };

  for (std::size_t round = 0; round + 1 < k; ++round) {
    std::uint32_t best = 0;
    std::size_t best_size = SIZE_MAX;
    for (std::uint32_t x = 0; x < k; ++x) {
      if (x == query_local_ || eliminated[x]) continue;
      union_of(x, scope_union);
      if (scope_union.size() < best_size) {
        best_size = scope_union.size();
        best = x;
      }
    }
    eliminated[best] = 1;
    union_of(best, scope_union);
    const std::size_t m = scope_union.size();

    Elimination step;
    step.assignments = checked_state_count(q_, m, cap_, "block elimination table");
    std::vector<std::uint32_t> remaining;
    for (std::uint32_t s : active) {
      const auto& sc = factors_[s].scope;
      if (std::find(sc.begin(), sc.end(), best) != sc.end())
        step.inputs.push_back(s);
      else
        remaining.push_back(s);
    }

    Factor out;
    for (std::uint32_t x : scope_union)
      if (x != best) out.scope.push_back(x);
    out.table.assign(checked_state_count(q_, out.scope.size(), cap_, "block elimination table"), S(0));

    // Stride of each union position within a factor (last scope entry fastest).
    auto strides_for = [&](const std::vector<std::uint32_t>& scope) {
      std::vector<std::uint32_t> strides(m, 0);
      std::uint32_t stride = 1;
      for (std::size_t t = scope.size(); t-- > 0;) {
        strides[local_index(scope_union, scope[t])] = stride;
        stride *= static_cast<std::uint32_t>(q_);
      }
      return strides;
    };
    std::vector<std::vector<std::uint32_t>> in_strides;
    for (std::uint32_t s : step.inputs) in_strides.push_back(strides_for(factors_[s].scope));
    const auto out_strides = strides_for(out.scope);

    step.input_index.assign(step.inputs.size(), std::vector<std::uint32_t>(step.assignments));
    step.output_index.assign(step.assignments, 0);
    std::vector<std::uint32_t> digit(m, 0);
    for (std::size_t a = 0; a < step.assignments; ++a) {
      for (std::size_t f = 0; f < step.inputs.size(); ++f) {
        std::uint32_t idx = 0;
        for (std::size_t p = 0; p < m; ++p) idx += digit[p] * in_strides[f][p];
        step.input_index[f][a] = idx;
      }
      std::uint32_t idx = 0;
      for (std::size_t p = 0; p < m; ++p) idx += digit[p] * out_strides[p];
      step.output_index[a] = idx;
      for (std::size_t p = m; p-- > 0;) {
        if (++digit[p] < q_) break;
        digit[p] = 0;
      }
    }

    step.output = static_cast<std::uint32_t>(factors_.size());
    factors_.push_back(std::move(out));
    remaining.push_back(step.output);
    active = std::move(remaining);
    steps_.push_back(std::move(step));
  }
  final_slots_ = active;
}

template <class S>
void BlockEngine<S>::run_plan(std::vector<S>& out) {
  for (const Elimination& step : steps_) {
    std::vector<S>& table = factors_[step.output].table;
    std::fill(table.begin(), table.end(), S(0));
    const std::size_t nin = step.inputs.size();
    for (std::size_t a = 0; a < step.assignments; ++a) {
      S prod = factors_[step.inputs[0]].table[step.input_index[0][a]];
      for (std::size_t f = 1; f < nin; ++f) prod *= factors_[step.inputs[f]].table[step.input_index[f][a]];
      table[step.output_index[a]] += prod;
    }
  }
  out.assign(q_, S(1));
  for (std::uint32_t s : final_slots_) {
    const Factor& f = factors_[s];
    for (std::size_t c = 0; c < q_; ++c) out[c] *= f.scope.empty() ? f.table[0] : f.table[c];
  }
}

template <class S>
void BlockEngine<S>::query_weights(std::span<const Spin> boundary_spins, std::span<const Spin> clamps,
                                   std::vector<S>& out) {
  for (std::size_t i = 0; i < block_.size(); ++i) {
    std::vector<S>& t = factors_[i].table;
    const auto b = sys_->vertex_weights(block_[i]);
    for (Spin y = 0; y < q_; ++y) {
      if (!clamps.empty() && clamps[i] != kUnassigned && clamps[i] != y) {
        t[y] = 0;
        continue;
      }
      S h = b[y];
      for (const Attachment& at : attach_[i])
        h *= sys_->edge_class_weights(at.edge_class)(y, boundary_spins[at.boundary_index]);
      t[y] = std::move(h);
    }
  }
  run_plan(out);
}

template <class S>
S BlockEngine<S>::marginal(std::span<const Spin> boundary_spins, Spin value) {
  query_weights(boundary_spins, {}, scratch_weights_);
  S total = 0;
  for (const S& w : scratch_weights_) total += w;
  if (total == 0) throw ZeroConditionalPartition("conditional partition function of block is zero");
  return scratch_weights_[value] / total;
}

template <class S>
void BlockEngine<S>::spin_classes(std::span<const std::uint8_t> excluded, std::vector<int>& class_of,
                                  std::vector<std::vector<Spin>>& members) const {
  std::vector<std::uint32_t> vclasses, eclasses;
  for (Vertex v : block_) vclasses.push_back(sys_->vertex_class(v));
  for (const LocalEdge& e : internal_) eclasses.push_back(e.edge_class);
  for (const auto& list : attach_)
    for (const Attachment& a : list) eclasses.push_back(a.edge_class);
  for (auto* c : {&vclasses, &eclasses}) {
    std::sort(c->begin(), c->end());
    c->erase(std::unique(c->begin(), c->end()), c->end());
  }

  std::vector<Spin> parent(q_);
  std::iota(parent.begin(), parent.end(), Spin{0});
  auto find = [&](Spin x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Spin a = 0; a < q_; ++a) {
    if (!excluded.empty() && excluded[a]) continue;
    for (Spin b = a + 1; b < q_; ++b) {
      if (!excluded.empty() && excluded[b]) continue;
      if (find(a) == find(b)) continue;
      bool ok = true;
      for (std::uint32_t c : vclasses) ok = ok && sys_->vertex_class_swappable(c, a, b);
      for (std::uint32_t c : eclasses) ok = ok && sys_->edge_class_swappable(c, a, b);
      if (ok) parent[find(b)] = find(a);
    }
  }

  class_of.assign(q_, -1);
  members.clear();
  std::vector<int> root_class(q_, -1);
  for (Spin a = 0; a < q_; ++a) {
    const Spin r = find(a);
    if (root_class[r] < 0) {
      root_class[r] = static_cast<int>(members.size());
      members.emplace_back();
    }
    members[root_class[r]].push_back(a);
  }
  // Singletons are not classes.
  std::vector<std::vector<Spin>> kept;
  for (auto& m : members) {
    if (m.size() < 2) continue;
    for (Spin a : m) class_of[a] = static_cast<int>(kept.size());
    kept.push_back(std::move(m));
  }
  members = std::move(kept);
}

template <class S>
S BlockEngine<S>::mu_min(std::span<const Spin> boundary_spins, Spin value) {
  scratch_spins_.assign(boundary_spins.begin(), boundary_spins.end());
  std::vector<std::uint8_t> used(q_, 0);
  used[value] = 1;
  std::vector<std::uint32_t> free;
  for (std::uint32_t i = 0; i < boundary_.size(); ++i) {
    if (fixed_[i])
      used[boundary_spins[i]] = 1;
    else
      free.push_back(i);
  }
  std::vector<int> class_of;
  std::vector<std::vector<Spin>> members;
  spin_classes(used, class_of, members);
  std::vector<std::uint32_t> introduced(members.size(), 0);

  std::optional<S> best;
  last_leaves_ = 0;
  std::vector<S> w;

  auto walk = [&](auto&& self, std::size_t depth) -> void {
    if (best && *best == 0) return;
    if (depth == free.size()) {
      if (++last_leaves_ > cap_.states)
        throw EnumerationCapExceeded("mu_min boundary enumeration exceeds cap", cap_.states);
      query_weights(scratch_spins_, {}, w);
      S total = 0;
      for (const S& x : w) total += x;
      if (total == 0) throw ZeroConditionalPartition("conditional partition function of block is zero");
      S ratio = w[value] / total;
      if (!best || ratio < *best) best = std::move(ratio);
      return;
    }
    for (Spin c = 0; c < q_; ++c) {
      const int cls = class_of[c];
      bool fresh = false;
      if (cls >= 0) {
        const auto& m = members[cls];
        const auto pos = static_cast<std::uint32_t>(std::find(m.begin(), m.end(), c) - m.begin());
        if (pos > introduced[cls]) continue;
        fresh = pos == introduced[cls];
      }
      scratch_spins_[free[depth]] = c;
      if (fresh) ++introduced[cls];
      self(self, depth + 1);
      if (fresh) --introduced[cls];
    }
  };
  walk(walk, 0);
  return *best;
}

template <class S>
void BlockEngine<S>::sample(std::span<const Spin> boundary_spins, Rng& rng, std::vector<Spin>& out) {
  const std::size_t k = block_.size();
  scratch_clamps_.assign(k, kUnassigned);
  UniformDraw<S> draw(rng);
  std::vector<S> level(q_);
  for (std::size_t i = 0; i < k; ++i) {
    if (i == query_local_) {
      query_weights(boundary_spins, scratch_clamps_, level);
    } else {
      for (Spin y = 0; y < q_; ++y) {
        scratch_clamps_[i] = y;
        query_weights(boundary_spins, scratch_clamps_, scratch_weights_);
        S total = 0;
        for (const S& x : scratch_weights_) total += x;
        level[y] = std::move(total);
      }
    }
    scratch_clamps_[i] = static_cast<Spin>(draw.choose(level));
  }
  out = scratch_clamps_;
}

template <class S>
void BlockEngine<S>::canonical_key(std::span<const Spin> boundary_spins, Spin value,
                                   std::vector<std::uint32_t>& key, std::vector<Spin>& relabeled_boundary,
                                   Spin& relabeled_value) const {
  std::vector<int> class_of;
  std::vector<std::vector<Spin>> members;
  spin_classes({}, class_of, members);
  std::vector<Spin> map(q_, kUnassigned);
  std::vector<std::uint32_t> next(members.size(), 0);
  auto relabel = [&](Spin s) {
    if (class_of[s] < 0) return s;
    if (map[s] == kUnassigned) map[s] = members[class_of[s]][next[class_of[s]]++];
    return map[s];
  };

  relabeled_value = relabel(value);
  relabeled_boundary.assign(boundary_.size(), 0);
  for (std::size_t i = 0; i < boundary_.size(); ++i)
    if (fixed_[i]) relabeled_boundary[i] = relabel(boundary_spins[i]);

  key.clear();
  key.push_back(static_cast<std::uint32_t>(block_.size()));
  key.push_back(static_cast<std::uint32_t>(boundary_.size()));
  key.push_back(query_local_);
  for (Vertex v : block_) key.push_back(sys_->vertex_class(v));
  key.push_back(static_cast<std::uint32_t>(internal_.size()));
  for (const LocalEdge& e : internal_) {
    key.push_back(e.i);
    key.push_back(e.j);
    key.push_back(e.edge_class);
  }
  for (const auto& list : attach_) {
    key.push_back(static_cast<std::uint32_t>(list.size()));
    for (const Attachment& a : list) {
      key.push_back(a.boundary_index);
      key.push_back(a.edge_class);
    }
  }
  for (std::size_t i = 0; i < boundary_.size(); ++i)
    key.push_back(fixed_[i] ? relabeled_boundary[i] + 1 : 0);
  key.push_back(relabeled_value);
}

template class BlockEngine<double>;
template class BlockEngine<Rational>;

}  // namespace pgibbs
