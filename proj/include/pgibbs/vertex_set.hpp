#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pgibbs/graph.hpp"

namespace pgibbs {

/// Subset of 0..n-1 with O(log n) insert/erase and rank selection
/// (Fenwick tree over membership bits). kth(i) is the i-th smallest member,
/// which is how the sampler picks u uniformly from R.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : member_(n, 0), tree_(n + 1, 0) {
    top_ = 1;
    while (top_ * 2 <= n) top_ *= 2;
  }

  static VertexSet full(std::size_t n) {
    VertexSet s(n);
    for (std::size_t i = 1; i <= n; ++i) {
      s.tree_[i] += 1;
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) s.tree_[parent] += s.tree_[i];
    }
    std::fill(s.member_.begin(), s.member_.end(), 1);
    s.size_ = n;
    return s;
  }

  std::size_t universe() const noexcept { return member_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool contains(Vertex v) const { return member_[v] != 0; }
  // Dense 0/1 membership indexed by vertex.
  std::span<const std::uint8_t> membership() const noexcept { return member_; }

  bool insert(Vertex v) {
    if (member_[v]) return false;
    member_[v] = 1;
    add(v, 1);
    ++size_;
    return true;
  }

  bool erase(Vertex v) {
    if (!member_[v]) return false;
    member_[v] = 0;
    add(v, -1);
    --size_;
    return true;
  }

  // i-th smallest member, 0-based; requires i < size().
  Vertex kth(std::size_t i) const {
    std::size_t pos = 0;
    std::int64_t rest = static_cast<std::int64_t>(i) + 1;
    for (std::size_t step = top_; step > 0; step /= 2) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < rest) {
        pos = next;
        rest -= tree_[next];
      }
    }
    return static_cast<Vertex>(pos);
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(size_);
    for (std::size_t v = 0; v < member_.size(); ++v)
      if (member_[v]) out.push_back(static_cast<Vertex>(v));
    return out;
  }

 private:
  void add(Vertex v, std::int64_t delta) {
    for (std::size_t i = v + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  std::vector<std::uint8_t> member_;
  std::vector<std::int64_t> tree_;
  std::size_t top_ = 1;
  std::size_t size_ = 0;
};

}  // namespace pgibbs
