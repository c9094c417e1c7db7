#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace paintph {

/// Hopcroft-Karp maximum-cardinality matching on an implicit bipartite graph.
///
/// `Graph` exposes
///   Index left_size() const, right_size() const;
///   Index slots(Index u) const;           // candidate neighbour slots of u
///   Index neighbor(Index u, Index s) const; // right vertex, or -1 if no edge
/// so dense structured graphs never need an edge list.
template <typename Graph>
class HopcroftKarp {
 public:
  using Index = Eigen::Index;

  explicit HopcroftKarp(const Graph& graph)
      : graph_(graph),
        match_left_(graph.left_size(), -1),
        match_right_(graph.right_size(), -1),
        dist_(graph.left_size()),
        next_slot_(graph.left_size()) {}

  Index solve() {
    Index size = greedy_init();
    while (bfs()) {
      std::fill(next_slot_.begin(), next_slot_.end(), 0);
      for (Index u = 0; u < graph_.left_size(); ++u)
        if (match_left_[u] < 0 && augment(u)) ++size;
    }
    return size;
  }

  const std::vector<Index>& match_left() const { return match_left_; }
  const std::vector<Index>& match_right() const { return match_right_; }

 private:
  static constexpr Index kUnreached = std::numeric_limits<Index>::max();

  Index greedy_init() {
    Index size = 0;
    for (Index u = 0; u < graph_.left_size(); ++u) {
      for (Index s = 0, n = graph_.slots(u); s < n; ++s) {
        const Index v = graph_.neighbor(u, s);
        if (v >= 0 && match_right_[v] < 0) {
          match_left_[u] = v;
          match_right_[v] = u;
          ++size;
          break;
        }
      }
    }
    return size;
  }

  bool bfs() {
    std::vector<Index> queue;
    queue.reserve(graph_.left_size());
    for (Index u = 0; u < graph_.left_size(); ++u) {
      if (match_left_[u] < 0) {
        dist_[u] = 0;
        queue.push_back(u);
      } else {
        dist_[u] = kUnreached;
      }
    }
    bool found_free = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index u = queue[head];
      for (Index s = 0, n = graph_.slots(u); s < n; ++s) {
        const Index v = graph_.neighbor(u, s);
        if (v < 0) continue;
        const Index w = match_right_[v];
        if (w < 0) {
          found_free = true;
        } else if (dist_[w] == kUnreached) {
          dist_[w] = dist_[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found_free;
  }

  // Iterative layered DFS; `via` records the right vertex used to reach each
  // stack level so the path can be flipped once a free vertex is hit.
  bool augment(Index root) {
    stack_.assign(1, root);
    via_.clear();
    while (!stack_.empty()) {
      const Index u = stack_.back();
      if (next_slot_[u] >= graph_.slots(u)) {
        dist_[u] = kUnreached;
        stack_.pop_back();
        if (!via_.empty()) via_.pop_back();
        continue;
      }
      const Index v = graph_.neighbor(u, next_slot_[u]++);
      if (v < 0) continue;
      const Index w = match_right_[v];
      if (w < 0) {
        via_.push_back(v);
        for (std::size_t k = 0; k < stack_.size(); ++k) {
          match_left_[stack_[k]] = via_[k];
          match_right_[via_[k]] = stack_[k];
        }
        return true;
      }
      if (dist_[w] == dist_[u] + 1) {
        via_.push_back(v);
        stack_.push_back(w);
      }
    }
    return false;
  }

  const Graph& graph_;
  std::vector<Index> match_left_;
  std::vector<Index> match_right_;
  std::vector<Index> dist_;
  std::vector<Index> next_slot_;
  std::vector<Index> stack_;
  std::vector<Index> via_;
};

}  // namespace paintph
