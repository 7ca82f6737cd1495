#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "rdist/error.hpp"
#include "rdist/graph.hpp"

namespace rdist {

/// Members of the r-ball around `center`: all u with 1 <= dist(center, u) <= radius,
/// sorted by id.
struct RBall {
  Vertex center = 0;
  int radius = 1;
  std::vector<Vertex> members;
};

/// Reusable depth-bounded BFS. Keeps an epoch-stamped visited array so that
/// repeated queries on the same graph cost O(|ball|) instead of O(n).
class BoundedBfs {
 public:
  explicit BoundedBfs(const Graph& g) : g_(&g), stamp_(g.n(), 0), depth_(g.n(), 0) {}

  /// Calls visit(u, depth) for every u != source with depth <= max_depth, in BFS order.
  template <class Visit>
  void run(Vertex source, std::size_t max_depth, Visit&& visit) {
    g_->check_vertex(source);
    next_epoch();
    queue_.clear();
    queue_.push_back(source);
    stamp_[source] = epoch_;
    depth_[source] = 0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex x = queue_[head];
      const auto dx = depth_[x];
      if (dx >= max_depth) continue;
      for (const auto& inc : g_->neighbours(x)) {
        const Vertex y = inc.neighbour;
        if (stamp_[y] == epoch_) continue;
        stamp_[y] = epoch_;
        depth_[y] = dx + 1;
        queue_.push_back(y);
        visit(y, static_cast<std::size_t>(dx + 1));
      }
    }
  }

  /// Multi-source variant: every vertex within max_depth of any source (sources included).
  std::vector<Vertex> within(std::span<const Vertex> sources, std::size_t max_depth) {
    next_epoch();
    queue_.clear();
    for (Vertex s : sources) {
      g_->check_vertex(s);
      if (stamp_[s] == epoch_) continue;
      stamp_[s] = epoch_;
      depth_[s] = 0;
      queue_.push_back(s);
    }
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex x = queue_[head];
      if (depth_[x] >= max_depth) continue;
      for (const auto& inc : g_->neighbours(x)) {
        const Vertex y = inc.neighbour;
        if (stamp_[y] == epoch_) continue;
        stamp_[y] = epoch_;
        depth_[y] = depth_[x] + 1;
        queue_.push_back(y);
      }
    }
    std::vector<Vertex> out(queue_.begin(), queue_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  const Graph* g_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> depth_;
  std::vector<Vertex> queue_;
  std::uint32_t epoch_ = 0;
};

/// Shortest-path length, kInfinity when u and v are disconnected.
inline std::size_t distance(const Graph& g, Vertex u, Vertex v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return 0;
  std::vector<std::size_t> dist(g.n(), kInfinity);
  std::vector<Vertex> queue{u};
  dist[u] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (const auto& inc : g.neighbours(x)) {
      if (dist[inc.neighbour] != kInfinity) continue;
      dist[inc.neighbour] = dist[x] + 1;
      if (inc.neighbour == v) return dist[v];
      queue.push_back(inc.neighbour);
    }
  }
  return kInfinity;
}

inline RBall r_ball(const Graph& g, Vertex v, int r) {
  if (r < 1) throw ArgumentError("r_ball: radius must be >= 1");
  RBall ball{v, r, {}};
  BoundedBfs bfs(g);
  bfs.run(v, static_cast<std::size_t>(r), [&](Vertex u, std::size_t) { ball.members.push_back(u); });
  std::sort(ball.members.begin(), ball.members.end());
  return ball;
}

/// All r-balls of a graph in one CSR block, built once per (graph, r).
class BallCache {
 public:
  BallCache(const Graph& g, int r) : radius_(r) {
    if (r < 1) throw ArgumentError("BallCache: radius must be >= 1");
    offsets_.reserve(g.n() + 1);
    offsets_.push_back(0);
    BoundedBfs bfs(g);
    for (Vertex v = 0; v < g.n(); ++v) {
      const auto start = members_.size();
      bfs.run(v, static_cast<std::size_t>(r), [&](Vertex u, std::size_t) { members_.push_back(u); });
      std::sort(members_.begin() + static_cast<std::ptrdiff_t>(start), members_.end());
      offsets_.push_back(members_.size());
    }
  }

  int radius() const noexcept { return radius_; }
  std::size_t n() const noexcept { return offsets_.size() - 1; }

  std::span<const Vertex> members(Vertex v) const {
    return {members_.data() + offsets_.at(v), offsets_.at(v + 1) - offsets_.at(v)};
  }

  bool contains(Vertex center, Vertex u) const {
    auto m = members(center);
    return std::binary_search(m.begin(), m.end(), u);
  }

  std::size_t total_size() const noexcept { return members_.size(); }

 private:
  int radius_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> members_;
};

/// Every unordered pair {u, v} with 1 <= dist(u, v) <= r, as (u, v) with u < v,
/// in lexicographic order.
inline std::vector<std::pair<Vertex, Vertex>> all_r_pairs(const Graph& g, int r) {
  if (r < 1) throw ArgumentError("all_r_pairs: radius must be >= 1");
  std::vector<std::pair<Vertex, Vertex>> pairs;
  BoundedBfs bfs(g);
  std::vector<Vertex> ball;
  for (Vertex u = 0; u < g.n(); ++u) {
    ball.clear();
    bfs.run(u, static_cast<std::size_t>(r), [&](Vertex v, std::size_t) {
      if (v > u) ball.push_back(v);
    });
    std::sort(ball.begin(), ball.end());
    for (Vertex v : ball) pairs.emplace_back(u, v);
  }
  return pairs;
}

/// Largest finite distance over all pairs; kInfinity for a disconnected graph.
inline std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  BoundedBfs bfs(g);
  for (Vertex v = 0; v < g.n(); ++v) {
    std::size_t reached = 0;
    bfs.run(v, kInfinity, [&](Vertex, std::size_t d) {
      ++reached;
      best = std::max(best, d);
    });
    if (reached + 1 != g.n()) return kInfinity;
  }
  return best;
}

}  // namespace rdist
