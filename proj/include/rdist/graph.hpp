#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdist/error.hpp"

namespace rdist {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

// Returned by distance() for vertices in different components.
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbour;
  EdgeId edge;
};

/// Immutable simple undirected graph on dense vertex ids 0..n-1.
///
/// Edges keep the index they were given at construction; each edge is
/// stored with u < v. An optional label table maps ids back to the names
/// used in an input file.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> labels = {})
      : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (n_ > std::numeric_limits<Vertex>::max() - 1) throw ArgumentError("graph: too many vertices");
    if (edges_.size() > std::numeric_limits<EdgeId>::max() - 1) throw ArgumentError("graph: too many edges");
    if (!labels_.empty() && labels_.size() != n_) throw ArgumentError("graph: label table size mismatch");

    std::vector<std::uint32_t> deg(n_, 0);
    for (auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw ArgumentError("graph: edge endpoint out of range");
      if (e.u == e.v) throw ArgumentError("graph: self-loop at vertex " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
      ++deg[e.u];
      ++deg[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto [u, v] = edges_[id];
      adjacency_[fill[u]++] = {v, id};
      adjacency_[fill[v]++] = {u, id};
    }
    for (std::size_t v = 0; v < n_; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
      std::sort(first, last, [](const Incidence& a, const Incidence& b) { return a.neighbour < b.neighbour; });
      for (auto it = first; it != last && it + 1 != last; ++it) {
        if (it->neighbour == (it + 1)->neighbour) {
          throw ArgumentError("graph: parallel edge " + std::to_string(v) + "-" + std::to_string(it->neighbour));
        }
      }
    }
    if (n_ > 0) {
      auto [lo, hi] = std::minmax_element(deg.begin(), deg.end());
      min_degree_ = *lo;
      max_degree_ = *hi;
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  /// Incident (neighbour, edge) entries of v, sorted by neighbour id.
  std::span<const Incidence> neighbours(Vertex v) const {
    check_vertex(v);
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(Vertex v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t min_degree() const noexcept { return min_degree_; }

  Vertex other_end(EdgeId e, Vertex v) const {
    const auto& ed = edge(e);
    return ed.u == v ? ed.v : ed.u;
  }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const {
    auto nb = neighbours(u);
    check_vertex(v);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Incidence& inc, Vertex x) { return inc.neighbour < x; });
    if (it != nb.end() && it->neighbour == v) return it->edge;
    return std::nullopt;
  }

  bool has_labels() const noexcept { return !labels_.empty(); }

  /// Input-file label of v, or its decimal id when the graph has no label table.
  std::string label(Vertex v) const {
    check_vertex(v);
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  void check_vertex(Vertex v) const {
    if (v >= n_) throw ArgumentError("vertex id " + std::to_string(v) + " out of range");
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> adjacency_;
  std::size_t max_degree_ = 0;
  std::size_t min_degree_ = 0;
};

/// true iff some edge uv has d(u) = d(v) = 1.
inline bool has_isolated_edge(const Graph& g) {
  for (const auto& e : g.edges()) {
    if (g.degree(e.u) == 1 && g.degree(e.v) == 1) return true;
  }
  return false;
}

inline bool is_regular(const Graph& g) { return g.n() > 0 && g.min_degree() == g.max_degree(); }

}  // namespace rdist
