#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rdist/colouring.hpp"
#include "rdist/graph.hpp"

namespace rdist::testing {

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.push_back({v, static_cast<Vertex>((v + 1) % n)});
  return Graph(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph(leaves + 1, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph(n, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.push_back({i, static_cast<Vertex>((i + 1) % 5)});
    e.push_back({i, static_cast<Vertex>(i + 5)});
    e.push_back({static_cast<Vertex>(i + 5), static_cast<Vertex>((i + 2) % 5 + 5)});
  }
  return Graph(10, e);
}

/// Graph on n vertices whose edges are the set bits of `mask` over pairs in lexicographic order.
inline Graph from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Edge> e;
  std::size_t bit = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1) e.push_back({u, v});
  return Graph(n, e);
}

inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) e.push_back({u, v});
  return Graph(n, e);
}

/// All-pairs distances by Floyd-Warshall; kInfinity when disconnected.
inline std::vector<std::vector<std::size_t>> all_distances(const Graph& g) {
  const std::size_t n = g.n();
  const std::size_t inf = kInfinity / 4;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (Vertex v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (auto& x : row)
      if (x >= inf) x = kInfinity;
  return d;
}

/// Conflict test written from the definition: weights summed edge by edge,
/// every pair of vertices compared, distance from Floyd-Warshall.
inline bool literally_irregular(const Graph& g, const std::vector<Colour>& colours, int r,
                                const std::vector<std::vector<std::size_t>>& dist) {
  std::vector<Weight> w(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    w[g.edge(e).u] += colours[e];
    w[g.edge(e).v] += colours[e];
  }
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = u + 1; v < g.n(); ++v)
      if (dist[u][v] != kInfinity && dist[u][v] <= static_cast<std::size_t>(r) && w[u] == w[v]) return false;
  return true;
}

/// Literal enumeration of all k^m colourings; first valid one or none.
inline std::optional<std::vector<Colour>> enumerate_colourings(const Graph& g, int r, Colour k) {
  const auto dist = all_distances(g);
  std::vector<Colour> c(g.m(), 1);
  for (;;) {
    if (literally_irregular(g, c, r, dist)) return c;
    std::size_t i = 0;
    while (i < c.size() && c[i] == k) c[i++] = 1;
    if (i == c.size()) return std::nullopt;
    ++c[i];
  }
}

/// Smallest k <= k_max admitting a colouring, by literal enumeration.
inline std::optional<Colour> enumerate_strength(const Graph& g, int r, Colour k_max) {
  for (Colour k = 1; k <= k_max; ++k)
    if (enumerate_colourings(g, r, k)) return k;
  return std::nullopt;
}

}  // namespace rdist::testing
