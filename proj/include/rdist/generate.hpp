#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rdist/error.hpp"
#include "rdist/graph.hpp"
#include "rdist/rng.hpp"

namespace rdist {

enum class Family { Path, Cycle, Star, Complete, Gnp, RandomRegular };

struct GenSpec {
  Family family = Family::Path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double p = 0.0;         // gnp
  std::size_t d = 0;      // random_regular
  std::size_t min_degree = 0;
  bool forbid_isolated_edges = false;
  int retry_budget = 1000;

  std::string name() const;
};

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Path: return "path";
    case Family::Cycle: return "cycle";
    case Family::Star: return "star";
    case Family::Complete: return "complete";
    case Family::Gnp: return "gnp";
    case Family::RandomRegular: return "random_regular";
  }
  return "?";
}

inline std::string GenSpec::name() const {
  std::string s = family_name(family) + "(n=" + std::to_string(n);
  if (family == Family::Gnp) s += ",p=" + std::to_string(p);
  if (family == Family::RandomRegular) s += ",d=" + std::to_string(d);
  if (family == Family::Gnp || family == Family::RandomRegular) s += ",seed=" + std::to_string(seed);
  return s + ")";
}

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Pairing model with local rejection: two random unmatched points are joined
// unless that would create a loop or a repeated edge, in which case another
// pair is drawn. Returns {} when the remaining points cannot be matched.
inline std::vector<Edge> pairing_model(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<Vertex> points;
  points.reserve(n * d);
  for (Vertex v = 0; v < n; ++v) points.insert(points.end(), d, v);
  std::vector<Edge> edges;
  edges.reserve(points.size() / 2);
  std::set<std::pair<Vertex, Vertex>> seen;
  while (!points.empty()) {
    bool joined = false;
    for (int attempt = 0; attempt < 100 && !joined; ++attempt) {
      const auto last = static_cast<std::int64_t>(points.size() - 1);
      auto i = static_cast<std::size_t>(rng.uniform_int(0, last));
      auto j = static_cast<std::size_t>(rng.uniform_int(0, last));
      Vertex a = points[i], b = points[j];
      if (i == j || a == b) continue;
      if (a > b) std::swap(a, b);
      if (!seen.emplace(a, b).second) continue;
      edges.push_back({a, b});
      if (i < j) std::swap(i, j);
      points[i] = points.back();
      points.pop_back();
      points[j] = points.back();
      points.pop_back();
      joined = true;
    }
    if (!joined) return {};
  }
  return edges;
}

inline bool meets_constraints(const Graph& g, const GenSpec& spec) {
  if (g.n() > 0 && g.min_degree() < spec.min_degree) return false;
  if (spec.forbid_isolated_edges && has_isolated_edge(g)) return false;
  return true;
}

}  // namespace detail

/// Builds a graph of the requested family. Random families are resampled
/// (pairing model for regular graphs) until simple and within constraints.
inline Graph generate(const GenSpec& spec) {
  const auto n = spec.n;
  std::vector<Edge> edges;
  switch (spec.family) {
    case Family::Path:
      for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
      break;
    case Family::Cycle:
      if (n < 3) throw ArgumentError("cycle needs n >= 3");
      for (Vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
      break;
    case Family::Star:
      if (n < 2) throw ArgumentError("star needs n >= 2");
      for (Vertex v = 1; v < n; ++v) edges.push_back({0, v});
      break;
    case Family::Complete:
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
      break;
    case Family::Gnp:
    case Family::RandomRegular: {
      if (spec.family == Family::Gnp && !(spec.p > 0.0 && spec.p < 1.0)) throw ArgumentError("gnp needs 0 < p < 1");
      if (spec.family == Family::RandomRegular && (spec.d >= n || (n * spec.d) % 2 != 0)) {
        throw ArgumentError("random_regular needs d < n and n*d even");
      }
      Rng rng = Rng(spec.seed).split(streams::kGenerator);
      for (int attempt = 0; attempt < spec.retry_budget; ++attempt) {
        edges.clear();
        if (spec.family == Family::Gnp) {
          for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
              if (rng.uniform01() < spec.p) edges.push_back({u, v});
        } else {
          edges = detail::pairing_model(n, spec.d, rng);
          if (edges.empty() && spec.d > 0) continue;
        }
        Graph g(n, edges);
        if (detail::meets_constraints(g, spec)) return g;
      }
      throw GenerationError("no graph met the constraints for " + spec.name() + " within the retry budget");
    }
  }
  Graph g(n, std::move(edges));
  if (!detail::meets_constraints(g, spec)) throw GenerationError(spec.name() + " violates the declared constraints");
  return g;
}

}  // namespace rdist
