#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rdist/distance.hpp"
#include "rdist/error.hpp"
#include "rdist/graph.hpp"
#include "rdist/ordering.hpp"
#include "rdist/rng.hpp"

namespace rdist {

/// Edge set inside C with 1 <= d_{E'}(v) <= d(v)/t_e at every C-vertex.
struct SparseCSet {
  std::vector<EdgeId> edges;            // ascending edge id
  std::vector<std::uint32_t> degree;    // d_{E'}(v), indexed by vertex
  std::vector<char> member;             // indexed by edge id

  bool contains(EdgeId e) const { return e < member.size() && member[e]; }
};

struct SparseCSetResult {
  std::optional<SparseCSet> set;
  int rounds = 0;
  std::vector<Vertex> violating;  // C-vertices over the bound when rounds ran out
  std::string error;              // structural precondition failure, if any

  bool success() const noexcept { return set.has_value(); }
};

namespace detail {

inline SparseCSet build_cset(const Graph& g, const std::vector<std::optional<EdgeId>>& choice) {
  SparseCSet s;
  s.member.assign(g.m(), 0);
  s.degree.assign(g.n(), 0);
  for (const auto& c : choice) {
    if (c && !s.member[*c]) {
      s.member[*c] = 1;
      s.edges.push_back(*c);
      ++s.degree[g.edge(*c).u];
      ++s.degree[g.edge(*c).v];
    }
  }
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

}  // namespace detail

/// Every C-vertex picks one incident edge with both ends in C uniformly at
/// random; E' is the union of the picks. While some C-vertex is over the
/// bound, the picks of that vertex and of its C-neighbours are redrawn.
inline SparseCSetResult select_sparse_cset(const Graph& g, const OrderedPartition& part, double t_e, Rng& rng,
                                           int max_rounds) {
  if (max_rounds < 1) throw ArgumentError("select_sparse_cset: max_rounds must be >= 1");
  SparseCSetResult res;
  std::vector<std::vector<EdgeId>> inside(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    if (part.label[v] != Part::C) continue;
    for (const auto& inc : g.neighbours(v)) {
      if (part.label[inc.neighbour] == Part::C) inside[v].push_back(inc.edge);
    }
    if (inside[v].empty()) {
      res.error = "C-vertex " + std::to_string(v) + " has no neighbour in C";
      return res;
    }
  }

  std::vector<std::optional<EdgeId>> choice(g.n());
  auto draw = [&](Vertex v) {
    const auto& opts = inside[v];
    choice[v] = opts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(opts.size() - 1)))];
  };
  for (Vertex v = 0; v < g.n(); ++v) {
    if (part.label[v] == Part::C) draw(v);
  }

  std::vector<char> redraw(g.n(), 0);
  for (;;) {
    auto set = detail::build_cset(g, choice);
    res.violating.clear();
    for (Vertex v = 0; v < g.n(); ++v) {
      if (part.label[v] == Part::C && static_cast<double>(set.degree[v]) > static_cast<double>(g.degree(v)) / t_e) {
        res.violating.push_back(v);
      }
    }
    if (res.violating.empty()) {
      res.set = std::move(set);
      return res;
    }
    if (res.rounds == max_rounds) return res;
    ++res.rounds;
    std::fill(redraw.begin(), redraw.end(), 0);
    for (Vertex v : res.violating) {
      redraw[v] = 1;
      for (EdgeId e : inside[v]) redraw[g.other_end(e, v)] = 1;
    }
    for (Vertex v = 0; v < g.n(); ++v) {
      if (redraw[v]) draw(v);
    }
  }
}

}  // namespace rdist
