#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rdist/distance.hpp"
#include "rdist/edge_list.hpp"
#include "rdist/error.hpp"
#include "rdist/graph.hpp"

namespace rdist {

using Colour = std::int64_t;
using Weight = std::int64_t;

inline constexpr Weight kWeightLimit = Weight{1} << 62;

/// Rejects palettes whose weighted degrees could leave exact 62-bit range.
inline void check_weight_capacity(std::size_t max_degree, Colour k_max) {
  if (k_max < 1) throw ArgumentError("palette ceiling must be >= 1");
  if (max_degree != 0 && static_cast<unsigned long long>(k_max) >= static_cast<unsigned long long>(kWeightLimit) / max_degree) {
    throw CapacityError("Δ·k_max does not fit in 62 bits");
  }
}

/// Positive integer colours indexed by edge id, bounded by a declared ceiling.
struct EdgeColouring {
  std::vector<Colour> colours;
  Colour k_max = 1;

  EdgeColouring() = default;
  EdgeColouring(std::vector<Colour> c, Colour ceiling) : colours(std::move(c)), k_max(ceiling) {
    if (k_max < 1) throw ArgumentError("colouring: k_max must be >= 1");
    for (Colour x : colours) {
      if (x < 1 || x > k_max) throw ArgumentError("colouring: colour " + std::to_string(x) + " outside [1, k_max]");
    }
  }

  static EdgeColouring uniform(std::size_t m, Colour colour, Colour ceiling) {
    return EdgeColouring(std::vector<Colour>(m, colour), ceiling);
  }

  std::size_t size() const noexcept { return colours.size(); }
  Colour operator[](EdgeId e) const { return colours.at(e); }

  Colour max_colour() const { return colours.empty() ? 0 : *std::max_element(colours.begin(), colours.end()); }
  Colour min_colour() const { return colours.empty() ? 0 : *std::min_element(colours.begin(), colours.end()); }
};

inline void check_covers(const Graph& g, std::span<const Colour> colours) {
  if (colours.size() != g.m()) {
    throw ArgumentError("colouring has " + std::to_string(colours.size()) + " entries, graph has " +
                        std::to_string(g.m()) + " edges");
  }
}

inline Weight weighted_degree(const Graph& g, std::span<const Colour> colours, Vertex v) {
  check_covers(g, colours);
  Weight w = 0;
  for (const auto& inc : g.neighbours(v)) w += colours[inc.edge];
  return w;
}

inline Weight weighted_degree(const Graph& g, const EdgeColouring& c, Vertex v) {
  return weighted_degree(g, std::span<const Colour>(c.colours), v);
}

/// weights[v] = sum of colours on edges at v. Computed edge-wise, so the
/// handshake identity sum(weights) == 2 * sum(colours) holds by construction.
inline std::vector<Weight> weight_profile(const Graph& g, std::span<const Colour> colours) {
  check_covers(g, colours);
  std::vector<Weight> w(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    w[ed.u] += colours[e];
    w[ed.v] += colours[e];
  }
  return w;
}

inline std::vector<Weight> weight_profile(const Graph& g, const EdgeColouring& c) {
  return weight_profile(g, std::span<const Colour>(c.colours));
}

struct Conflict {
  Vertex u;
  Vertex v;
  Weight weight;

  friend bool operator==(const Conflict&, const Conflict&) = default;
  friend auto operator<=>(const Conflict& a, const Conflict& b) {
    return std::tie(a.u, a.v) <=> std::tie(b.u, b.v);
  }
};

/// Conflicting r-neighbour pairs, in lexicographic (u, v) order with u < v.
/// At most `cap` pairs are retained (the smallest ones); `total` counts all.
struct ConflictReport {
  std::vector<Conflict> pairs;
  std::size_t total = 0;
  bool overflow = false;

  bool is_valid() const noexcept { return total == 0; }
};

inline constexpr std::size_t kDefaultConflictCap = 1000;

namespace detail {

// Keeps the `cap` lexicographically smallest conflicts seen.
class ConflictCollector {
 public:
  explicit ConflictCollector(std::size_t cap) : cap_(cap) {}

  void add(Vertex a, Vertex b, Weight w) {
    if (a > b) std::swap(a, b);
    ++total_;
    Conflict c{a, b, w};
    if (cap_ == 0) return;
    if (heap_.size() < cap_) {
      heap_.push(c);
    } else if (c < heap_.top()) {
      heap_.pop();
      heap_.push(c);
    }
  }

  ConflictReport finish() {
    ConflictReport report;
    report.total = total_;
    report.overflow = total_ > cap_;
    report.pairs.reserve(heap_.size());
    while (!heap_.empty()) {
      report.pairs.push_back(heap_.top());
      heap_.pop();
    }
    std::reverse(report.pairs.begin(), report.pairs.end());
    return report;
  }

 private:
  std::size_t cap_;
  std::size_t total_ = 0;
  std::priority_queue<Conflict> heap_;
};

}  // namespace detail

/// Bucketed conflict detection: vertices are grouped by weight and distance is
/// only tested inside a bucket, with one bounded BFS per bucket member.
inline ConflictReport find_conflicts(const Graph& g, std::span<const Weight> weights, int r,
                                     std::size_t cap = kDefaultConflictCap) {
  if (r < 1) throw ArgumentError("find_conflicts: r must be >= 1");
  if (weights.size() != g.n()) throw ArgumentError("find_conflicts: weight vector size mismatch");
  std::vector<Vertex> order(g.n());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return weights[a] != weights[b] ? weights[a] < weights[b] : a < b;
  });

  detail::ConflictCollector out(cap);
  BoundedBfs bfs(g);
  std::vector<char> in_bucket(g.n(), 0);
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && weights[order[hi]] == weights[order[lo]]) ++hi;
    if (hi - lo >= 2) {
      for (std::size_t i = lo; i < hi; ++i) in_bucket[order[i]] = 1;
      for (std::size_t i = lo; i < hi; ++i) {
        const Vertex a = order[i];
        bfs.run(a, static_cast<std::size_t>(r), [&](Vertex b, std::size_t) {
          if (b > a && in_bucket[b]) out.add(a, b, weights[a]);
        });
      }
      for (std::size_t i = lo; i < hi; ++i) in_bucket[order[i]] = 0;
    }
    lo = hi;
  }
  return out.finish();
}

/// Same as above using a prebuilt ball cache (must have radius r).
inline ConflictReport find_conflicts(const BallCache& balls, std::span<const Weight> weights,
                                     std::size_t cap = kDefaultConflictCap) {
  if (weights.size() != balls.n()) throw ArgumentError("find_conflicts: weight vector size mismatch");
  detail::ConflictCollector out(cap);
  std::unordered_map<Weight, std::vector<Vertex>> buckets;
  for (Vertex v = 0; v < weights.size(); ++v) buckets[weights[v]].push_back(v);
  for (const auto& [w, members] : buckets) {
    if (members.size() < 2) continue;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (balls.contains(members[i], members[j])) out.add(members[i], members[j], w);
      }
    }
  }
  return out.finish();
}

inline ConflictReport find_conflicts(const Graph& g, const EdgeColouring& c, int r,
                                     std::size_t cap = kDefaultConflictCap) {
  auto w = weight_profile(g, c);
  return find_conflicts(g, std::span<const Weight>(w), r, cap);
}

/// Reference implementation: every vertex pair, filtered by pairwise distance.
inline ConflictReport find_conflicts_naive(const Graph& g, const EdgeColouring& c, int r,
                                           std::size_t cap = kDefaultConflictCap) {
  if (r < 1) throw ArgumentError("find_conflicts: r must be >= 1");
  auto w = weight_profile(g, c);
  detail::ConflictCollector out(cap);
  for (Vertex u = 0; u < g.n(); ++u) {
    for (Vertex v = u + 1; v < g.n(); ++v) {
      if (w[u] != w[v]) continue;
      const auto d = distance(g, u, v);
      if (d != kInfinity && d <= static_cast<std::size_t>(r)) out.add(u, v, w[u]);
    }
  }
  return out.finish();
}

/// Colours all in [1, k] and no conflicting r-neighbours.
inline bool is_r_irregular(const Graph& g, std::span<const Colour> colours, int r, Colour k) {
  if (r < 1) throw ArgumentError("is_r_irregular: r must be >= 1");
  if (k < 1) throw ArgumentError("is_r_irregular: k must be >= 1");
  check_covers(g, colours);
  for (Colour x : colours) {
    if (x < 1 || x > k) return false;
  }
  auto w = weight_profile(g, colours);
  return find_conflicts(g, std::span<const Weight>(w), r, 0).is_valid();
}

inline bool is_r_irregular(const Graph& g, const EdgeColouring& c, int r, Colour k) {
  return is_r_irregular(g, std::span<const Colour>(c.colours), r, k);
}

/// Colouring under single-edge edits with a running count of conflicting
/// r-neighbour pairs. Only the two endpoint weights move on an edit.
class IncrementalVerifier {
 public:
  IncrementalVerifier(const Graph& g, const BallCache& balls, EdgeColouring c)
      : g_(&g), balls_(&balls), colouring_(std::move(c)) {
    check_covers(g, colouring_.colours);
    check_weight_capacity(g.max_degree(), colouring_.k_max);
    weights_ = weight_profile(g, colouring_);
    conflicts_ = find_conflicts(balls, weights_, 0).total;
  }

  void set_colour(EdgeId e, Colour c) {
    if (c < 1 || c > colouring_.k_max) throw ArgumentError("set_colour: colour outside [1, k_max]");
    const auto [u, v] = g_->edge(e);
    const Weight delta = c - colouring_.colours[e];
    if (delta == 0) return;
    conflicts_ -= touching(u, v);
    weights_[u] += delta;
    weights_[v] += delta;
    colouring_.colours[e] = c;
    conflicts_ += touching(u, v);
  }

  std::size_t conflict_count() const noexcept { return conflicts_; }
  bool is_valid() const noexcept { return conflicts_ == 0; }
  const std::vector<Weight>& weights() const noexcept { return weights_; }
  const EdgeColouring& colouring() const noexcept { return colouring_; }

 private:
  // Conflicting pairs with at least one end in {u, v}, each counted once.
  std::size_t touching(Vertex u, Vertex v) const {
    std::size_t count = 0;
    for (Vertex x : balls_->members(u)) count += weights_[x] == weights_[u];
    for (Vertex x : balls_->members(v)) {
      if (x != u) count += weights_[x] == weights_[v];
    }
    return count;
  }

  const Graph* g_;
  const BallCache* balls_;
  EdgeColouring colouring_;
  std::vector<Weight> weights_;
  std::size_t conflicts_ = 0;
};

/// Reads the "u v colour" format against g. Every graph edge must appear once.
inline EdgeColouring parse_colouring(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, Vertex> ids;
  for (Vertex v = 0; v < g.n(); ++v) ids.emplace(g.label(v), v);
  std::vector<Colour> colours(g.m(), 0);
  std::string line;
  std::size_t lineno = 0;
  Colour ceiling = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) throw ParseError(lineno, "expected \"u v colour\"");
    auto iu = ids.find(tokens[0]);
    auto iv = ids.find(tokens[1]);
    if (iu == ids.end() || iv == ids.end()) throw ParseError(lineno, "unknown vertex");
    auto e = g.find_edge(iu->second, iv->second);
    if (!e) throw ParseError(lineno, "not an edge of the graph: " + tokens[0] + " " + tokens[1]);
    Colour c = 0;
    try {
      std::size_t used = 0;
      c = std::stoll(tokens[2], &used);
      if (used != tokens[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad colour '" + tokens[2] + "'");
    }
    if (c < 1) throw ParseError(lineno, "colour must be positive");
    if (colours[*e] != 0) throw ParseError(lineno, "edge listed twice");
    colours[*e] = c;
    ceiling = std::max(ceiling, c);
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (colours[e] == 0) throw ParseError(0, "edge " + g.label(g.edge(e).u) + " " + g.label(g.edge(e).v) + " has no colour");
  }
  return EdgeColouring(std::move(colours), ceiling);
}

inline void write_colouring(std::ostream& out, const Graph& g, const EdgeColouring& c) {
  check_covers(g, c.colours);
  for (EdgeId e = 0; e < g.m(); ++e) {
    out << g.label(g.edge(e).u) << ' ' << g.label(g.edge(e).v) << ' ' << c.colours[e] << '\n';
  }
}

}  // namespace rdist
