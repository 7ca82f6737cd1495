#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "rdist/colouring.hpp"
#include "rdist/distance.hpp"
#include "rdist/exact.hpp"
#include "rdist/palette.hpp"
#include "rdist/rng.hpp"

namespace rdist {

struct OrderPolicy {
  enum class Kind { AscendingDegree, DescendingDegree, Random } kind = Kind::AscendingDegree;
  std::uint64_t seed = 0;

  static OrderPolicy ascending() { return {Kind::AscendingDegree, 0}; }
  static OrderPolicy descending() { return {Kind::DescendingDegree, 0}; }
  static OrderPolicy random(std::uint64_t seed) { return {Kind::Random, seed}; }

  std::string name() const {
    switch (kind) {
      case Kind::AscendingDegree: return "asc";
      case Kind::DescendingDegree: return "desc";
      case Kind::Random: return "random:" + std::to_string(seed);
    }
    return "?";
  }
};

inline std::vector<Vertex> vertex_order(const Graph& g, const OrderPolicy& policy) {
  std::vector<Vertex> order(g.n());
  std::iota(order.begin(), order.end(), Vertex{0});
  switch (policy.kind) {
    case OrderPolicy::Kind::AscendingDegree:
      std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
      break;
    case OrderPolicy::Kind::DescendingDegree:
      std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
      break;
    case OrderPolicy::Kind::Random: {
      // Fisher-Yates with our own index draws so the permutation does not
      // depend on the standard library's shuffle implementation.
      Rng rng = Rng(policy.seed).split(streams::kGreedyOrder);
      for (std::size_t i = order.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
        std::swap(order[i - 1], order[j]);
      }
      break;
    }
  }
  return order;
}

struct GreedyResult {
  std::optional<EdgeColouring> colouring;
  Colour k = 0;
  std::vector<Vertex> order_used;
  std::size_t conflicts_final = 0;
  std::optional<Vertex> stuck_at;  // first vertex that could not be separated

  bool success() const noexcept { return colouring.has_value(); }
};

using GreedyObserver = std::function<void(Vertex, const std::vector<Weight>&)>;

/// Sequential heuristic. Every edge starts at ceil(k/2); each vertex in turn
/// moves its weight by the smallest change that avoids the weights of
/// already-fixed r-neighbours (processed, or with no free edge left),
/// spending that change on its edges to unprocessed vertices (edge-index
/// order). Processed vertices never change.
///
/// Refinements on how a change is split across forward edges:
///  - a forward neighbour whose only free edge is this one has its final
///    weight decided here, so it must also avoid its fixed r-neighbours;
///  - two adjacent vertices about to share their last free edge keep their
///    weight difference for good, so it must not become zero;
///  - other forward neighbours are nudged apart from each other and from v
///    when the split allows it.
/// Without them, e.g. K3 fails at every k: the last two vertices share one
/// free edge and identical fixed contributions.
///
/// `on_step`, when set, is called after each vertex with the current weights.
inline GreedyResult greedy_colour(const Graph& g, const BallCache& balls, Colour k, const OrderPolicy& policy,
                                  const GreedyObserver& on_step = {}) {
  if (k < 1) throw ArgumentError("greedy_colour: k must be >= 1");
  require_defined(g);
  check_weight_capacity(g.max_degree(), k);

  GreedyResult res;
  res.k = k;
  res.order_used = vertex_order(g, policy);
  std::vector<Colour> colours(g.m(), (k + 1) / 2);
  std::vector<Weight> weights = weight_profile(g, colours);
  std::vector<char> done(g.n(), 0);
  std::vector<std::size_t> free_edges(g.n());
  for (Vertex v = 0; v < g.n(); ++v) free_edges[v] = g.degree(v);

  struct Slot {
    EdgeId edge;
    Vertex other;
    Weight lo, hi;    // admissible colour change on this edge
    bool determined;  // `other` has no free edge besides this one
    std::optional<Vertex> partner;  // `other` will share its last free edge with this vertex
  };
  std::vector<Slot> slots;
  std::vector<Weight> delta;
  std::vector<Weight> suffix_lo, suffix_hi;
  std::unordered_set<Weight> taken;

  // A vertex with no free edge left has its final weight even before its turn.
  auto fixed = [&](Vertex x) { return done[x] || free_edges[x] == 0; };
  auto processed_weight_clash = [&](Vertex u, Weight w) {
    for (Vertex x : balls.members(u)) {
      if (fixed(x) && weights[x] == w) return true;
    }
    return false;
  };

  // Splits `change` across the slots; false if a determined neighbour cannot be placed.
  auto realize = [&](Weight change, Weight target) {
    Weight left = change;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& s = slots[i];
      const bool hard = s.determined || s.partner;
      std::optional<Weight> partner_weight;
      if (s.partner) {
        partner_weight = weights[*s.partner];
        for (std::size_t j = 0; j < slots.size(); ++j) {
          if (slots[j].other != *s.partner) continue;
          if (j < i) *partner_weight += delta[j];
          else partner_weight.reset();  // checked from the partner's side
        }
      }
      const Weight lo = std::max(s.lo, left - suffix_hi[i + 1]);
      const Weight hi = std::min(s.hi, left - suffix_lo[i + 1]);
      const Weight natural = std::clamp(left, lo, hi);
      // Hard: a determined neighbour's weight is final, and a locked pair must
      // differ. Soft: keep forward neighbours apart from v and from each other.
      auto hard_ok = [&](Weight d) {
        const Weight wu = weights[s.other] + d;
        if (partner_weight && wu == *partner_weight) return false;
        if (!s.determined) return true;
        if (wu == target) return false;
        for (std::size_t j = 0; j < i; ++j) {
          const auto& t = slots[j];
          if (t.determined && weights[t.other] + delta[j] == wu && balls.contains(s.other, t.other)) return false;
        }
        return !processed_weight_clash(s.other, wu);
      };
      auto soft_ok = [&](Weight d) {
        const Weight wu = weights[s.other] + d;
        if (wu == target) return false;
        for (std::size_t j = 0; j < i; ++j) {
          if (weights[slots[j].other] + delta[j] == wu && balls.contains(s.other, slots[j].other)) return false;
        }
        return true;
      };
      auto search = [&](auto ok, Weight reach) -> std::optional<Weight> {
        for (Weight off = 0; off <= reach; ++off) {
          if (natural + off <= hi && ok(natural + off)) return natural + off;
          if (off > 0 && natural - off >= lo && ok(natural - off)) return natural - off;
        }
        return std::nullopt;
      };
      // The soft preference only looks nearby unless a hard constraint applies.
      std::optional<Weight> pick =
          search([&](Weight d) { return hard_ok(d) && soft_ok(d); }, hard ? hi - lo : std::min<Weight>(2, hi - lo));
      if (!pick && hard) pick = search(hard_ok, hi - lo);
      if (!pick) {
        if (hard) return false;
        pick = natural;
      }
      delta[i] = *pick;
      left -= *pick;
    }
    return left == 0;
  };

  for (Vertex v : res.order_used) {
    taken.clear();
    for (Vertex u : balls.members(v)) {
      if (fixed(u)) taken.insert(weights[u]);
    }
    slots.clear();
    for (const auto& inc : g.neighbours(v)) {
      if (done[inc.neighbour]) continue;
      const Colour c = colours[inc.edge];
      slots.push_back({inc.edge, inc.neighbour, 1 - c, k - c, free_edges[inc.neighbour] == 1, std::nullopt});
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.edge < b.edge; });
    // Two adjacent vertices left with one shared free edge keep their weight
    // difference for good; it must not be zero.
    for (auto& s : slots) {
      if (free_edges[s.other] != 2) continue;
      for (const auto& inc : g.neighbours(s.other)) {
        const Vertex z = inc.neighbour;
        if (z == v || done[z]) continue;
        const bool z_is_slot =
            std::any_of(slots.begin(), slots.end(), [&](const Slot& o) { return o.other == z; });
        if (free_edges[z] - (z_is_slot ? 1 : 0) == 1) s.partner = z;
      }
    }
    delta.assign(slots.size(), 0);
    suffix_lo.assign(slots.size() + 1, 0);
    suffix_hi.assign(slots.size() + 1, 0);
    for (std::size_t i = slots.size(); i-- > 0;) {
      suffix_lo[i] = suffix_lo[i + 1] + slots[i].lo;
      suffix_hi[i] = suffix_hi[i + 1] + slots[i].hi;
    }
    const Weight down = -suffix_lo[0], up = suffix_hi[0];

    bool placed = false;
    for (Weight step = 0; step <= std::max(up, down) && !placed; ++step) {
      for (int sign : {1, -1}) {
        if (step == 0 && sign < 0) continue;
        const Weight change = sign * step;
        if (change > up || -change > down) continue;
        const Weight target = weights[v] + change;
        if (taken.contains(target)) continue;
        if (realize(change, target)) {
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      if (!res.stuck_at) res.stuck_at = v;
    } else {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        colours[slots[i].edge] += delta[i];
        weights[v] += delta[i];
        weights[slots[i].other] += delta[i];
      }
    }
    done[v] = 1;
    for (const auto& inc : g.neighbours(v)) --free_edges[inc.neighbour];
    free_edges[v] = 0;
    if (on_step) on_step(v, weights);
  }

  res.conflicts_final = find_conflicts(balls, weights, 0).total;
  if (!res.stuck_at) {
    EdgeColouring c(std::move(colours), k);
    if (!is_r_irregular(g, c, balls.radius(), k)) throw std::logic_error("greedy produced an invalid colouring");
    res.colouring = std::move(c);
  }
  return res;
}

inline GreedyResult greedy_colour(const Graph& g, int r, Colour k, const OrderPolicy& policy) {
  BallCache balls(g, r);
  return greedy_colour(g, balls, k, policy);
}

struct GreedyEstimate {
  std::optional<Colour> k;  // empty when no k <= bound succeeded
  Colour bound = 0;         // 6Δ^{r-1}
  OrderPolicy policy;
  std::optional<EdgeColouring> colouring;

  bool exceeded() const noexcept { return !k.has_value(); }
};

/// Smallest k <= 6Δ^{r-1} at which greedy succeeds under any of the three
/// order policies (ascending, descending, random with `seed`).
inline GreedyEstimate greedy_strength_estimate(const Graph& g, int r, std::uint64_t seed = 0) {
  require_defined(g);
  if (r < 1) throw ArgumentError("greedy_strength_estimate: r must be >= 1");
  BallCache balls(g, r);
  GreedyEstimate est;
  const auto delta = std::max<std::int64_t>(2, static_cast<std::int64_t>(g.max_degree()));
  est.bound = 6 * checked_pow(delta, r - 1);
  const OrderPolicy policies[] = {OrderPolicy::ascending(), OrderPolicy::descending(), OrderPolicy::random(seed)};
  const Colour start = degree_classes_separated(g, r) ? 1 : std::max<Colour>(2, degree_class_lower_bound(g, r));
  for (Colour k = start; k <= est.bound; ++k) {
    for (const auto& p : policies) {
      auto res = greedy_colour(g, balls, k, p);
      if (res.success()) {
        est.k = k;
        est.policy = p;
        est.colouring = std::move(res.colouring);
        return est;
      }
    }
  }
  return est;
}

}  // namespace rdist
