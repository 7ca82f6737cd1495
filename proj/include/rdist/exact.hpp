#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rdist/colouring.hpp"
#include "rdist/distance.hpp"
#include "rdist/error.hpp"
#include "rdist/graph.hpp"

namespace rdist {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

enum class SearchOutcome { Found, None, BudgetExceeded };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::None;
  std::optional<EdgeColouring> witness;
  std::uint64_t nodes = 0;
};

inline void require_defined(const Graph& g) {
  if (has_isolated_edge(g)) throw ProblemUndefined("s_r is undefined: graph has an isolated edge");
}

/// Backtracking search for an r-distant irregular colouring with palette {1..k}.
///
/// Edges are coloured in a fixed order chosen so that vertices get all of
/// their incident edges early; whenever a vertex's last edge is coloured its
/// weight is compared against the already-finalized r-neighbours.
class ExactSearch {
 public:
  ExactSearch(const Graph& g, int r) : g_(&g), r_(r), balls_(g, r < 1 ? 1 : r) {
    if (r < 1) throw ArgumentError("exact search: r must be >= 1");
    require_defined(g);
    order_edges();
  }

  const std::vector<EdgeId>& edge_order() const noexcept { return order_; }

  SearchResult run(Colour k, std::uint64_t budget = kDefaultNodeBudget) {
    if (k < 1) throw ArgumentError("exact search: k must be >= 1");
    check_weight_capacity(g_->max_degree(), k);
    k_ = k;
    budget_ = budget;
    nodes_ = 0;
    exceeded_ = false;
    colours_.assign(g_->m(), 0);
    weights_.assign(g_->n(), 0);

    SearchResult out;
    if (dfs(0)) {
      out.outcome = SearchOutcome::Found;
      EdgeColouring c(colours_, k);
      if (!is_r_irregular(*g_, c, r_, k)) throw std::logic_error("exact search produced an invalid witness");
      out.witness = std::move(c);
    } else {
      out.outcome = exceeded_ ? SearchOutcome::BudgetExceeded : SearchOutcome::None;
    }
    out.nodes = nodes_;
    return out;
  }

 private:
  void order_edges() {
    const auto m = g_->m();
    std::vector<char> used(m, 0);
    std::vector<char> touched(g_->n(), 0);
    std::vector<std::size_t> remaining(g_->n());
    for (Vertex v = 0; v < g_->n(); ++v) remaining[v] = g_->degree(v);

    if (g_->n() > 0) {
      Vertex start = 0;
      for (Vertex v = 1; v < g_->n(); ++v) {
        if (g_->degree(v) > g_->degree(start)) start = v;
      }
      touched[start] = 1;
    }
    order_.reserve(m);
    for (std::size_t step = 0; step < m; ++step) {
      EdgeId best = 0;
      int best_final = -1, best_touch = -1;
      std::size_t best_rem = 0;
      for (EdgeId e = 0; e < m; ++e) {
        if (used[e]) continue;
        const auto [u, v] = g_->edge(e);
        int fin = (remaining[u] == 1) + (remaining[v] == 1);
        int touch = touched[u] + touched[v];
        std::size_t rem = std::min(remaining[u], remaining[v]);
        bool better = best_final < 0 || fin > best_final || (fin == best_final && touch > best_touch) ||
                      (fin == best_final && touch == best_touch && rem < best_rem);
        if (better) {
          best = e;
          best_final = fin;
          best_touch = touch;
          best_rem = rem;
        }
      }
      used[best] = 1;
      order_.push_back(best);
      const auto [u, v] = g_->edge(best);
      touched[u] = touched[v] = 1;
      --remaining[u];
      --remaining[v];
    }

    // Position at which each vertex becomes finalized.
    std::vector<std::size_t> final_pos(g_->n(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const auto [u, v] = g_->edge(order_[i]);
      final_pos[u] = i;
      final_pos[v] = i;
    }
    checks_.assign(m, {});
    for (Vertex x = 0; x < g_->n(); ++x) {
      if (g_->degree(x) == 0) continue;
      FinalCheck fc{x, {}};
      for (Vertex y : balls_.members(x)) {
        if (final_pos[y] < final_pos[x] || (final_pos[y] == final_pos[x] && y < x)) fc.against.push_back(y);
      }
      checks_[final_pos[x]].push_back(std::move(fc));
    }
  }

  bool dfs(std::size_t depth) {
    if (depth == order_.size()) return true;
    const EdgeId e = order_[depth];
    const auto [u, v] = g_->edge(e);
    for (Colour c = 1; c <= k_; ++c) {
      if (++nodes_ > budget_) {
        exceeded_ = true;
        return false;
      }
      colours_[e] = c;
      weights_[u] += c;
      weights_[v] += c;
      if (consistent(depth) && dfs(depth + 1)) return true;
      weights_[u] -= c;
      weights_[v] -= c;
      colours_[e] = 0;
      if (exceeded_) return false;
    }
    return false;
  }

  bool consistent(std::size_t depth) const {
    for (const auto& fc : checks_[depth]) {
      for (Vertex y : fc.against) {
        if (weights_[y] == weights_[fc.vertex]) return false;
      }
    }
    return true;
  }

  struct FinalCheck {
    Vertex vertex;
    std::vector<Vertex> against;
  };

  const Graph* g_;
  int r_;
  BallCache balls_;
  std::vector<EdgeId> order_;
  std::vector<std::vector<FinalCheck>> checks_;

  Colour k_ = 1;
  std::uint64_t budget_ = 0;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  std::vector<Colour> colours_;
  std::vector<Weight> weights_;
};

inline SearchResult exists_colouring(const Graph& g, int r, Colour k, std::uint64_t budget = kDefaultNodeBudget) {
  return ExactSearch(g, r).run(k, budget);
}

/// Least k for which every degree-d vertex set that is pairwise within distance r
/// fits into the d(k-1)+1 weights available to degree-d vertices. The sets are
/// grown greedily from each vertex, so the bound is valid but not tight.
inline Colour degree_class_lower_bound(const Graph& g, int r) {
  if (r < 1) throw ArgumentError("degree_class_lower_bound: r must be >= 1");
  BallCache balls(g, r);
  Colour best = 1;
  std::vector<Vertex> clique;
  for (Vertex v = 0; v < g.n(); ++v) {
    const auto d = g.degree(v);
    if (d == 0) continue;
    clique.assign(1, v);
    for (Vertex u : balls.members(v)) {
      if (g.degree(u) != d) continue;
      bool close = std::all_of(clique.begin(), clique.end(), [&](Vertex w) { return balls.contains(w, u); });
      if (close) clique.push_back(u);
    }
    const auto s = static_cast<Colour>(clique.size());
    const auto dd = static_cast<Colour>(d);
    const Colour k = (s - 1 + dd - 1) / dd + 1;  // least k with d*k - d + 1 >= s
    best = std::max(best, k);
  }
  return best;
}

/// true when no vertex has an r-neighbour of the same degree, i.e. the
/// all-ones colouring is already valid.
inline bool degree_classes_separated(const Graph& g, int r) {
  BallCache balls(g, r);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (Vertex u : balls.members(v)) {
      if (g.degree(u) == g.degree(v)) return false;
    }
  }
  return true;
}

enum class ExactStatus { Solved, AboveKmax, BudgetExceeded };

struct ExactResult {
  ExactStatus status = ExactStatus::AboveKmax;
  std::optional<Colour> strength;
  std::optional<EdgeColouring> witness;
  Colour start_k = 1;  // palettes below this were excluded by the lower bound
  std::uint64_t nodes = 0;
  std::chrono::milliseconds elapsed{0};
};

/// s_r(G) by ascending search over k, starting from the lower bound.
inline ExactResult exact_strength(const Graph& g, int r, Colour k_max, std::uint64_t budget = kDefaultNodeBudget) {
  const auto t0 = std::chrono::steady_clock::now();
  ExactSearch search(g, r);
  ExactResult res;
  res.start_k = degree_classes_separated(g, r) ? 1 : std::max<Colour>(2, degree_class_lower_bound(g, r));
  std::uint64_t remaining = budget;
  for (Colour k = res.start_k; k <= k_max; ++k) {
    auto probe = search.run(k, remaining);
    res.nodes += probe.nodes;
    remaining -= std::min(remaining, probe.nodes);
    if (probe.outcome == SearchOutcome::Found) {
      res.status = ExactStatus::Solved;
      res.strength = k;
      res.witness = std::move(probe.witness);
      break;
    }
    if (probe.outcome == SearchOutcome::BudgetExceeded) {
      res.status = ExactStatus::BudgetExceeded;
      break;
    }
  }
  res.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  return res;
}

/// n/d + (d-1)/d for a d-regular graph, kept as an exact fraction.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  std::int64_t ceil() const { return (num + den - 1) / den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
};

inline Rational regular_counting_lower_bound(const Graph& g) {
  if (!is_regular(g)) throw ArgumentError("regular_counting_lower_bound: graph is not regular");
  const auto d = static_cast<std::int64_t>(g.max_degree());
  if (d < 1) throw ArgumentError("regular_counting_lower_bound: degree must be >= 1");
  std::int64_t num = static_cast<std::int64_t>(g.n()) + d - 1;
  std::int64_t den = d;
  const auto gcd = std::gcd(num, den);
  return {num / gcd, den / gcd};
}

}  // namespace rdist
