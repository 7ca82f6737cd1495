#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "rdist/colouring.hpp"
#include "rdist/cset.hpp"
#include "rdist/distance.hpp"
#include "rdist/error.hpp"
#include "rdist/exact.hpp"
#include "rdist/graph.hpp"
#include "rdist/ordering.hpp"
#include "rdist/palette.hpp"
#include "rdist/rng.hpp"

namespace rdist {

// The randomized A/B/C construction.
//
// Vertices are processed along a random order. Each A- and B-vertex v fixes a
// two-element list W_v = {lo, lo + Q} from the family of integer pairs with
// lo mod 2Q in [0, Q); these pairs partition the integers, so two vertices
// holding different pairs can never have equal weight. A vertex may change
// its forward edges by +[0, q] and its backward edges by ±Q, the sign chosen
// so the earlier endpoint's weight moves to the other element of its pair.
// A-pairs are 0 mod 3 and C-weights are made non-zero mod 3, which keeps A
// and C apart; C-vertices are handled last with ±Q toggles on A-C edges.

enum class Stage { Init, ADone, BDone, EPrimeDone, BFixed, CDone };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Init: return "init";
    case Stage::ADone: return "stage_A";
    case Stage::BDone: return "stage_B";
    case Stage::EPrimeDone: return "e_prime";
    case Stage::BFixed: return "fix_B";
    case Stage::CDone: return "stage_C";
  }
  return "?";
}

/// Lower element of the pair containing w: w itself when w mod 2Q < Q, else w - Q.
inline Weight pair_low(Weight w, std::int64_t Q) {
  const Weight m = ((w % (2 * Q)) + 2 * Q) % (2 * Q);
  return m < Q ? w : w - Q;
}

inline std::int64_t mod3(std::int64_t x) { return ((x % 3) + 3) % 3; }

struct StageFailure {
  std::string stage;
  std::string reason;
  std::optional<Vertex> vertex;
  std::vector<std::pair<Vertex, std::int64_t>> residues;  // residue-count violations (v, t)
};

/// Counters for one sequential stage.
struct StageStats {
  std::size_t processed = 0;
  std::size_t max_forbidden = 0;    // most distinct pairs/weights a vertex had to avoid
  std::size_t max_candidates = 0;   // most candidate sums / pairs seen at one vertex
  std::size_t backward_toggles = 0;  // ±Q changes applied
  std::size_t forbidden_over_backward = 0;  // vertices whose forbidden count exceeded d_-^r (must stay 0)
  std::size_t f6_bound_exceeded = 0;         // B-vertices whose forbidden count exceeded the F6 bound
};

struct ConstructState {
  const Graph* graph = nullptr;
  const BallCache* balls = nullptr;
  PaletteParams palette;
  ThresholdProfile profile;
  FeatureConfig features;
  OrderedPartition partition;
  std::vector<Colour> colours;
  std::vector<Weight> weights;
  std::vector<std::optional<Weight>> pair;  // lower element of W_v
  SparseCSet e_prime;
  Stage stage = Stage::Init;
  StageStats stats_A, stats_B, stats_C;
  std::size_t fix_B_changes = 0;

  /// Every edge at Q + q; no pairs assigned.
  static ConstructState init(const Graph& g, const BallCache& balls, const PaletteParams& palette,
                             const ThresholdProfile& profile, OrderedPartition partition) {
    if (partition.x.size() != g.n()) throw ArgumentError("construct: partition size differs from graph");
    if (balls.radius() != palette.r) throw ArgumentError("construct: ball cache radius differs from r");
    ConstructState s;
    s.graph = &g;
    s.balls = &balls;
    s.palette = palette;
    s.profile = profile;
    s.features = FeatureConfig::make(g, palette.r, profile);
    s.partition = std::move(partition);
    s.colours.assign(g.m(), palette.Q + palette.q);
    s.weights = weight_profile(g, s.colours);
    s.pair.assign(g.n(), std::nullopt);
    s.e_prime.member.assign(g.m(), 0);
    s.e_prime.degree.assign(g.n(), 0);
    return s;
  }

  const Graph& g() const { return *graph; }
  Part label(Vertex v) const { return partition.label[v]; }

  void add(EdgeId e, Weight delta) {
    colours[e] += delta;
    const auto [u, v] = graph->edge(e);
    weights[u] += delta;
    weights[v] += delta;
  }

  void require_stage(Stage expected, const char* op) const {
    if (stage != expected) {
      throw std::logic_error(std::string(op) + ": expected stage " + stage_name(expected) + ", at " + stage_name(stage));
    }
  }

  /// Vertices of one part in processing order.
  std::vector<Vertex> in_order(Part p) const {
    std::vector<Vertex> out;
    for (Vertex v : partition.order) {
      if (partition.label[v] == p) out.push_back(v);
    }
    return out;
  }
};

namespace detail {

struct Toggle {
  EdgeId edge;
  Weight delta;  // +Q or -Q
};

// Backward edges of v split by the direction that keeps the earlier end in its pair.
inline void backward_toggles(const ConstructState& s, Vertex v, const std::vector<Part>& allowed,
                             std::vector<EdgeId>& plus, std::vector<EdgeId>& minus) {
  plus.clear();
  minus.clear();
  for (const auto& inc : s.g().neighbours(v)) {
    const Vertex u = inc.neighbour;
    if (!s.partition.precedes(u, v)) continue;
    if (std::find(allowed.begin(), allowed.end(), s.label(u)) == allowed.end()) continue;
    if (!s.pair[u]) throw std::logic_error("backward neighbour without an assigned pair");
    if (s.weights[u] == *s.pair[u]) {
      plus.push_back(inc.edge);
    } else if (s.weights[u] == *s.pair[u] + s.palette.Q) {
      minus.push_back(inc.edge);
    } else {
      throw std::logic_error("assigned vertex left its pair");
    }
  }
}

// Applies j toggles (j > 0 from `plus`, j < 0 from `minus`), lowest edge ids first.
inline void apply_toggles(ConstructState& s, std::int64_t j, const std::vector<EdgeId>& plus,
                          const std::vector<EdgeId>& minus, StageStats& stats) {
  const auto& pick = j > 0 ? plus : minus;
  const auto count = static_cast<std::size_t>(j > 0 ? j : -j);
  for (std::size_t i = 0; i < count; ++i) s.add(pick[i], j > 0 ? s.palette.Q : -s.palette.Q);
  stats.backward_toggles += count;
}

// Offsets 0, 1, -1, 2, -2, ... restricted to [-down, up].
template <class Fn>
bool for_each_offset(std::int64_t down, std::int64_t up, Fn&& fn) {
  for (std::int64_t step = 0; step <= std::max(up, down); ++step) {
    if (step <= up && fn(step)) return true;
    if (step > 0 && step <= down && fn(-step)) return true;
  }
  return false;
}

// Shared body of stages A and B for one vertex.
inline std::optional<StageFailure> assign_pair(ConstructState& s, Vertex v, bool zero_mod_3, StageStats& stats,
                                               const char* stage) {
  const auto& g = s.g();
  const auto Q = s.palette.Q, q = s.palette.q;
  std::vector<EdgeId> plus, minus, forward;
  backward_toggles(s, v, {Part::A, Part::B}, plus, minus);
  for (const auto& inc : g.neighbours(v)) {
    if (s.partition.precedes(v, inc.neighbour)) forward.push_back(inc.edge);
  }
  std::sort(forward.begin(), forward.end());

  std::unordered_set<Weight> forbidden;
  std::size_t backward_r = 0;
  for (Vertex u : s.balls->members(v)) {
    if (!s.partition.precedes(u, v)) continue;
    ++backward_r;
    if (s.pair[u]) forbidden.insert(*s.pair[u]);
  }
  stats.max_forbidden = std::max(stats.max_forbidden, forbidden.size());
  if (forbidden.size() > backward_r) ++stats.forbidden_over_backward;
  if (s.label(v) == Part::B) {
    const double d = static_cast<double>(g.degree(v));
    const double D = static_cast<double>(s.features.delta_pow);
    const double xv = s.partition.x[v];
    if (static_cast<double>(forbidden.size()) > xv * d * D + std::sqrt(xv * d * D) * s.profile.deviation) {
      ++stats.f6_bound_exceeded;
    }
  }

  const Weight span = static_cast<Weight>(forward.size()) * q;
  const Weight w0 = s.weights[v];
  std::optional<std::pair<std::int64_t, Weight>> chosen;  // (toggle count j, forward addition x)
  std::unordered_set<Weight> seen_pairs;
  for_each_offset(static_cast<std::int64_t>(minus.size()), static_cast<std::int64_t>(plus.size()), [&](std::int64_t j) {
    const Weight base = w0 + j * Q;
    for (Weight x = 0; x <= span; ++x) {
      const Weight lo = pair_low(base + x, Q);
      if (zero_mod_3 && mod3(lo) != 0) continue;
      seen_pairs.insert(lo);
      if (forbidden.contains(lo)) continue;
      chosen = std::make_pair(j, x);
      return true;
    }
    return false;
  });
  stats.max_candidates = std::max(stats.max_candidates, seen_pairs.size());
  if (!chosen) {
    return StageFailure{stage, "no admissible pair: " + std::to_string(forbidden.size()) + " blocked of " +
                                   std::to_string(seen_pairs.size()) + " reachable",
                        v, {}};
  }

  apply_toggles(s, chosen->first, plus, minus, stats);
  Weight left = chosen->second;
  for (EdgeId e : forward) {
    const Weight add = std::min(left, q);
    if (add > 0) s.add(e, add);
    left -= add;
  }
  if (s.weights[v] != w0 + chosen->first * Q + chosen->second) throw std::logic_error("stage sum reconstruction");
  s.pair[v] = pair_low(s.weights[v], Q);
  ++stats.processed;
  return std::nullopt;
}

}  // namespace detail

/// A-vertices in order; each takes a pair with elements 0 mod 3 that no
/// backward r-neighbour holds.
inline std::optional<StageFailure> run_stage_A(ConstructState& s) {
  s.require_stage(Stage::Init, "run_stage_A");
  for (Vertex v : s.in_order(Part::A)) {
    if (auto f = detail::assign_pair(s, v, true, s.stats_A, "stage_A")) return f;
  }
  s.stage = Stage::ADone;
  return std::nullopt;
}

/// B-vertices in order; as stage A without the residue requirement.
inline std::optional<StageFailure> run_stage_B(ConstructState& s) {
  s.require_stage(Stage::ADone, "run_stage_B");
  for (Vertex v : s.in_order(Part::B)) {
    if (auto f = detail::assign_pair(s, v, false, s.stats_B, "stage_B")) return f;
  }
  s.stage = Stage::BDone;
  return std::nullopt;
}

/// Adds 0, 1 or 2 to E' edges (ascending id) so that every C-weight ends up
/// non-zero mod 3. An edge that is the last E'-edge of an endpoint fixes that
/// endpoint's residue; with two such endpoints at most two of three values are
/// excluded.
inline std::optional<StageFailure> adjust_cset_mod3(ConstructState& s, const SparseCSet& e_prime) {
  s.require_stage(Stage::BDone, "adjust_cset_mod3");
  const auto& g = s.g();
  for (Vertex v = 0; v < g.n(); ++v) {
    if (s.label(v) == Part::C && e_prime.degree[v] == 0) {
      return StageFailure{"e_prime", "C-vertex without an E' edge", v, {}};
    }
  }

  auto attempt = [&](const std::vector<EdgeId>& order) -> std::optional<Vertex> {
    std::vector<std::size_t> last(g.n(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      last[g.edge(order[i]).u] = i;
      last[g.edge(order[i]).v] = i;
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto [u, v] = g.edge(order[i]);
      std::optional<Weight> pick;
      for (Weight a = 0; a <= 2 && !pick; ++a) {
        const bool ok_u = last[u] != i || mod3(s.weights[u] + a) != 0;
        const bool ok_v = last[v] != i || mod3(s.weights[v] + a) != 0;
        if (ok_u && ok_v) pick = a;
      }
      if (!pick) return u;
      if (*pick) s.add(order[i], *pick);
    }
    return std::nullopt;
  };

  const auto saved_colours = s.colours;
  const auto saved_weights = s.weights;
  auto blocked = attempt(e_prime.edges);
  if (blocked) {
    s.colours = saved_colours;
    s.weights = saved_weights;
    std::vector<EdgeId> reversed(e_prime.edges.rbegin(), e_prime.edges.rend());
    blocked = attempt(reversed);
    if (blocked) return StageFailure{"e_prime", "mod-3 adjustment dead end after reordering", *blocked, {}};
  }
  s.e_prime = e_prime;
  return std::nullopt;
}

inline constexpr double kResidueCountFactor = 5.0;

/// Residue-count condition on C: for v in C and t in [0, Q) with t != 0 mod 3,
/// the C r-neighbours u of v with d(v)/W <= d(u) <= W d(v) (W = 5L) and
/// weight = t mod Q number at most 5 d(v) / t_l.
inline std::vector<std::pair<Vertex, std::int64_t>> residue_count_violations(const ConstructState& s) {
  const auto& g = s.g();
  const auto Q = s.palette.Q;
  const double window = s.profile.degree_window;
  std::vector<std::uint32_t> count(static_cast<std::size_t>(Q), 0);
  std::vector<std::int64_t> touched;
  std::vector<std::pair<Vertex, std::int64_t>> out;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (s.label(v) != Part::C) continue;
    const double dv = static_cast<double>(g.degree(v));
    const double bound = kResidueCountFactor * dv / s.profile.t_l;
    touched.clear();
    for (Vertex u : s.balls->members(v)) {
      if (s.label(u) != Part::C) continue;
      const double du = static_cast<double>(g.degree(u));
      if (du * window < dv || du > window * dv) continue;
      const auto t = ((s.weights[u] % Q) + Q) % Q;
      if (count[static_cast<std::size_t>(t)]++ == 0) touched.push_back(t);
    }
    std::sort(touched.begin(), touched.end());
    for (auto t : touched) {
      if (mod3(t) != 0 && static_cast<double>(count[static_cast<std::size_t>(t)]) > bound) out.emplace_back(v, t);
      count[static_cast<std::size_t>(t)] = 0;
    }
  }
  return out;
}

struct SubtractionOutcome {
  int rounds = 0;
  std::optional<StageFailure> failure;
};

/// Subtracts a uniform element of {0, 3, ..., Q-3} from every E' edge, then
/// redraws the subtractions on E' edges within `radius` (default 2r+1) of each
/// vertex violating the residue-count condition, up to max_rounds times.
inline SubtractionOutcome random_subtract_cset(ConstructState& s, Rng& rng, int max_rounds, int radius = 0) {
  s.require_stage(Stage::BDone, "random_subtract_cset");
  if (max_rounds < 1) throw ArgumentError("random_subtract_cset: max_rounds must be >= 1");
  const auto& g = s.g();
  const auto Q = s.palette.Q;
  const auto reach = static_cast<std::size_t>(radius > 0 ? radius : 2 * s.palette.r + 1);
  std::vector<Weight> sub(g.m(), 0);
  auto draw = [&](EdgeId e) {
    const Weight next = 3 * rng.uniform_int(0, Q / 3 - 1);
    s.add(e, sub[e] - next);
    sub[e] = next;
  };
  for (EdgeId e : s.e_prime.edges) draw(e);

  SubtractionOutcome out;
  BoundedBfs bfs(g);
  for (;;) {
    auto bad = residue_count_violations(s);
    if (bad.empty()) break;
    if (out.rounds == max_rounds) {
      out.failure = StageFailure{"e_prime", "residue-count condition still violated", bad.front().first, bad};
      return out;
    }
    ++out.rounds;
    std::vector<Vertex> centres;
    for (const auto& [v, t] : bad) {
      if (centres.empty() || centres.back() != v) centres.push_back(v);
    }
    const auto near = bfs.within(centres, reach);
    std::vector<char> close(g.n(), 0);
    for (Vertex u : near) close[u] = 1;
    for (EdgeId e : s.e_prime.edges) {
      if (close[g.edge(e).u] || close[g.edge(e).v]) draw(e);
    }
  }
  s.stage = Stage::EPrimeDone;
  return out;
}

/// Moves every B-vertex onto the lower element of its pair by taking Q off one
/// of its B-C edges (lowest edge id) when it sits on the upper element.
inline std::optional<StageFailure> fix_B_to_lower(ConstructState& s) {
  s.require_stage(Stage::EPrimeDone, "fix_B_to_lower");
  const auto& g = s.g();
  const auto Q = s.palette.Q;
  for (Vertex v : s.in_order(Part::B)) {
    const Weight lo = *s.pair[v];
    if (s.weights[v] == lo) continue;
    if (s.weights[v] != lo + Q) return StageFailure{"fix_B", "B-vertex outside its pair", v, {}};
    std::optional<EdgeId> edge;
    for (const auto& inc : g.neighbours(v)) {
      if (s.label(inc.neighbour) == Part::C && !s.e_prime.contains(inc.edge)) {
        if (!edge || inc.edge < *edge) edge = inc.edge;
      }
    }
    if (!edge) return StageFailure{"fix_B", "B-vertex without a usable B-C edge", v, {}};
    if (s.colours[*edge] - Q < s.palette.q) return StageFailure{"fix_B", "B-C edge would drop below q", v, {}};
    s.add(*edge, -Q);
    ++s.fix_B_changes;
  }
  s.stage = Stage::BFixed;
  return std::nullopt;
}

/// C-vertices in order; each picks, among the sums reachable by ±Q toggles on
/// its A-C edges, one unused by earlier C r-neighbours and by B r-neighbours.
inline std::optional<StageFailure> run_stage_C(ConstructState& s) {
  s.require_stage(Stage::BFixed, "run_stage_C");
  const auto& g = s.g();
  const auto Q = s.palette.Q;
  std::vector<EdgeId> plus, minus;
  std::unordered_set<Weight> forbidden;
  for (Vertex v : s.in_order(Part::C)) {
    detail::backward_toggles(s, v, {Part::A}, plus, minus);
    forbidden.clear();
    for (Vertex u : s.balls->members(v)) {
      const Part p = s.label(u);
      if (p == Part::B || (p == Part::C && s.partition.precedes(u, v))) forbidden.insert(s.weights[u]);
    }
    s.stats_C.max_forbidden = std::max(s.stats_C.max_forbidden, forbidden.size());
    s.stats_C.max_candidates = std::max(s.stats_C.max_candidates, plus.size() + minus.size() + 1);
    const Weight w0 = s.weights[v];
    std::optional<std::int64_t> chosen;
    detail::for_each_offset(static_cast<std::int64_t>(minus.size()), static_cast<std::int64_t>(plus.size()),
                            [&](std::int64_t j) {
                              if (forbidden.contains(w0 + j * Q)) return false;
                              chosen = j;
                              return true;
                            });
    if (!chosen) {
      return StageFailure{"stage_C", "all " + std::to_string(plus.size() + minus.size() + 1) + " candidate sums taken",
                          v, {}};
    }
    detail::apply_toggles(s, *chosen, plus, minus, s.stats_C);
    ++s.stats_C.processed;
  }
  (void)g;
  s.stage = Stage::CDone;
  return std::nullopt;
}

/// Stage-boundary invariants; returns one line per violation.
inline std::vector<std::string> check_invariants(const ConstructState& s) {
  const auto& g = s.g();
  const auto Q = s.palette.Q;
  std::vector<std::string> out;
  const std::string at = std::string(stage_name(s.stage)) + ": ";

  for (EdgeId e = 0; e < g.m(); ++e) {
    if (s.colours[e] < s.palette.q || s.colours[e] > s.palette.k_total) {
      out.push_back(at + "edge " + std::to_string(e) + " colour " + std::to_string(s.colours[e]) + " outside [q, 2Q+2q]");
    }
  }
  if (weight_profile(g, s.colours) != s.weights) out.push_back(at + "weights out of sync with colours");

  for (Vertex v = 0; v < g.n(); ++v) {
    if (!s.pair[v]) continue;
    const Weight lo = *s.pair[v];
    const Weight w = s.weights[v];
    const Weight m = ((w % (2 * Q)) + 2 * Q) % (2 * Q);
    const Weight p = ((lo % (2 * Q)) + 2 * Q) % (2 * Q);
    if ((w != lo && w != lo + Q) || (m != p && m != p + Q)) {
      out.push_back(at + "vertex " + std::to_string(v) + " weight " + std::to_string(w) + " outside its pair");
    }
    if (s.label(v) == Part::A && (mod3(lo) != 0 || mod3(w) != 0)) {
      out.push_back(at + "A-vertex " + std::to_string(v) + " not 0 mod 3");
    }
    if (s.stage >= Stage::BFixed && s.label(v) == Part::B && w != lo) {
      out.push_back(at + "B-vertex " + std::to_string(v) + " not on the lower element");
    }
    for (Vertex u : s.balls->members(v)) {
      if (u > v && s.pair[u] && *s.pair[u] == lo) {
        out.push_back(at + "r-neighbours " + std::to_string(v) + "," + std::to_string(u) + " share a pair");
      }
    }
  }
  if (s.stage >= Stage::EPrimeDone) {
    for (Vertex v = 0; v < g.n(); ++v) {
      if (s.label(v) == Part::C && mod3(s.weights[v]) == 0) {
        out.push_back(at + "C-vertex " + std::to_string(v) + " weight 0 mod 3");
      }
    }
  }
  return out;
}

struct ConstructConfig {
  ThresholdProfile profile;
  std::uint64_t seed = 0;
  int max_rounds = 50;
  ResampleConfig ordering;      // max_rounds overridden by `max_rounds`
  int subtraction_radius = 0;   // 0: 2r + 1
  bool check_invariants = true;
};

struct ConstructDiagnostics {
  std::uint64_t seed = 0;
  std::string profile;
  PaletteParams palette;
  std::size_t size_A = 0, size_B = 0, size_C = 0, size_e_prime = 0;
  int ordering_rounds = 0;
  int cset_rounds = 0;
  int subtraction_rounds = 0;
  std::vector<std::size_t> ordering_violations_per_round;
  std::array<std::size_t, kFeatureCount> feature_violations{};
  std::vector<StageFailure> failures;
  std::vector<std::string> boundaries;           // stage boundaries reached, in order
  std::vector<std::string> invariant_violations;
  StageStats stats_A, stats_B, stats_C;
  std::size_t fix_B_changes = 0;
  Colour colour_min = 0, colour_max = 0;
  bool verified = false;
  std::string reached = "init";
};

struct ConstructResult {
  std::optional<EdgeColouring> colouring;
  ConstructDiagnostics diagnostics;

  bool success() const noexcept { return colouring.has_value(); }
};

/// Full pipeline. A successful result has passed the r-distant verifier at
/// k = 2Q + 2q; any stage failure is returned with its cause.
inline ConstructResult construct(const Graph& g, int r, const ConstructConfig& config) {
  if (r < 2) throw ArgumentError("construct: r must be >= 2");
  require_defined(g);
  if (g.max_degree() < 2) throw ArgumentError("construct: needs Δ >= 2");
  check_thresholds(config.profile.t_a, config.profile.t_c);

  ConstructResult res;
  auto& diag = res.diagnostics;
  diag.seed = config.seed;
  diag.profile = config.profile.name;
  diag.palette = palette_params(static_cast<std::int64_t>(g.max_degree()), r);
  check_weight_capacity(g.max_degree(), diag.palette.k_total);

  const BallCache balls(g, r);
  const Rng root(config.seed);
  Rng ordering_rng = root.split(streams::kOrdering);
  Rng cset_rng = root.split(streams::kSparseCSet);
  Rng subtraction_rng = root.split(streams::kSubtraction);

  auto fail = [&](StageFailure f) {
    diag.failures.push_back(std::move(f));
    return res;
  };

  const auto features = FeatureConfig::make(g, r, config.profile);
  ResampleConfig rc = config.ordering;
  rc.max_rounds = config.max_rounds;
  auto ordering = resample_until_features(g, ordering_rng, features, balls, rc);
  diag.ordering_rounds = ordering.rounds;
  diag.ordering_violations_per_round = ordering.violations_per_round;
  diag.feature_violations = ordering.report.per_feature;
  diag.size_A = ordering.partition.count(Part::A);
  diag.size_B = ordering.partition.count(Part::B);
  diag.size_C = ordering.partition.count(Part::C);
  if (!ordering.success) {
    StageFailure f{"ordering", std::to_string(ordering.report.violations.size()) + " feature violations after " +
                                   std::to_string(ordering.rounds) + " rounds",
                   std::nullopt, {}};
    if (!ordering.report.violations.empty()) f.vertex = ordering.report.violations.front().vertex;
    return fail(std::move(f));
  }

  auto state = ConstructState::init(g, balls, diag.palette, config.profile, std::move(ordering.partition));
  auto boundary = [&] {
    diag.reached = stage_name(state.stage);
    diag.boundaries.push_back(diag.reached);
    if (config.check_invariants) {
      auto v = check_invariants(state);
      diag.invariant_violations.insert(diag.invariant_violations.end(), v.begin(), v.end());
    }
    diag.stats_A = state.stats_A;
    diag.stats_B = state.stats_B;
    diag.stats_C = state.stats_C;
    diag.fix_B_changes = state.fix_B_changes;
  };
  boundary();

  if (auto f = run_stage_A(state)) return fail(std::move(*f));
  boundary();
  if (auto f = run_stage_B(state)) return fail(std::move(*f));
  boundary();

  auto cset = select_sparse_cset(g, state.partition, config.profile.t_e, cset_rng, config.max_rounds);
  diag.cset_rounds = cset.rounds;
  if (!cset.error.empty()) return fail({"e_prime", cset.error, std::nullopt, {}});
  if (!cset.success()) {
    return fail({"e_prime", std::to_string(cset.violating.size()) + " C-vertices above the E' degree bound",
                 cset.violating.front(), {}});
  }
  diag.size_e_prime = cset.set->edges.size();
  if (auto f = adjust_cset_mod3(state, *cset.set)) return fail(std::move(*f));
  auto sub = random_subtract_cset(state, subtraction_rng, config.max_rounds, config.subtraction_radius);
  diag.subtraction_rounds = sub.rounds;
  if (sub.failure) return fail(std::move(*sub.failure));
  boundary();
  if (auto f = fix_B_to_lower(state)) return fail(std::move(*f));
  boundary();
  if (auto f = run_stage_C(state)) return fail(std::move(*f));
  boundary();

  EdgeColouring colouring(state.colours, diag.palette.k_total);
  diag.colour_min = colouring.min_colour();
  diag.colour_max = colouring.max_colour();
  diag.verified = is_r_irregular(g, colouring, r, diag.palette.k_total) && diag.colour_min >= diag.palette.q;
  if (!diag.verified) return fail({"verify", "final colouring rejected by the verifier", std::nullopt, {}});
  res.colouring = std::move(colouring);
  return res;
}

}  // namespace rdist
