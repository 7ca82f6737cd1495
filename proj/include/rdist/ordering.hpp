#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rdist/distance.hpp"
#include "rdist/error.hpp"
#include "rdist/graph.hpp"
#include "rdist/palette.hpp"
#include "rdist/rng.hpp"

namespace rdist {

/// Every lnΔ-dependent threshold of the construction in one place.
///
/// The "paper" preset uses L = lnΔ; "relaxed(β)" substitutes the constant β
/// for lnΔ everywhere, which is what makes small graphs usable at all.
struct ThresholdProfile {
  std::string name = "paper";
  double log_base = 1.0;      // L
  double t_a = 1.0;           // A = {x < t_a}, 1/L^2
  double t_c = 1.0;           // C = {x > 1 - t_c}, 1/L^3
  double t_e = 1.0;           // E' degree divisor, L^6
  double t_l = 1.0;           // residue-count divisor, L^3
  double upper_factor = 2.0;  // the 2x in F1..F4
  double lower_factor = 0.5;  // the 1/2x in F3, F4
  double deviation = 1.0;     // L multiplying the square-root terms of F5, F6
  double degree_window = 5.0;  // 5L: degree-ratio window of the residue count

  static ThresholdProfile with_log(double L, std::string name) {
    if (!(L > 0.0)) throw ArgumentError("threshold profile: log base must be positive");
    ThresholdProfile p;
    p.name = std::move(name);
    p.log_base = L;
    p.t_a = 1.0 / (L * L);
    p.t_c = 1.0 / (L * L * L);
    p.t_e = std::pow(L, 6);
    p.t_l = L * L * L;
    p.deviation = L;
    p.degree_window = 5.0 * L;
    return p;
  }

  static ThresholdProfile paper(std::int64_t delta_max) {
    if (delta_max < 2) throw ArgumentError("paper profile needs Δ >= 2");
    return with_log(std::log(static_cast<double>(delta_max)), "paper");
  }

  static ThresholdProfile relaxed(double beta) { return with_log(beta, "relaxed:" + format_beta(beta)); }

  /// "paper" or "relaxed:BETA".
  static ThresholdProfile parse(const std::string& spec, std::int64_t delta_max) {
    if (spec == "paper") return paper(delta_max);
    const std::string prefix = "relaxed:";
    if (spec.rfind(prefix, 0) == 0) {
      try {
        std::size_t used = 0;
        const std::string tail = spec.substr(prefix.size());
        double beta = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("trailing");
        return relaxed(beta);
      } catch (const std::logic_error&) {
        throw ArgumentError("bad profile '" + spec + "'");
      }
    }
    throw ArgumentError("unknown profile '" + spec + "' (expected paper or relaxed:BETA)");
  }

  bool valid_partition() const { return t_a > 0.0 && t_c > 0.0 && t_a < 1.0 - t_c; }

 private:
  static std::string format_beta(double beta) {
    std::string s = std::to_string(beta);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

enum class Part : std::uint8_t { A, B, C };

inline char part_name(Part p) { return p == Part::A ? 'A' : p == Part::B ? 'B' : 'C'; }

/// Random vertex ordering and the A/B/C split it induces.
struct OrderedPartition {
  std::vector<double> x;
  std::vector<Vertex> order;       // ascending x, ties by id
  std::vector<std::uint32_t> rank;  // position of each vertex in `order`
  std::vector<Part> label;
  double t_a = 0.0;
  double t_c = 0.0;

  bool precedes(Vertex u, Vertex v) const { return rank[u] < rank[v]; }

  Part classify(double value) const {
    if (value < t_a) return Part::A;
    if (value > 1.0 - t_c) return Part::C;
    return Part::B;
  }

  /// Recomputes order, rank and labels from x.
  void rebuild() {
    const auto n = x.size();
    order.resize(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return x[a] != x[b] ? x[a] < x[b] : a < b; });
    rank.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;
    label.resize(n);
    for (std::size_t v = 0; v < n; ++v) label[v] = classify(x[v]);
  }

  std::size_t count(Part p) const { return static_cast<std::size_t>(std::count(label.begin(), label.end(), p)); }

  static OrderedPartition from_values(std::vector<double> values, double t_a, double t_c) {
    OrderedPartition part;
    part.x = std::move(values);
    part.t_a = t_a;
    part.t_c = t_c;
    part.rebuild();
    return part;
  }
};

inline void check_thresholds(double t_a, double t_c) {
  if (!(t_a > 0.0 && t_c > 0.0 && t_a < 1.0 - t_c)) {
    throw ArgumentError("ordering thresholds must satisfy 0 < t_a < 1 - t_c < 1");
  }
}

/// Independent U[0,1] values per vertex; labels by threshold.
inline OrderedPartition sample_ordering(const Graph& g, Rng& rng, double t_a, double t_c) {
  check_thresholds(t_a, t_c);
  std::vector<double> x(g.n());
  for (auto& value : x) value = rng.uniform01();
  return OrderedPartition::from_values(std::move(x), t_a, t_c);
}

struct FeatureConfig {
  ThresholdProfile profile;
  int r = 2;
  std::int64_t delta_max = 2;
  std::int64_t delta_pow = 2;  // Δ^{r-1}

  static FeatureConfig make(const Graph& g, int r, ThresholdProfile profile) {
    FeatureConfig cfg;
    cfg.profile = std::move(profile);
    cfg.r = r;
    cfg.delta_max = std::max<std::int64_t>(2, static_cast<std::int64_t>(g.max_degree()));
    cfg.delta_pow = checked_pow(cfg.delta_max, r - 1);
    return cfg;
  }
};

inline constexpr int kFeatureCount = 6;

struct VertexFeatures {
  std::array<bool, kFeatureCount> f{true, true, true, true, true, true};
  std::size_t d_A_r = 0, d_C_r = 0;  // r-neighbours in A, C
  std::size_t d_A = 0, d_C = 0;      // neighbours in A, C
  std::size_t d_back = 0;            // backward neighbours
  std::size_t d_back_r = 0;          // backward r-neighbours

  bool ok() const { return std::all_of(f.begin(), f.end(), [](bool b) { return b; }); }
};

struct FeatureViolation {
  Vertex vertex;
  int feature;  // 1..6
};

struct FeatureReport {
  std::vector<VertexFeatures> per_vertex;
  std::vector<FeatureViolation> violations;
  std::array<std::size_t, kFeatureCount> per_feature{};
  bool ok = true;
};

/// Evaluates the six ordering inequalities at v, with d = d(v), D = Δ^{r-1}:
///   F1  d_A^r <= 2 d D t_a          F2  d_C^r <= 2 d D t_c
///   F3  d t_a / 2 <= d_A <= 2 d t_a  F4  d t_c / 2 <= d_C <= 2 d t_c
///   F5  v in B: d_- >= x d - sqrt(x d) L
///   F6  v in B: d_-^r <= x d D + sqrt(x d D) L
inline VertexFeatures evaluate_features(const Graph& g, const OrderedPartition& part, const FeatureConfig& cfg,
                                        const BallCache& balls, Vertex v) {
  const auto& p = cfg.profile;
  VertexFeatures vf;
  for (Vertex u : balls.members(v)) {
    vf.d_A_r += part.label[u] == Part::A;
    vf.d_C_r += part.label[u] == Part::C;
    vf.d_back_r += part.precedes(u, v);
  }
  for (const auto& inc : g.neighbours(v)) {
    const Vertex u = inc.neighbour;
    vf.d_A += part.label[u] == Part::A;
    vf.d_C += part.label[u] == Part::C;
    vf.d_back += part.precedes(u, v);
  }
  const double d = static_cast<double>(g.degree(v));
  const double D = static_cast<double>(cfg.delta_pow);
  const double xv = part.x[v];
  const auto count = [](std::size_t c) { return static_cast<double>(c); };

  vf.f[0] = count(vf.d_A_r) <= p.upper_factor * d * D * p.t_a;
  vf.f[1] = count(vf.d_C_r) <= p.upper_factor * d * D * p.t_c;
  vf.f[2] = p.lower_factor * d * p.t_a <= count(vf.d_A) && count(vf.d_A) <= p.upper_factor * d * p.t_a;
  vf.f[3] = p.lower_factor * d * p.t_c <= count(vf.d_C) && count(vf.d_C) <= p.upper_factor * d * p.t_c;
  if (part.label[v] == Part::B) {
    vf.f[4] = count(vf.d_back) >= xv * d - std::sqrt(xv * d) * p.deviation;
    vf.f[5] = count(vf.d_back_r) <= xv * d * D + std::sqrt(xv * d * D) * p.deviation;
  }
  return vf;
}

inline void record_violations(FeatureReport& report, Vertex v, const VertexFeatures& vf) {
  for (int i = 0; i < kFeatureCount; ++i) {
    if (!vf.f[i]) {
      report.violations.push_back({v, i + 1});
      ++report.per_feature[i];
      report.ok = false;
    }
  }
}

inline FeatureReport check_features(const Graph& g, const OrderedPartition& part, const FeatureConfig& cfg,
                                    const BallCache& balls) {
  if (balls.radius() != cfg.r) throw ArgumentError("check_features: ball cache radius differs from r");
  FeatureReport report;
  report.per_vertex.resize(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    report.per_vertex[v] = evaluate_features(g, part, cfg, balls, v);
    record_violations(report, v, report.per_vertex[v]);
  }
  return report;
}

struct ResampleConfig {
  int max_rounds = 50;
  // Redraw x(u) for u within this distance of a violated vertex; 0 means r.
  int radius = 0;
};

struct ResampleOutcome {
  OrderedPartition partition;
  FeatureReport report;  // of the returned partition
  int rounds = 0;        // resampling rounds performed (0: first sample was good)
  bool success = false;
  std::vector<std::size_t> violations_per_round;  // entry i: violations before round i+1
  std::size_t redrawn = 0;                        // total x-values redrawn
};

/// Samples an ordering and resamples locally until every vertex has all six
/// features, or max_rounds rounds have been spent.
///
/// Each round redraws x(u) for every u within `radius` of some violated
/// vertex, then re-evaluates only vertices within r of a redrawn one.
inline ResampleOutcome resample_until_features(const Graph& g, Rng& rng, const FeatureConfig& cfg,
                                               const BallCache& balls, const ResampleConfig& rc = {}) {
  if (rc.max_rounds < 1) throw ArgumentError("resample_until_features: max_rounds must be >= 1");
  const double t_a = cfg.profile.t_a, t_c = cfg.profile.t_c;
  ResampleOutcome out;
  out.partition = sample_ordering(g, rng, t_a, t_c);
  out.report = check_features(g, out.partition, cfg, balls);
  const auto radius = static_cast<std::size_t>(rc.radius > 0 ? rc.radius : cfg.r);
  BoundedBfs bfs(g);
  std::vector<Vertex> violated;

  while (!out.report.ok && out.rounds < rc.max_rounds) {
    out.violations_per_round.push_back(out.report.violations.size());
    ++out.rounds;
    violated.clear();
    for (const auto& fv : out.report.violations) {
      if (violated.empty() || violated.back() != fv.vertex) violated.push_back(fv.vertex);
    }
    const auto redraw = bfs.within(violated, radius);
    for (Vertex u : redraw) out.partition.x[u] = rng.uniform01();
    out.redrawn += redraw.size();
    out.partition.rebuild();

    // Features of v depend on x over v's r-ball only.
    const auto affected = bfs.within(redraw, static_cast<std::size_t>(cfg.r));
    for (Vertex v : affected) out.report.per_vertex[v] = evaluate_features(g, out.partition, cfg, balls, v);
    out.report.violations.clear();
    out.report.per_feature.fill(0);
    out.report.ok = true;
    for (Vertex v = 0; v < g.n(); ++v) record_violations(out.report, v, out.report.per_vertex[v]);
  }
  out.success = out.report.ok;
  return out;
}

}  // namespace rdist
