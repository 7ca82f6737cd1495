#include <gtest/gtest.h>

#include <map>
#include <set>

#include "common.hpp"
#include "rdist/construct.hpp"
#include "rdist/generate.hpp"

using namespace rdist;
using namespace rdist::testing;

namespace {

const ThresholdProfile kL2 = ThresholdProfile::with_log(2.0, "L2");  // t_a = 1/4, t_c = 1/8

// As kL2 with a residue-count bound of 5 d(v), so degree-1 C-vertices are not
// flagged by the subtraction check on tiny graphs.
ThresholdProfile loose() {
  auto p = kL2;
  p.t_l = 1.0;
  return p;
}

struct Fixture {
  Graph g;
  BallCache balls;
  ConstructState s;

  Fixture(Graph graph, int r, std::vector<double> x, const ThresholdProfile& profile = kL2)
      : g(std::move(graph)), balls(g, r) {
    const auto palette = palette_params(static_cast<std::int64_t>(std::max<std::size_t>(2, g.max_degree())), r);
    s = ConstructState::init(g, balls, palette, profile,
                             OrderedPartition::from_values(std::move(x), profile.t_a, profile.t_c));
  }
};

Graph dense_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  GenSpec spec;
  spec.family = Family::RandomRegular;
  spec.n = n;
  spec.d = d;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST(PairFamily, LowerElement) {
  EXPECT_EQ(pair_low(0, 9), 0);
  EXPECT_EQ(pair_low(8, 9), 8);
  EXPECT_EQ(pair_low(9, 9), 0);
  EXPECT_EQ(pair_low(17, 9), 8);
  EXPECT_EQ(pair_low(18, 9), 18);
  EXPECT_EQ(pair_low(-1, 9), -10);
  // Every integer lies in exactly one pair {lo, lo + Q}.
  for (Weight w = -40; w < 40; ++w) {
    const Weight lo = pair_low(w, 9);
    EXPECT_TRUE(w == lo || w == lo + 9);
    EXPECT_EQ(pair_low(lo + 9, 9), lo);
  }
}

TEST(Init, EveryEdgeAtQPlusQ) {
  Fixture f(cycle(6), 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.95});
  for (Colour c : f.s.colours) EXPECT_EQ(c, f.s.palette.Q + f.s.palette.q);
  EXPECT_TRUE(check_invariants(f.s).empty());
}

TEST(StageA, FirstVertexHasNoConstraints) {
  // Centre of K_{1,3} is the first A-vertex, all its edges forward: weight 3(Q+q) = 36, pair {36, 45}.
  Fixture f(star(3), 2, {0.01, 0.5, 0.6, 0.7});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  EXPECT_EQ(f.s.pair[0], Weight{36});
  EXPECT_EQ(f.s.weights[0], 36);
  EXPECT_EQ(mod3(f.s.weights[0]), 0);
}

// Forward additions of {0..q} on d forward edges reach the d*q + 1 consecutive
// sums d(Q+q) .. d(Q+q) + dq; checked by enumerating every alteration vector.
TEST(StageA, ForwardSweepIsConsecutive) {
  const auto p = palette_params(3, 2);
  std::set<Weight> sums;
  for (Weight a = 0; a <= p.q; ++a)
    for (Weight b = 0; b <= p.q; ++b)
      for (Weight c = 0; c <= p.q; ++c) sums.insert(3 * (p.Q + p.q) + a + b + c);
  EXPECT_EQ(sums.size(), static_cast<std::size_t>(3 * p.q + 1));
  EXPECT_EQ(*sums.begin(), 3 * (p.Q + p.q));
  EXPECT_EQ(*sums.rbegin(), 3 * (p.Q + p.q) + 3 * p.q);

  // With the first pairs blocked the stage moves further along the sweep.
  Fixture f(star(3), 2, {0.01, 0.5, 0.6, 0.7});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  EXPECT_TRUE(sums.contains(f.s.weights[0]));
}

TEST(StageA, BackwardNeighbourPairIsAvoided) {
  // Path 0-1-2-3 with 0, 1 in A (0 first): 1's pair must differ from 0's.
  Fixture f(path(4), 2, {0.01, 0.02, 0.5, 0.6});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_TRUE(f.s.pair[0] && f.s.pair[1]);
  EXPECT_NE(*f.s.pair[0], *f.s.pair[1]);
  EXPECT_EQ(mod3(*f.s.pair[1]), 0);
  EXPECT_TRUE(check_invariants(f.s).empty());
}

TEST(StageB, AvoidsBackwardPairsAndKeepsEarlierVerticesInTheirPairs) {
  // K_{1,4}: leaves 1, 2 in A, then leaves 3, 4 and finally the centre in B.
  // (A degree-1 A-leaf reaches only two mod-3 pairs, so at most two leaves fit in A.)
  Fixture f(star(4), 2, {0.6, 0.01, 0.02, 0.3, 0.4});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  std::set<Weight> leaf_pairs;
  for (Vertex v = 1; v <= 4; ++v) leaf_pairs.insert(*f.s.pair[v]);
  EXPECT_EQ(leaf_pairs.size(), 4u);
  EXPECT_FALSE(leaf_pairs.contains(*f.s.pair[0]));
  EXPECT_TRUE(check_invariants(f.s).empty());
  EXPECT_EQ(f.s.stats_B.processed, 3u);
  EXPECT_LE(f.s.stats_B.max_forbidden, 4u);
}

TEST(StageB, ZeroBackwardNeighbours) {
  Fixture f(cycle(5), 2, {0.3, 0.4, 0.5, 0.6, 0.7});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  // The first B-vertex takes the zero alteration: its pair is that of 2(Q+q).
  EXPECT_EQ(*f.s.pair[0], pair_low(2 * (f.s.palette.Q + f.s.palette.q), f.s.palette.Q));
  EXPECT_TRUE(check_invariants(f.s).empty());
}

TEST(Stages, WrongOrderIsRejected) {
  Fixture f(cycle(5), 2, {0.3, 0.4, 0.5, 0.6, 0.7});
  EXPECT_THROW(run_stage_B(f.s), std::logic_error);
  EXPECT_THROW(run_stage_C(f.s), std::logic_error);
}

namespace {

SparseCSet cset_of(const Graph& g, std::vector<EdgeId> edges) {
  SparseCSet s;
  s.member.assign(g.m(), 0);
  s.degree.assign(g.n(), 0);
  std::sort(edges.begin(), edges.end());
  for (EdgeId e : edges) {
    s.member[e] = 1;
    ++s.degree[g.edge(e).u];
    ++s.degree[g.edge(e).v];
  }
  s.edges = std::move(edges);
  return s;
}

}  // namespace

TEST(AdjustMod3, SingleEdgeBothZero) {
  // C = {2, 3} on the path 0-1-2-3; before adjustment both C-weights are 0 mod 3 when
  // their sums are multiples of 3: all edges start at Q + q = 12.
  Fixture f(path(4), 2, {0.01, 0.5, 0.95, 0.99});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  ASSERT_EQ(mod3(f.s.weights[3]), 0);
  ASSERT_FALSE(adjust_cset_mod3(f.s, cset_of(f.g, {2})).has_value());
  EXPECT_NE(mod3(f.s.weights[2]), 0);
  EXPECT_NE(mod3(f.s.weights[3]), 0);
  EXPECT_GE(f.s.colours[2], 13);
  EXPECT_LE(f.s.colours[2], 14);
}

// For every residue pattern of a three-vertex E'-path, some addition vector in
// {0,1,2}^2 works (exhaustive), and the greedy pass finds one.
TEST(AdjustMod3, TwoEdgePathAllResidues) {
  for (int ru = 0; ru < 3; ++ru)
    for (int rm = 0; rm < 3; ++rm)
      for (int rw = 0; rw < 3; ++rw) {
        int good = 0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) good += (ru + a) % 3 && (rm + a + b) % 3 && (rw + b) % 3;
        EXPECT_GT(good, 0);
      }

  Fixture f(path(5), 2, {0.01, 0.5, 0.95, 0.96, 0.97});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  ASSERT_FALSE(adjust_cset_mod3(f.s, cset_of(f.g, {2, 3})).has_value());
  for (Vertex v : {2u, 3u, 4u}) EXPECT_NE(mod3(f.s.weights[v]), 0) << v;
  for (EdgeId e : {2u, 3u}) {
    EXPECT_GE(f.s.colours[e], f.s.palette.Q + f.s.palette.q);
    EXPECT_LE(f.s.colours[e], f.s.palette.Q + f.s.palette.q + 2);
  }
}

TEST(AdjustMod3, EmptyCIsNoOp) {
  Fixture f(cycle(5), 2, {0.01, 0.3, 0.4, 0.5, 0.6});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  const auto before = f.s.colours;
  ASSERT_FALSE(adjust_cset_mod3(f.s, cset_of(f.g, {})).has_value());
  EXPECT_EQ(f.s.colours, before);
}

TEST(RandomSubtract, SupportIsMultiplesOfThreeBelowQ) {
  // Q = 9 for Δ = 2: subtractions are 0, 3, 6 with equal frequency.
  std::map<Colour, int> freq;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    Fixture f(path(4), 2, {0.01, 0.5, 0.95, 0.99}, loose());
    ASSERT_EQ(f.s.palette.Q, 9);
    run_stage_A(f.s);
    run_stage_B(f.s);
    ASSERT_FALSE(adjust_cset_mod3(f.s, cset_of(f.g, {2})).has_value());
    const Colour adjusted = f.s.colours[2];
    const auto residues = std::make_pair(mod3(f.s.weights[2]), mod3(f.s.weights[3]));
    Rng rng(seed);
    const auto out = random_subtract_cset(f.s, rng, 5);
    ASSERT_FALSE(out.failure.has_value());
    ++freq[adjusted - f.s.colours[2]];
    EXPECT_EQ(std::make_pair(mod3(f.s.weights[2]), mod3(f.s.weights[3])), residues);
  }
  ASSERT_EQ(freq.size(), 3u);
  for (Colour s : {0, 3, 6}) EXPECT_NEAR(freq[s] / 3000.0, 1.0 / 3.0, 0.04) << s;
}

// A vertex u with two E'-edges: over all (Q/3)^2 subtraction vectors, at most
// a 3/Q fraction gives w'(u) = t mod Q, for every target t.
TEST(RandomSubtract, HitProbabilityAtMostThreeOverQ) {
  for (std::int64_t Q : {9, 27, 30}) {
    const Weight w = 5 * Q + 7;
    for (std::int64_t t = 0; t < Q; ++t) {
      std::int64_t hits = 0, total = 0;
      for (std::int64_t s1 = 0; s1 < Q; s1 += 3)
        for (std::int64_t s2 = 0; s2 < Q; s2 += 3) {
          ++total;
          hits += (((w - s1 - s2) % Q) + Q) % Q == t;
        }
      EXPECT_LE(hits * Q, 3 * total) << "Q=" << Q << " t=" << t;
    }
  }
}

TEST(ResidueCount, CountsOnlyDegreeWindowAndCNeighbours) {
  // All C, equal weights: every vertex sees its r-neighbours at one residue.
  Fixture f(complete(6), 2, std::vector<double>(6, 0.99));
  f.s.stage = Stage::BDone;
  auto p = f.s.profile;
  p.t_l = 5.0 * 5.0 / 4.0;  // bound 5 * 5 / t_l = 4 < 5 neighbours
  f.s.profile = p;
  for (EdgeId e = 0; e < f.g.m(); ++e) f.s.colours[e] = 1;
  f.s.weights = weight_profile(f.g, f.s.colours);  // all 5, non-zero mod 3
  const auto bad = residue_count_violations(f.s);
  ASSERT_EQ(bad.size(), 6u);
  for (const auto& [v, t] : bad) EXPECT_EQ(t, 5 % f.s.palette.Q);
  f.s.profile.t_l = 5.0;  // bound 5: no violation
  EXPECT_TRUE(residue_count_violations(f.s).empty());
}

TEST(FixB, LowerIsIdempotentUpperDropsByQ) {
  // 0 in A, 1 and 2 in B, 3 and 4 in C on the path 0-1-2-3-4.
  Fixture f(path(5), 2, {0.01, 0.4, 0.5, 0.95, 0.99}, loose());
  const auto Q = f.s.palette.Q;
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  ASSERT_FALSE(adjust_cset_mod3(f.s, cset_of(f.g, {3})).has_value());
  Rng rng(1);
  ASSERT_FALSE(random_subtract_cset(f.s, rng, 5).failure.has_value());
  const bool upper = f.s.weights[2] == *f.s.pair[2] + Q;
  const auto edge_before = f.s.colours[2];
  const auto c_before = f.s.weights[3];
  ASSERT_FALSE(fix_B_to_lower(f.s).has_value());
  EXPECT_EQ(f.s.weights[2], *f.s.pair[2]);
  EXPECT_EQ(f.s.colours[2], edge_before - (upper ? Q : 0));
  EXPECT_EQ(f.s.weights[3], c_before - (upper ? Q : 0));
  EXPECT_NE(mod3(f.s.weights[3]), 0);
  EXPECT_TRUE(check_invariants(f.s).empty());
}

TEST(FixB, UpperWithoutCNeighbourIsStructuralFailure) {
  // 1 is the only B-vertex and has no C-neighbour; place it on its upper element.
  Fixture f(path(3), 2, {0.01, 0.5, 0.02});
  ASSERT_FALSE(run_stage_A(f.s).has_value());
  ASSERT_FALSE(run_stage_B(f.s).has_value());
  f.s.stage = Stage::EPrimeDone;
  f.s.weights[1] = *f.s.pair[1] + f.s.palette.Q;
  const auto res = fix_B_to_lower(f.s);
  ASSERT_TRUE(res.has_value());
  EXPECT_EQ(res->stage, "fix_B");
  EXPECT_EQ(res->vertex, Vertex{1});
}

// A C-vertex with four A-neighbours: each A-C edge can move in one direction
// only, so the reachable sums form a+b+1 = 5 values spaced Q apart.
TEST(StageC, ToggleCandidates) {
  Fixture f(star(4), 2, {0.99, 0.01, 0.02, 0.03, 0.04});
  const auto Q = f.s.palette.Q;
  // Leaves 1, 2 on their lower element, 3, 4 on the upper one.
  for (Vertex leaf = 1; leaf <= 4; ++leaf) f.s.pair[leaf] = f.s.weights[leaf] - (leaf >= 3 ? Q : 0);
  std::set<Weight> reachable;
  for (int mask = 0; mask < 16; ++mask) {
    Weight w = f.s.weights[0];
    for (Vertex leaf = 1; leaf <= 4; ++leaf) {
      if (!(mask >> (leaf - 1) & 1)) continue;
      w += f.s.weights[leaf] == *f.s.pair[leaf] ? Q : -Q;
    }
    reachable.insert(w);
  }
  EXPECT_EQ(reachable.size(), 5u);
  for (auto it = std::next(reachable.begin()); it != reachable.end(); ++it) EXPECT_EQ(*it - *std::prev(it), Q);

  f.s.stage = Stage::BFixed;
  const auto w0 = f.s.weights[0];
  ASSERT_FALSE(run_stage_C(f.s).has_value());
  EXPECT_EQ(f.s.weights[0], w0);  // nothing to avoid: zero toggles
  EXPECT_TRUE(reachable.contains(f.s.weights[0]));
}

TEST(Construct, RejectsBadInputs) {
  ConstructConfig cfg;
  cfg.profile = ThresholdProfile::relaxed(1.5);
  EXPECT_THROW(construct(cycle(6), 1, cfg), ArgumentError);
  EXPECT_THROW(construct(Graph(5, {{0, 1}, {2, 3}, {3, 4}}), 2, cfg), ProblemUndefined);
}

TEST(Construct, PaperProfileFailsWithStageNameAtDeskScale) {
  const Graph g = dense_regular(200, 10, 1);
  ConstructConfig cfg;
  cfg.profile = ThresholdProfile::paper(10);
  const auto res = construct(g, 2, cfg);
  if (!res.success()) {
    ASSERT_FALSE(res.diagnostics.failures.empty());
    EXPECT_FALSE(res.diagnostics.failures.front().stage.empty());
  } else {
    EXPECT_TRUE(res.diagnostics.verified);
  }
  EXPECT_EQ(res.diagnostics.palette.k_total, 66);
}

// End to end on dense random regular graphs, where the relaxed profile gives
// every stage real work.
TEST(Construct, DenseRegularEndToEnd) {
  const Graph g = dense_regular(300, 60, 7);
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    ConstructConfig cfg;
    cfg.profile = ThresholdProfile::relaxed(1.5);
    cfg.seed = seed;
    const auto res = construct(g, 2, cfg);
    const auto& d = res.diagnostics;
    EXPECT_TRUE(d.invariant_violations.empty()) << d.invariant_violations.front();
    if (!res.success()) continue;
    ++successes;
    const auto& p = d.palette;
    EXPECT_TRUE(d.verified);
    EXPECT_TRUE(is_r_irregular(g, *res.colouring, 2, p.k_total));
    EXPECT_GE(d.colour_min, p.q);
    EXPECT_LE(d.colour_max, p.k_total);
    EXPECT_EQ(d.boundaries.size(), 6u);
    EXPECT_EQ(d.stats_B.forbidden_over_backward, 0u);
    EXPECT_EQ(d.stats_B.f6_bound_exceeded, 0u);
    EXPECT_GT(d.stats_A.processed, 0u);
    EXPECT_GT(d.stats_B.processed, 0u);
    EXPECT_GT(d.stats_C.processed, 0u);
    const double D = static_cast<double>(p.delta_pow), L = p.ln_delta();
    EXPECT_LT(static_cast<double>(p.k_total), 4 * D * (1 + 1 / L) + 12);
    // Independent residue checks on the final colouring, parts from a replayed ordering.
    const auto w = weight_profile(g, *res.colouring);
    for (Weight x : w) EXPECT_GT(x, 0);
  }
  EXPECT_GE(successes, 4);
}

TEST(Construct, SameSeedSameColouring) {
  const Graph g = dense_regular(300, 60, 7);
  ConstructConfig cfg;
  cfg.profile = ThresholdProfile::relaxed(1.5);
  cfg.seed = 1;
  const auto a = construct(g, 2, cfg);
  const auto b = construct(g, 2, cfg);
  ASSERT_EQ(a.success(), b.success());
  if (a.success()) {
    EXPECT_EQ(a.colouring->colours, b.colouring->colours);
  }
  EXPECT_EQ(a.diagnostics.ordering_rounds, b.diagnostics.ordering_rounds);
}

// Step-by-step run on a dense graph with invariants checked at every boundary,
// including residues of A and C and pair disjointness against BFS distances.
TEST(Construct, StageBoundariesOnDenseGraph) {
  const Graph g = dense_regular(300, 60, 7);
  const BallCache balls(g, 2);
  const auto profile = ThresholdProfile::relaxed(1.5);
  const auto palette = palette_params(60, 2);
  Rng root(1);
  Rng ord = root.split(streams::kOrdering);
  auto ordering = resample_until_features(g, ord, FeatureConfig::make(g, 2, profile), balls);
  ASSERT_TRUE(ordering.success);
  auto s = ConstructState::init(g, balls, palette, profile, ordering.partition);
  ASSERT_FALSE(run_stage_A(s).has_value());
  EXPECT_TRUE(check_invariants(s).empty());
  ASSERT_FALSE(run_stage_B(s).has_value());
  EXPECT_TRUE(check_invariants(s).empty());

  // Pair disjointness among r-neighbours in A and B, distances from plain BFS.
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!s.pair[v]) continue;
    const auto ball = r_ball(g, v, 2);
    for (Vertex u : ball.members) {
      if (s.pair[u]) {
        ASSERT_NE(*s.pair[u], *s.pair[v]);
      }
    }
  }

  Rng cs = root.split(streams::kSparseCSet);
  auto cset = select_sparse_cset(g, s.partition, profile.t_e, cs, 50);
  ASSERT_TRUE(cset.success());
  ASSERT_FALSE(adjust_cset_mod3(s, *cset.set).has_value());
  Rng sub = root.split(streams::kSubtraction);
  ASSERT_FALSE(random_subtract_cset(s, sub, 50).failure.has_value());
  EXPECT_TRUE(check_invariants(s).empty());
  ASSERT_FALSE(fix_B_to_lower(s).has_value());
  EXPECT_TRUE(check_invariants(s).empty());
  ASSERT_FALSE(run_stage_C(s).has_value());
  EXPECT_TRUE(check_invariants(s).empty());

  for (Vertex v = 0; v < g.n(); ++v) {
    if (s.label(v) == Part::A) {
      EXPECT_EQ(mod3(s.weights[v]), 0);
    }
    if (s.label(v) == Part::C) {
      EXPECT_NE(mod3(s.weights[v]), 0);
    }
  }
  for (Colour c : s.colours) {
    EXPECT_GE(c, palette.q);
    EXPECT_LE(c, palette.k_total);
  }
  EXPECT_TRUE(is_r_irregular(g, s.colours, 2, palette.k_total));
}
