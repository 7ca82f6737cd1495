#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "rdist/exact.hpp"
#include "rdist/generate.hpp"
#include "rdist/greedy.hpp"

using namespace rdist;
using namespace rdist::testing;

TEST(Greedy, Examples) {
  const auto p3 = greedy_colour(path(3), 2, 2, OrderPolicy::ascending());
  ASSERT_TRUE(p3.success());
  const auto w = weight_profile(path(3), *p3.colouring);
  EXPECT_NE(w[0], w[1]);
  EXPECT_NE(w[0], w[2]);
  EXPECT_NE(w[1], w[2]);
  EXPECT_EQ(p3.conflicts_final, 0u);

  // K3: brute force says 3 is feasible and 2 is not.
  ASSERT_TRUE(enumerate_colourings(complete(3), 1, 3).has_value());
  ASSERT_FALSE(enumerate_colourings(complete(3), 1, 2).has_value());
  EXPECT_TRUE(greedy_colour(complete(3), 1, 3, OrderPolicy::ascending()).success());
  const auto k3 = greedy_colour(complete(3), 1, 2, OrderPolicy::ascending());
  EXPECT_FALSE(k3.success());
  EXPECT_TRUE(k3.stuck_at.has_value());
}

TEST(Greedy, IsolatedEdgeIsUndefined) {
  EXPECT_THROW(greedy_colour(path(2), 1, 3, OrderPolicy::ascending()), ProblemUndefined);
  EXPECT_THROW(greedy_strength_estimate(path(2), 1), ProblemUndefined);
}

TEST(Greedy, OrderPolicies) {
  const Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
  EXPECT_EQ(vertex_order(g, OrderPolicy::ascending()), (std::vector<Vertex>{1, 2, 4, 3, 0}));
  EXPECT_EQ(vertex_order(g, OrderPolicy::descending()), (std::vector<Vertex>{0, 3, 1, 2, 4}));
  EXPECT_EQ(vertex_order(g, OrderPolicy::random(4)), vertex_order(g, OrderPolicy::random(4)));
  EXPECT_EQ(OrderPolicy::random(4).name(), "random:4");
}

TEST(Greedy, ProcessedWeightsAreFrozen) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Graph g = random_graph(12, 0.3, rng);
    if (has_isolated_edge(g)) continue;
    const BallCache balls(g, 2);
    std::vector<Vertex> done;
    std::vector<Weight> frozen(g.n(), 0);
    greedy_colour(g, balls, 6, OrderPolicy::random(static_cast<std::uint64_t>(i)),
                  [&](Vertex v, const std::vector<Weight>& w) {
                    for (Vertex u : done) ASSERT_EQ(w[u], frozen[u]);
                    done.push_back(v);
                    frozen[v] = w[v];
                  });
    EXPECT_EQ(done.size(), g.n());
  }
}

TEST(Greedy, EstimateExamplesAgainstExact) {
  for (std::size_t s = 2; s <= 5; ++s) {
    const Graph g = star(s);
    const auto exact = exact_strength(g, 2, 8);
    ASSERT_EQ(exact.status, ExactStatus::Solved);
    EXPECT_EQ(*exact.strength, static_cast<Colour>(s));
    EXPECT_EQ(greedy_strength_estimate(g, 2).k, Colour(s)) << "star " << s;
  }
  EXPECT_EQ(greedy_strength_estimate(cycle(5), 2).k, Colour{3});
}

TEST(Greedy, EstimateDominatesExact) {
  std::vector<std::pair<Graph, int>> cases = {{path(3), 1}, {path(3), 2}, {complete(3), 1}, {complete(3), 2},
                                              {star(3), 1}, {star(3), 2}, {cycle(5), 2},    {cycle(4), 2},
                                              {complete(4), 1}, {petersen(), 1}, {cycle(6), 2}};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    Graph g = random_graph(7, 0.4, rng);
    if (!has_isolated_edge(g)) cases.emplace_back(std::move(g), 1 + i % 2);
  }
  for (const auto& [g, r] : cases) {
    const auto exact = exact_strength(g, r, 10);
    ASSERT_EQ(exact.status, ExactStatus::Solved);
    const auto est = greedy_strength_estimate(g, r);
    ASSERT_TRUE(est.k.has_value());
    EXPECT_GE(*est.k, *exact.strength);
    EXPECT_TRUE(is_r_irregular(g, *est.colouring, r, *est.k));
  }
}

// Success at k does not imply success at k+1: the start colour ceil(k/2)
// moves with k, so runs at different k are not nested. The failures are
// rare; the estimate scans every k upwards and never relies on monotonicity.
TEST(Greedy, MonotoneFeasibilityIsNearlyAlwaysKept) {
  std::mt19937_64 rng(13);
  std::size_t pairs = 0, broken = 0;
  for (int i = 0; i < 60; ++i) {
    const Graph g = random_graph(14, 0.25, rng);
    if (has_isolated_edge(g)) continue;
    for (int r = 1; r <= 2; ++r) {
      const BallCache balls(g, r);
      for (const auto& policy : {OrderPolicy::ascending(), OrderPolicy::descending(), OrderPolicy::random(7)}) {
        bool prev = false;
        for (Colour k = 1; k <= 24; ++k) {
          const bool ok = greedy_colour(g, balls, k, policy).success();
          if (prev) {
            ++pairs;
            broken += !ok;
          }
          prev = ok;
        }
      }
    }
  }
  ASSERT_GT(pairs, 1000u);
  EXPECT_LT(static_cast<double>(broken) / static_cast<double>(pairs), 0.02) << broken << "/" << pairs;

  // Order matters on C5: ascending first succeeds at 7, random:0 at 3.
  for (Colour k = 1; k <= 6; ++k) EXPECT_FALSE(greedy_colour(cycle(5), 2, k, OrderPolicy::ascending()).success());
  EXPECT_TRUE(greedy_colour(cycle(5), 2, 7, OrderPolicy::ascending()).success());
  EXPECT_TRUE(greedy_colour(cycle(5), 2, 3, OrderPolicy::random(0)).success());
}
