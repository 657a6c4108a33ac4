#include "helpers.hpp"

#include "qrg/errors.hpp"
#include "qrg/moore.hpp"

#include <gtest/gtest.h>

using namespace qrg;
using namespace qrg::testing;

TEST(Tree, GeometricCount) {
  GameGraph g = parse_game(
      "players 1\nvertex A owner=1\nvertex B owner=1\nedge A A\nedge A B\nedge B A\nedge B B\ngoal 1 B\ninit A\n");
  TruncatedTree t = unravel(g, 0, 3);
  EXPECT_EQ(t.size(), 15u);
  EXPECT_EQ(tree_size(g, 0, 3), 15u);
  EXPECT_EQ(level_sizes(g, 0, 3), (std::vector<std::uint64_t>{1, 2, 4, 8}));
}

TEST(Tree, DepthZeroAndBudget) {
  GameGraph g = load_fixture("fig5.qrg");
  EXPECT_THROW(unravel(g, 0, 0), PreconditionError);
  EXPECT_THROW(unravel(g, 99, 2), PreconditionError);
  EXPECT_THROW(unravel(g, 0, 30, CostModel::unit, 1000), ResourceError);
  const std::uint32_t d = max_depth_within(g, 0, 30, 1000);
  EXPECT_LE(tree_size(g, 0, d), 1000u);
  EXPECT_GT(tree_size(g, 0, d + 1), 1000u);
}

TEST(Tree, NodesAreExactlyTheHistories) {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 100; ++k) {
    GameGraph g = random_game(rng);
    const std::uint32_t d = 1 + k % 5;
    if (tree_size(g, 0, d) > 5000) continue;
    TruncatedTree t = unravel(g, 0, d);
    auto hs = enumerate_histories(g, 0, d);
    ASSERT_EQ(t.size(), hs.size());
    std::set<History> from_tree;
    for (NodeId n = 0; n < t.size(); ++n) {
      History h = t.history(n);
      from_tree.insert(h);
      EXPECT_EQ(t.find(h), n);
      EXPECT_EQ(t.node(n).depth, length(h));
      EXPECT_EQ(t.visit_mask(n), visit_mask(g, h));
      EXPECT_EQ(t.costs(n), cost_profile(g, h));
      EXPECT_EQ(t.is_leaf(n), length(h) == d);
    }
    EXPECT_EQ(from_tree, std::set<History>(hs.begin(), hs.end()));
  }
}

TEST(Tree, Fig5CountMatchesEnumeration) {
  GameGraph g = load_fixture("fig5.qrg");
  TruncatedTree t = unravel(g, 0, 4);
  EXPECT_EQ(t.size(), enumerate_histories(g, 0, 4).size());
}

TEST(Tree, SmallerDepthIsAPrefix) {
  GameGraph g = load_fixture("fig6.qrg");
  TruncatedTree big = unravel(g, 0, 10);
  TruncatedTree small = unravel(g, 0, 6);
  for (NodeId n = 0; n < small.size(); ++n) EXPECT_EQ(small.history(n), big.history(n));
}

TEST(Tree, DepthConstants) {
  auto dc = depth_constants(load_fixture("fig5.qrg"));
  EXPECT_EQ(dc.d_goal, 12u);
  EXPECT_EQ(dc.d, 21u);
  dc = depth_constants(load_fixture("fig6.qrg"));
  EXPECT_EQ(dc.d_goal, 48u);
  EXPECT_EQ(dc.d, 72u);
  dc = depth_constants(parse_game("players 1\nvertex A owner=1\nedge A A\ngoal 1 A\ninit A\n"));
  EXPECT_EQ(dc.d_goal, 2u);
  EXPECT_EQ(dc.d, 5u);
}

TEST(Tree, OutcomeFromRootAndSubgames) {
  GameGraph g = load_fixture("fig5.qrg");
  TruncatedTree t = unravel(g, 0, 6);
  TreeStrategyProfile s = load_tree_profile(t, "fig5_sigma_n1.prof");
  Outcome o = outcome(t, s);
  EXPECT_EQ(o.costs, (CostProfile{2, 2}));
  EXPECT_EQ(t.history(o.leaf), parse_history(g, "A/B/C/C/C/C/C"));
  // A node whose visit set contains a player keeps that first visit.
  NodeId abc = t.find(parse_history(g, "A/B/C"));
  EXPECT_EQ(outcome(t, s, abc).costs, (CostProfile{2, 2}));
  NodeId leaf = t.level_begin(6);
  Outcome at_leaf = outcome(t, s, leaf);
  EXPECT_EQ(at_leaf.path, std::vector<NodeId>{leaf});
  EXPECT_EQ(at_leaf.costs, t.costs(leaf));
}

TEST(Tree, OutcomeCostMatchesLeafHistory) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    GameGraph g = random_game(rng);
    TruncatedTree t = unravel(g, 0, 4);
    TreeStrategyProfile s = random_profile(t, rng);
    Outcome o = outcome(t, s);
    EXPECT_EQ(o.leaf, follow(t, s, 0));
    EXPECT_EQ(o.costs, cost_profile(g, t.history(o.leaf), 4));
  }
}

TEST(Tree, RestrictExtendRoundTrip) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 50; ++k) {
    GameGraph g = random_game(rng);
    TruncatedTree t = unravel(g, 0, 4);
    TreeStrategyProfile s = random_profile(t, rng);
    MooreProfile m = extend_arbitrary(s, t);
    EXPECT_EQ(restrict_strategy(m, t), s);
  }
}

TEST(Tree, MemorylessRestrictsToConstantChoices) {
  GameGraph g = load_fixture("fig5.qrg");
  TruncatedTree t = unravel(g, 0, 5);
  MooreProfile m = parse_moore(g, "player 1\nstates 1\ninitial 0\noutput 0 A -> B\n"
                                  "player 2\nstates 1\ninitial 0\noutput 0 B -> A\n");
  TreeStrategyProfile s = restrict_strategy(m, t);
  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.is_leaf(n)) continue;
    Vertex v = t.vertex(n);
    Vertex expect = v == g.vertex("A") ? g.vertex("B") : v == g.vertex("B") ? g.vertex("A") : g.vertex("C");
    EXPECT_EQ(t.vertex(s.choice[n]), expect);
  }
}

TEST(Tree, Fig4StrategyRestriction) {
  GameGraph g = load_fixture("fig4.qrg");
  TruncatedTree t = unravel(g, 0, 5);
  TreeStrategyProfile s = load_tree_profile(t, "sigma_n2.prof");
  // A at the history A only: A^j with j < 2.
  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.is_leaf(n) || t.vertex(n) != g.vertex("A")) continue;
    const bool stay = t.history(n) == parse_history(g, "A");
    EXPECT_EQ(t.vertex(s.choice[n]), stay ? g.vertex("A") : g.vertex("B")) << render_history(g, t.history(n));
  }
  EXPECT_EQ(outcome(t, s).costs, (CostProfile{0, 2}));
}

TEST(Tree, TerminalLasso) {
  EXPECT_TRUE(is_terminal_lasso(load_fixture("fig1_G.qrg")));
  EXPECT_TRUE(is_terminal_lasso(load_fixture("fig3_Gpp.qrg")));
  EXPECT_FALSE(is_terminal_lasso(load_fixture("fig4.qrg")));
  EXPECT_FALSE(is_terminal_lasso(load_fixture("fig6.qrg")));
}

TEST(Tree, ProfileChecks) {
  GameGraph g = load_fixture("fig5.qrg");
  TruncatedTree t = unravel(g, 0, 3);
  TreeStrategyProfile s;
  s.choice.assign(t.size(), kNoNode);
  EXPECT_THROW(check_profile(t, s), PreconditionError);
  EXPECT_THROW(parse_tree_profile(t, "A => B\n"), InputError);  // B undefined
  EXPECT_THROW(parse_tree_profile(t, "A => C\nB => A\n"), InputError);
}

TEST(Tree, WeightedCosts) {
  GameGraph g = parse_game(
      "players 1\nvertex A owner=1\nvertex B owner=1\nedge A A weights=2\nedge A B weights=5\n"
      "edge B B weights=1\ngoal 1 B\ninit A\n");
  TruncatedTree t = unravel(g, 0, 3, CostModel::weighted);
  for (NodeId n = 0; n < t.size(); ++n) EXPECT_EQ(t.costs(n), weighted_cost_profile(g, t.history(n)));
  EXPECT_THROW(unravel(load_fixture("fig5.qrg"), 0, 3, CostModel::weighted), PreconditionError);
}
