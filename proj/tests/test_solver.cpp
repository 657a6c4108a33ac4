#include "helpers.hpp"

#include "qrg/errors.hpp"

#include <gtest/gtest.h>

using namespace qrg;
using namespace qrg::testing;

namespace {

struct Loaded {
  GameGraph g;
  TruncatedTree t;
  TreeStrategyProfile s;
};

Loaded load(const std::string& game, const std::string& profile, std::uint32_t depth) {
  GameGraph g = load_fixture(game);
  TruncatedTree t = unravel(g, *g.initial(), depth);
  TreeStrategyProfile s = load_tree_profile(t, profile);
  return {g, std::move(t), std::move(s)};
}

// Nodes at `depth` reachable from the root when everyone but j follows s.
std::set<CostProfile> brute_prefix_set(const TruncatedTree& t, const TreeStrategyProfile& s, Player j,
                                       std::uint32_t depth) {
  std::set<CostProfile> out;
  for (NodeId n = t.level_begin(depth); n < t.level_begin(depth + 1); ++n) {
    bool ok = true;
    for (NodeId c = n; t.node(c).parent != kNoNode; c = t.node(c).parent) {
      NodeId p = t.node(c).parent;
      if (t.owner(p) != j && s.choice[p] != c) ok = false;
    }
    if (ok) out.insert(t.costs(n));
  }
  return out;
}

bool brute_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s) {
  Outcome o = outcome(t, s);
  const std::uint32_t h = static_cast<std::uint32_t>(dev_depth(o.costs, t.game()) - 1);
  const CostProfile xp = t.costs(o.path[h]);
  for (Player j = 0; j < t.game().player_count(); ++j) {
    for (const auto& y : brute_prefix_set(t, s, j, h)) {
      if (secure_prefers(j, xp, y)) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Solver, Example17OnG) {
  auto a = load("fig1_G.qrg", "sigma1_sigma2.prof", 8);
  EXPECT_TRUE(is_secure(a.t, a.s).holds);
  EXPECT_TRUE(is_nash(a.t, a.s).holds);
  EXPECT_EQ(outcome(a.t, a.s).costs, (CostProfile{3, Cost::infinity()}));
  Verdict spe = is_spe(a.t, a.s);
  ASSERT_FALSE(spe.holds);
  EXPECT_EQ(a.t.history(spe.witness->subgame), parse_history(a.g, "A/C"));
  EXPECT_EQ(spe.witness->player, 1u);
  auto b = load("fig1_G.qrg", "sigma1p_sigma2p.prof", 8);
  EXPECT_TRUE(is_spse(b.t, b.s).holds);
}

TEST(Solver, NashViolationOnG) {
  auto a = load("fig1_G.qrg", "sigma1p_sigma2.prof", 8);
  Verdict v = is_nash(a.t, a.s);
  ASSERT_FALSE(v.holds);
  // Both players can profit; the witness is re-checkable either way.
  EXPECT_TRUE(nash_prefers(v.witness->player, v.witness->x, v.witness->y));
  auto set = achievable_profiles(a.t, a.s, 0, 1);
  EXPECT_NE(std::find(set.begin(), set.end(), CostProfile{2, 2}), set.end());
}

TEST(Solver, NonImplicationOnGpp) {
  auto a = load("fig3_Gpp.qrg", "sigma1_sigma2p.prof", 7);
  EXPECT_TRUE(is_spe(a.t, a.s).holds);
  EXPECT_TRUE(is_secure(a.t, a.s).holds);
  EXPECT_FALSE(is_spse(a.t, a.s).holds);
}

TEST(Solver, BackwardInductionOnGpp) {
  GameGraph g = load_fixture("fig3_Gpp.qrg");
  TruncatedTree t = unravel(g, 0, 7);
  TreeStrategyProfile s = backward_induction(t, Family::secure);
  EXPECT_EQ(t.vertex(s.choice[0]), g.vertex("B"));
  NodeId ac = t.find(parse_history(g, "A/C"));
  EXPECT_EQ(t.vertex(s.choice[ac]), g.vertex("E"));
  EXPECT_TRUE(is_spse(t, s).holds);
  EXPECT_EQ(t.history(outcome(t, s).leaf), parse_history(g, "A/B/D/D/D/D/D/D"));
}

TEST(Solver, SingleChoiceTree) {
  GameGraph g = parse_game("players 2\nvertex A owner=1\nvertex B owner=2\nedge A B\nedge B A\ngoal 1 A\ngoal 2 B\n"
                           "init A\n");
  TruncatedTree t = unravel(g, 0, 5);
  TreeStrategyProfile s = backward_induction(t, Family::nash);
  EXPECT_EQ(s, parse_tree_profile(t, ""));
  EXPECT_TRUE(is_nash(t, s).holds);
  EXPECT_TRUE(is_spse(t, s).holds);
}

TEST(Solver, Fig5SecureNotSubgamePerfect) {
  for (int n = 1; n <= 3; ++n) {
    auto a = load("fig5.qrg", "fig5_sigma_n" + std::to_string(n) + ".prof", 8);
    EXPECT_TRUE(is_secure(a.t, a.s).holds) << n;
    EXPECT_EQ(outcome(a.t, a.s).costs, (CostProfile{n + 1, n + 1}));
    EXPECT_FALSE(is_spse(a.t, a.s).holds);
    EXPECT_FALSE(is_spe(a.t, a.s).holds);
  }
}

TEST(Solver, Fig4NotSecure) {
  auto a = load("fig4.qrg", "sigma_n1.prof", 6);
  Verdict v = is_secure(a.t, a.s);
  ASSERT_FALSE(v.holds);
  EXPECT_TRUE(secure_prefers(v.witness->player, v.witness->x, v.witness->y));
  EXPECT_TRUE(is_spe(a.t, a.s).holds);
}

TEST(Solver, Fig6Secure) {
  auto a = load("fig6.qrg", "fig6_sigma.prof", 14);
  EXPECT_TRUE(is_secure(a.t, a.s).holds);
  EXPECT_EQ(outcome(a.t, a.s).costs, (CostProfile{0, 0, 5}));
}

TEST(Solver, AchievableSetsMatchLeafEnumeration) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 150; ++k) {
    GameGraph g = random_game(rng);
    const std::uint32_t d = 1 + k % 5;
    if (tree_size(g, 0, d) > 5000) continue;
    TruncatedTree t = unravel(g, 0, d);
    TreeStrategyProfile s = random_profile(t, rng);
    for (int q = 0; q < 5; ++q) {
      NodeId from = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(t.size() - 1))(rng);
      for (Player j = 0; j < g.player_count(); ++j) {
        std::set<CostProfile> oracle;
        for (NodeId leaf : consistent_leaves(t, s, from, j)) oracle.insert(t.costs(leaf));
        auto got = achievable_profiles(t, s, from, j);
        EXPECT_EQ(std::set<CostProfile>(got.begin(), got.end()), oracle);
        EXPECT_EQ(got.size(), oracle.size());
        EXPECT_TRUE(oracle.count(outcome(t, s, from).costs));
      }
    }
  }
}

TEST(Solver, VerdictsMatchBruteForce) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 300; ++k) {
    GameGraph g = random_game(rng);
    const std::uint32_t d = 1 + k % 5;
    if (tree_size(g, 0, d) > 2000) continue;
    TruncatedTree t = unravel(g, 0, d);
    TreeStrategyProfile s = k % 3 == 0 ? backward_induction(t, k % 2 ? Family::secure : Family::nash, k)
                                       : random_profile(t, rng);
    Verdict nash = is_nash(t, s), secure = is_secure(t, s), spe = is_spe(t, s), spse = is_spse(t, s);
    EXPECT_EQ(nash.holds, brute_holds(t, s, Relation::nash, false));
    EXPECT_EQ(secure.holds, brute_holds(t, s, Relation::secure, false));
    EXPECT_EQ(spe.holds, brute_holds(t, s, Relation::nash, true));
    EXPECT_EQ(spse.holds, brute_holds(t, s, Relation::secure, true));
    for (const Verdict* v : {&nash, &secure, &spe, &spse}) {
      if (v->holds) continue;
      const Witness& w = *v->witness;
      EXPECT_TRUE(prefers(w.relation, w.player, w.x, w.y));
      EXPECT_EQ(t.costs(w.leaf), w.y);
      EXPECT_EQ(outcome(t, s, w.subgame).costs, w.x);
      auto ok = consistent_leaves(t, s, w.subgame, w.player);
      EXPECT_NE(std::find(ok.begin(), ok.end(), w.leaf), ok.end());
    }
  }
}

TEST(Solver, BackwardInductionProducesSubgamePerfectProfiles) {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 200; ++k) {
    GameGraph g = random_game(rng);
    const std::uint32_t d = 1 + k % 6;
    if (tree_size(g, 0, d) > 3000) continue;
    TruncatedTree t = unravel(g, 0, d);
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      EXPECT_TRUE(brute_holds(t, backward_induction(t, Family::nash, seed), Relation::nash, true));
      EXPECT_TRUE(brute_holds(t, backward_induction(t, Family::secure, seed), Relation::secure, true));
    }
  }
}

TEST(Solver, GoalOptimized) {
  GameGraph g = load_fixture("fig5.qrg");
  EXPECT_TRUE(is_goal_optimized(g, {3, 3}));
  EXPECT_TRUE(is_goal_optimized(g, {Cost::infinity(), Cost::infinity()}));
  EXPECT_FALSE(is_goal_optimized(g, {12, 3}));
  EXPECT_TRUE(is_goal_optimized(g, {11, 3}));
}

TEST(Solver, DevDepth) {
  GameGraph g = load_fixture("fig6.qrg");
  EXPECT_EQ(dev_depth({0, 0, 5}, g), 13u);
  EXPECT_EQ(dev_depth({Cost::infinity(), Cost::infinity(), Cost::infinity()}, g), 8u);
  auto a = load("fig6.qrg", "fig6_sigma.prof", 12);
  EXPECT_THROW(is_dev_optimized(a.t, a.s), PreconditionError);
}

TEST(Solver, Fig6DevOptimality) {
  auto a = load("fig6.qrg", "fig6_sigma.prof", 14);
  Verdict direct = is_dev_optimized(a.t, a.s);
  EXPECT_EQ(direct.holds, brute_dev_optimized(a.t, a.s));
  EXPECT_EQ(devopt_characterization(a.t, a.s).holds, direct.holds);
}

TEST(Solver, DevOptimalityMatchesOracleAndCharacterization) {
  std::mt19937_64 rng(61);
  int secure = 0;
  for (int k = 0; k < 400 && secure < 100; ++k) {
    GameGraph g = random_game(rng);
    const std::uint32_t d = static_cast<std::uint32_t>(g.vertex_count()) + 3;
    if (tree_size(g, 0, d) > 4000) continue;
    TruncatedTree t = unravel(g, 0, d);
    TreeStrategyProfile s = backward_induction(t, Family::secure, k);
    Outcome o = outcome(t, s);
    if (dev_depth(o.costs, g) > d) continue;
    ++secure;
    Verdict v = is_dev_optimized(t, s);
    EXPECT_EQ(v.holds, brute_dev_optimized(t, s));
    EXPECT_EQ(devopt_characterization(t, s).holds, v.holds);
  }
  EXPECT_GT(secure, 20);
}

TEST(Solver, CharacterizationNeedsSecureProfile) {
  auto a = load("fig4.qrg", "sigma_n1.prof", 6);
  EXPECT_THROW(devopt_characterization(a.t, a.s), PreconditionError);
}

TEST(Solver, ProfileRoundTrip) {
  std::mt19937_64 rng(67);
  for (int k = 0; k < 50; ++k) {
    GameGraph g = random_game(rng);
    TruncatedTree t = unravel(g, 0, 3);
    TreeStrategyProfile s = random_profile(t, rng);
    EXPECT_EQ(parse_tree_profile(t, render_tree_profile(t, s)), s);
  }
}

TEST(Solver, WeightedBackwardInduction) {
  std::mt19937_64 rng(71);
  RandomGameSpec spec;
  spec.weighted = true;
  for (int k = 0; k < 50; ++k) {
    GameGraph g = random_game(rng, spec);
    TruncatedTree t = unravel(g, 0, 4, CostModel::weighted);
    TreeStrategyProfile s = backward_induction(t, Family::nash, k);
    EXPECT_TRUE(is_spe(t, s).holds);
    EXPECT_TRUE(brute_holds(t, s, Relation::nash, true));
  }
}
