#pragma once

#include "qrg/cost.hpp"
#include "qrg/moore.hpp"
#include "qrg/solver.hpp"
#include "qrg/tree.hpp"
#include "qrg/zero_sum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qrg {

// kNoPlayer while h is a prefix of the reference play, otherwise the owner of
// the vertex where h first left it.
Player punishment(const GameGraph& g, const History& h, const Lasso& reference);

// Players ordered by cost, ties by index.
std::vector<Player> sorted_players(const CostProfile& x);

struct PromisingResult {
  bool promising = false;
  // cost_j(h) < x_j: the history alone already beats the profile for j.
  bool profitable_deviation = false;
};

// Consistency of h with the other players' strategies is the caller's
// responsibility. Throws PreconditionError when every x_i is <= |h|.
PromisingResult is_promising(const GameGraph& g, const CostProfile& x, const History& h, Player j);

enum class PunishmentCase { reach_late_goals, avoid_own_goal, reach_goals_avoid_own, avoid_own_goal_late };

struct CoalitionStrategy {
  Player deviator = kNoPlayer;
  PunishmentCase which = PunishmentCase::reach_late_goals;
  VertexSet reach;
  VertexSet safe;
  VertexSet winning;
  std::vector<Vertex> move;  // per vertex; least successor where the attractor gives none
};

struct CoalitionOptions {
  bool check_window = true;  // |h| + |V| <= x_{k+1}
};

// `reference_prefix` is the cost of the profile's outcome cut at length |h|.
// Throws PreconditionError if h is not j-promising or violates the window, and
// NotSecureError when the coalition does not win from last(h).
CoalitionStrategy coalition_punishment(const GameGraph& g, const CostProfile& x, const History& h,
                                       Player j, const CostProfile& reference_prefix,
                                       CoalitionOptions options = {});

struct CycleChoice {
  std::size_t i = 0;  // alpha ends at position i
  std::size_t j = 0;  // beta ends at position j, play_i = play_j
};

struct CycleOptions {
  // |gamma| >= |V| with no new goal up to position j + |V|. Without it only the
  // unnecessary-cycle conditions are required and the punishment window is not
  // checked.
  bool enforce_gamma_bound = true;
  // Off the new outcome, switch to coalition strategies at promising pivots.
  bool punish = true;
};

struct Transformed {
  TruncatedTree tree;
  TreeStrategyProfile profile;
  Outcome outcome;
  Verdict secure;                    // re-verification on `tree`
  std::optional<Verdict> dev_optimized;
  std::size_t excised = 0;           // positions removed from the outcome
  std::vector<std::string> notes;
};

// The input profile lives on t; the result lives on the tree of depth
// t.depth() - (j - i), whose nodes are a prefix of t's.
Transformed remove_cycle(const TruncatedTree& t, const TreeStrategyProfile& s, CycleChoice c,
                         CycleOptions options = {});

// Same outcome; re-verified for security and dev-optimality.
Transformed make_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s);

// Removes cycles while some sorted gap x_{k+1} - x_k (x_0 = 0) is at least
// 2|V|, smallest k first, then dev-optimizes.
Transformed make_goal_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s);

struct Assembly {
  MooreProfile profile;
  Lasso outcome;
  CycleChoice cycle;
  bool full_window = false;  // decomposition inside d_goal + |V| <= i, j <= d_goal + 2|V|
  std::size_t state_bound = 0;
  std::vector<std::string> notes;
};

// Throws PreconditionError when no decomposition passes the coalition checks
// and the exact security check.
Assembly assemble_finite_memory(const TruncatedTree& t, const TreeStrategyProfile& s);

struct MooreVerdict {
  bool holds = true;
  Player player = kNoPlayer;
  History prefix;       // a deviating history witnessing the failure
  std::string detail;
};

// Exact: explores every deviation of every player against the machines of the
// others, on the product of the arena with the machine states.
MooreVerdict verify_moore_secure(const GameGraph& g, Vertex v0, const MooreProfile& p);

struct DeviationReport {
  std::size_t runs = 0;
  std::size_t beaten = 0;
  std::optional<Player> player;
  CostProfile x;
  CostProfile y;
};

// Each run picks a player who moves at random for `steps` steps and then
// plays least successors; the resulting lasso is costed exactly.
DeviationReport simulate_deviations(const GameGraph& g, Vertex v0, const MooreProfile& p,
                                    std::size_t runs, std::size_t steps, std::uint64_t seed);

}  // namespace qrg
