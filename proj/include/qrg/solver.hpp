#pragma once

#include "qrg/cost.hpp"
#include "qrg/preference.hpp"
#include "qrg/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qrg {

enum class Family { nash, secure };
enum class Notion { nash, secure, spe, spse };

const char* notion_name(Notion n);

struct Witness {
  Player player = kNoPlayer;
  NodeId subgame = kNoNode;    // the history where the check failed
  NodeId deviation = kNoNode;  // first node where the deviating play leaves the profile
  NodeId leaf = kNoNode;       // end of the deviating play
  CostProfile x;               // profile of the play induced by the profile
  CostProfile y;               // profile of the deviating play
  Relation relation = Relation::nash;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;
};

std::string describe(const TruncatedTree& t, const Witness& w);

// Distinct profiles of the nodes at depth `horizon` (leaves by default) that
// player j can reach from `from` while the others follow the profile.
std::vector<CostProfile> achievable_profiles(const TruncatedTree& t, const TreeStrategyProfile& s,
                                             NodeId from, Player j,
                                             std::optional<std::uint32_t> horizon = std::nullopt);

// Seed 0 breaks ties towards the least vertex; other seeds shuffle the order of
// equally good children and, for the secure family, the linear extension used.
TreeStrategyProfile backward_induction(const TruncatedTree& t, Family kind, std::uint64_t seed = 0);

Verdict is_nash(const TruncatedTree& t, const TreeStrategyProfile& s);
Verdict is_secure(const TruncatedTree& t, const TreeStrategyProfile& s);
Verdict is_spe(const TruncatedTree& t, const TreeStrategyProfile& s);
Verdict is_spse(const TruncatedTree& t, const TreeStrategyProfile& s);
Verdict check(const TruncatedTree& t, const TreeStrategyProfile& s, Notion n);

// Every finite x_i is below d_goal.
bool is_goal_optimized(const GameGraph& g, const CostProfile& x);
bool is_goal_optimized(const TruncatedTree& t, const TreeStrategyProfile& s);

// Largest finite cost (0 if none) plus |V|. Costs must be integers.
std::uint64_t dev_depth(const CostProfile& x, const GameGraph& g);

// Compares prefixes of length d_dev - 1. Throws PreconditionError when the tree
// is shallower than d_dev.
Verdict is_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s);
// Throws PreconditionError unless the profile is secure.
Verdict devopt_characterization(const TruncatedTree& t, const TreeStrategyProfile& s);

// Lines "A/B/C -> D" fix the move at a history, "B => C" at every history
// ending in B; history lines take precedence. Histories longer than the tree
// are ignored. Throws InputError when an internal node with several children
// is left undefined.
TreeStrategyProfile parse_tree_profile(const TruncatedTree& t, std::string_view text);
std::string render_tree_profile(const TruncatedTree& t, const TreeStrategyProfile& s);

}  // namespace qrg
