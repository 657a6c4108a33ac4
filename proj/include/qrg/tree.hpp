#pragma once

#include "qrg/cost.hpp"
#include "qrg/game.hpp"
#include "qrg/moore.hpp"
#include "qrg/play.hpp"

#include <cstdint>
#include <vector>

namespace qrg {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = ~NodeId{0};
inline constexpr std::size_t kDefaultNodeBudget = 2'000'000;

enum class CostModel { unit, weighted };

struct TreeNode {
  Vertex vertex = kNoVertex;
  std::uint32_t depth = 0;
  NodeId parent = kNoNode;
  NodeId first_child = kNoNode;  // children are contiguous, ordered by vertex
  std::uint32_t child_count = 0;
};

// Histories of length <= depth from v0, stored breadth first. Building the same
// game at a smaller depth yields a prefix of this node store.
class TruncatedTree {
 public:
  const GameGraph& game() const { return game_; }
  std::size_t size() const { return nodes_.size(); }
  std::uint32_t depth() const { return depth_; }
  CostModel model() const { return model_; }
  static constexpr NodeId root() { return 0; }

  const TreeNode& node(NodeId n) const { return nodes_[n]; }
  Vertex vertex(NodeId n) const { return nodes_[n].vertex; }
  Player owner(NodeId n) const { return game_.owner(nodes_[n].vertex); }
  bool is_leaf(NodeId n) const { return nodes_[n].child_count == 0; }
  NodeId child(NodeId n, std::size_t k) const { return nodes_[n].first_child + static_cast<NodeId>(k); }
  NodeId child_with_vertex(NodeId n, Vertex v) const;

  Cost cost(NodeId n, Player i) const;
  CostProfile costs(NodeId n) const;
  PlayerSet visit_mask(NodeId n) const { return visited_[n]; }
  std::vector<Player> visit_set(NodeId n) const { return members(visited_[n]); }

  History history(NodeId n) const;
  // kNoNode when h is not a history of the tree.
  NodeId find(const History& h) const;
  NodeId ancestor(NodeId n, std::uint32_t depth) const;
  // Index of the first node at the given depth; size() past the last level.
  NodeId level_begin(std::uint32_t depth) const { return level_begin_.at(depth); }

 private:
  friend TruncatedTree unravel(const GameGraph&, Vertex, std::uint32_t, CostModel, std::size_t);

  GameGraph game_;
  std::uint32_t depth_ = 0;
  CostModel model_ = CostModel::unit;
  std::vector<TreeNode> nodes_;
  std::vector<PlayerSet> visited_;
  std::vector<std::int32_t> first_visit_;  // node * players + i, -1 if unvisited
  std::vector<Cost> weighted_;             // node * players + i (weighted model only)
  std::vector<NodeId> level_begin_;
};

// Throws PreconditionError for d = 0 or an unknown v0, ResourceError past the budget.
TruncatedTree unravel(const GameGraph& g, Vertex v0, std::uint32_t d,
                      CostModel model = CostModel::unit,
                      std::size_t node_budget = kDefaultNodeBudget);

// Number of histories of each length 0..d from v0, saturating at `cap`.
std::vector<std::uint64_t> level_sizes(const GameGraph& g, Vertex v0, std::uint32_t d,
                                       std::uint64_t cap = ~std::uint64_t{0});
std::uint64_t tree_size(const GameGraph& g, Vertex v0, std::uint32_t d,
                        std::uint64_t cap = ~std::uint64_t{0});
// Largest depth <= limit whose tree fits the budget (0 if even depth 1 does not).
std::uint32_t max_depth_within(const GameGraph& g, Vertex v0, std::uint32_t limit,
                               std::size_t node_budget);

struct DepthConstants {
  std::uint64_t d_goal = 0;
  std::uint64_t d = 0;
};

DepthConstants depth_constants(const GameGraph& g);

// For each internal node the chosen child; kNoNode at leaves.
struct TreeStrategyProfile {
  std::vector<NodeId> choice;

  friend bool operator==(const TreeStrategyProfile&, const TreeStrategyProfile&) = default;
};

// Throws PreconditionError unless the profile is total and picks children.
void check_profile(const TruncatedTree& t, const TreeStrategyProfile& s);

struct Outcome {
  std::vector<NodeId> path;  // from the starting node down to the leaf
  NodeId leaf = kNoNode;
  CostProfile costs;         // of the full root-to-leaf history
};

NodeId outcome_leaf(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from);
Outcome outcome(const TruncatedTree& t, const TreeStrategyProfile& s,
                NodeId from = TruncatedTree::root());

TreeStrategyProfile restrict_strategy(const MooreProfile& p, const TruncatedTree& t);
// Identical to the tree profile up to its depth, then least successors.
MooreProfile extend_arbitrary(const TreeStrategyProfile& s, const TruncatedTree& t);

// Every play reaches a vertex whose only successor is itself.
bool is_terminal_lasso(const GameGraph& g);

}  // namespace qrg
