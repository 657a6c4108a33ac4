#include "qrg/tree.hpp"

#include "qrg/errors.hpp"

#include <algorithm>

namespace qrg {

NodeId TruncatedTree::child_with_vertex(NodeId n, Vertex v) const {
  const TreeNode& x = nodes_[n];
  for (std::uint32_t k = 0; k < x.child_count; ++k) {
    if (nodes_[x.first_child + k].vertex == v) return x.first_child + k;
  }
  return kNoNode;
}

Cost TruncatedTree::cost(NodeId n, Player i) const {
  const std::size_t idx = static_cast<std::size_t>(n) * game_.player_count() + i;
  if (model_ == CostModel::weighted) return weighted_[idx];
  std::int32_t d = first_visit_[idx];
  return d < 0 ? kInfinity : Cost(d);
}

CostProfile TruncatedTree::costs(NodeId n) const {
  CostProfile x(game_.player_count());
  for (Player i = 0; i < x.size(); ++i) x[i] = cost(n, i);
  return x;
}

History TruncatedTree::history(NodeId n) const {
  History h(nodes_[n].depth + 1);
  for (NodeId m = n; m != kNoNode; m = nodes_[m].parent) h[nodes_[m].depth] = nodes_[m].vertex;
  return h;
}

NodeId TruncatedTree::find(const History& h) const {
  if (h.empty() || h.front() != nodes_[0].vertex) return kNoNode;
  NodeId n = 0;
  for (std::size_t k = 1; k < h.size() && n != kNoNode; ++k) n = child_with_vertex(n, h[k]);
  return n;
}

NodeId TruncatedTree::ancestor(NodeId n, std::uint32_t depth) const {
  while (nodes_[n].depth > depth) n = nodes_[n].parent;
  return n;
}

TruncatedTree unravel(const GameGraph& g, Vertex v0, std::uint32_t d, CostModel model,
                      std::size_t node_budget) {
  if (d == 0) throw PreconditionError("tree depth must be at least 1");
  if (v0 >= g.vertex_count()) throw PreconditionError("unknown start vertex");
  if (model == CostModel::weighted && !g.weighted()) throw PreconditionError("game has no weights");
  const std::uint64_t size = tree_size(g, v0, d, node_budget + 1);
  if (size > node_budget) {
    throw ResourceError("tree of depth " + std::to_string(d) + " exceeds the node budget of " +
                        std::to_string(node_budget));
  }
  const std::size_t np = g.player_count();
  TruncatedTree t;
  t.game_ = g;
  t.depth_ = d;
  t.model_ = model;
  t.nodes_.reserve(size);
  t.visited_.reserve(size);
  t.first_visit_.reserve(size * np);
  std::vector<Rational> cum;
  if (model == CostModel::weighted) {
    t.weighted_.reserve(size * np);
    cum.reserve(size * np);
  }

  auto add = [&](Vertex v, NodeId parent, std::uint32_t depth) {
    NodeId id = static_cast<NodeId>(t.nodes_.size());
    t.nodes_.push_back({v, depth, parent, kNoNode, 0});
    PlayerSet before = parent == kNoNode ? 0 : t.visited_[parent];
    PlayerSet fresh = g.goal_mask(v) & ~before;
    t.visited_.push_back(before | fresh);
    for (Player i = 0; i < np; ++i) {
      std::int32_t fv = parent == kNoNode ? -1 : t.first_visit_[parent * np + i];
      if (contains(fresh, i)) fv = static_cast<std::int32_t>(depth);
      t.first_visit_.push_back(fv);
    }
    if (model == CostModel::weighted) {
      for (Player i = 0; i < np; ++i) {
        Rational c = parent == kNoNode ? Rational(0)
                                       : cum[parent * np + i] + g.weights(t.nodes_[parent].vertex, v).at(i);
        cum.push_back(c);
        Cost k = parent == kNoNode ? kInfinity : t.weighted_[parent * np + i];
        if (contains(fresh, i)) k = Cost(c);
        t.weighted_.push_back(k);
      }
    }
    return id;
  };

  add(v0, kNoNode, 0);
  t.level_begin_.push_back(0);
  for (std::uint32_t depth = 0; depth < d; ++depth) {
    NodeId begin = t.level_begin_[depth];
    NodeId end = static_cast<NodeId>(t.nodes_.size());
    t.level_begin_.push_back(end);
    for (NodeId n = begin; n < end; ++n) {
      Vertex v = t.nodes_[n].vertex;
      NodeId first = static_cast<NodeId>(t.nodes_.size());
      for (Vertex w : g.successors(v)) add(w, n, depth + 1);
      t.nodes_[n].first_child = first;
      t.nodes_[n].child_count = static_cast<std::uint32_t>(g.successors(v).size());
    }
  }
  t.level_begin_.push_back(static_cast<NodeId>(t.nodes_.size()));
  return t;
}

std::vector<std::uint64_t> level_sizes(const GameGraph& g, Vertex v0, std::uint32_t d,
                                       std::uint64_t cap) {
  std::vector<std::uint64_t> count(g.vertex_count(), 0), next(g.vertex_count());
  count.at(v0) = 1;
  std::vector<std::uint64_t> levels{1};
  for (std::uint32_t k = 0; k < d; ++k) {
    std::fill(next.begin(), next.end(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (!count[v]) continue;
      for (Vertex w : g.successors(v)) next[w] = std::min(cap, next[w] + count[v]);
    }
    count.swap(next);
    std::uint64_t total = 0;
    for (auto c : count) total = std::min(cap, total + c);
    levels.push_back(total);
  }
  return levels;
}

std::uint64_t tree_size(const GameGraph& g, Vertex v0, std::uint32_t d, std::uint64_t cap) {
  std::uint64_t total = 0;
  for (auto c : level_sizes(g, v0, d, cap)) total = std::min(cap, total + c);
  return total;
}

std::uint32_t max_depth_within(const GameGraph& g, Vertex v0, std::uint32_t limit,
                               std::size_t node_budget) {
  auto levels = level_sizes(g, v0, limit, node_budget + 1);
  std::uint64_t total = 0;
  std::uint32_t best = 0;
  for (std::uint32_t k = 0; k < levels.size(); ++k) {
    total += levels[k];
    if (total > node_budget) break;
    best = k;
  }
  return best;
}

DepthConstants depth_constants(const GameGraph& g) {
  DepthConstants c;
  c.d_goal = 2 * g.player_count() * g.vertex_count();
  c.d = c.d_goal + 3 * g.vertex_count();
  return c;
}

void check_profile(const TruncatedTree& t, const TreeStrategyProfile& s) {
  if (s.choice.size() != t.size()) throw PreconditionError("profile does not match the tree");
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& x = t.node(n);
    if (t.is_leaf(n)) continue;
    NodeId c = s.choice[n];
    if (c < x.first_child || c >= x.first_child + x.child_count) {
      throw PreconditionError("profile undefined at history " + render_history(t.game(), t.history(n)));
    }
  }
}

NodeId outcome_leaf(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from) {
  NodeId n = from;
  while (!t.is_leaf(n)) n = s.choice[n];
  return n;
}

Outcome outcome(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from) {
  Outcome o;
  NodeId n = from;
  o.path.push_back(n);
  while (!t.is_leaf(n)) {
    n = s.choice[n];
    o.path.push_back(n);
  }
  o.leaf = n;
  o.costs = t.costs(n);
  return o;
}

TreeStrategyProfile restrict_strategy(const MooreProfile& p, const TruncatedTree& t) {
  const GameGraph& g = t.game();
  check_moore(g, p);
  const std::size_t np = g.player_count();
  std::vector<State> st(t.size() * np);
  TreeStrategyProfile s;
  s.choice.assign(t.size(), kNoNode);
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& x = t.node(n);
    for (Player i = 0; i < np; ++i) {
      const auto& m = p.machines[i];
      State prev = x.parent == kNoNode ? m.initial() : st[x.parent * np + i];
      st[n * np + i] = m.next(prev, x.vertex);
    }
    if (t.is_leaf(n)) continue;
    Player i = g.owner(x.vertex);
    Vertex w = p.machines[i].choose(g, st[n * np + i], x.vertex);
    s.choice[n] = t.child_with_vertex(n, w);
  }
  return s;
}

MooreProfile extend_arbitrary(const TreeStrategyProfile& s, const TruncatedTree& t) {
  check_profile(t, s);
  const GameGraph& g = t.game();
  const std::size_t nv = g.vertex_count();
  // State 0 has read nothing, state n+1 sits at node n, the last state is past the tree.
  const State beyond = static_cast<State>(t.size() + 1);
  MooreMachine m(t.size() + 2, nv, 0);
  for (Vertex v = 0; v < nv; ++v) {
    m.set_next(0, v, v == t.vertex(TruncatedTree::root()) ? 1 : beyond);
    m.set_next(beyond, v, beyond);
  }
  for (NodeId n = 0; n < t.size(); ++n) {
    State here = n + 1;
    for (Vertex v = 0; v < nv; ++v) {
      NodeId c = t.is_leaf(n) ? kNoNode : t.child_with_vertex(n, v);
      m.set_next(here, v, c == kNoNode ? beyond : c + 1);
    }
    if (!t.is_leaf(n)) m.set_output(here, t.vertex(n), t.vertex(s.choice[n]));
  }
  MooreProfile p;
  p.machines.assign(g.player_count(), m);
  return p;
}

bool is_terminal_lasso(const GameGraph& g) {
  const std::size_t n = g.vertex_count();
  auto absorbing = [&](Vertex v) { return g.successors(v).size() == 1 && g.successors(v)[0] == v; };
  // Acyclicity of the non-absorbing part via Kahn's algorithm.
  std::vector<std::size_t> indeg(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (absorbing(v)) continue;
    for (Vertex w : g.successors(v)) {
      if (!absorbing(w)) ++indeg[w];
    }
  }
  std::vector<Vertex> stack;
  std::size_t remaining = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (absorbing(v)) continue;
    ++remaining;
    if (indeg[v] == 0) stack.push_back(v);
  }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    --remaining;
    for (Vertex w : g.successors(v)) {
      if (!absorbing(w) && --indeg[w] == 0) stack.push_back(w);
    }
  }
  return remaining == 0;
}

}  // namespace qrg
