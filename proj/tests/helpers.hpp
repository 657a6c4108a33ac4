#pragma once

#include "qrg/game.hpp"
#include "qrg/game_io.hpp"
#include "qrg/play.hpp"
#include "qrg/preference.hpp"
#include "qrg/solver.hpp"
#include "qrg/tree.hpp"
#include "qrg/zero_sum.hpp"

#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace qrg::testing {

inline std::string fixture(const std::string& name) { return std::string(QRG_FIXTURES) + "/" + name; }

inline GameGraph load_fixture(const std::string& name) { return load_game(fixture(name)); }

inline TreeStrategyProfile load_tree_profile(const TruncatedTree& t, const std::string& name) {
  return parse_tree_profile(t, read_file(fixture(name)));
}

inline std::string vname(std::size_t k) {
  std::string s = std::to_string(k);
  return "v" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

struct RandomGameSpec {
  std::size_t min_vertices = 2;
  std::size_t max_vertices = 4;
  std::size_t min_players = 1;
  std::size_t max_players = 3;
  std::size_t max_branching = 3;
  bool weighted = false;
  int max_weight = 5;
};

// Vertex v00 is the initial vertex; every player gets a nonempty goal set.
inline GameGraph random_game(std::mt19937_64& rng, const RandomGameSpec& spec = {}) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = pick(spec.min_vertices, spec.max_vertices);
  const std::size_t p = pick(spec.min_players, spec.max_players);
  GameBuilder b(p);
  for (std::size_t v = 0; v < n; ++v) b.vertex(vname(v), static_cast<std::int64_t>(pick(1, p)));
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = k;
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t out = pick(1, std::min(n, spec.max_branching));
    for (std::size_t k = 0; k < out; ++k) {
      std::vector<Rational> w;
      if (spec.weighted) {
        for (std::size_t i = 0; i < p; ++i) w.emplace_back(static_cast<std::int64_t>(pick(1, spec.max_weight)));
      }
      b.edge(vname(v), vname(all[k]), w);
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<std::string> goal;
    for (std::size_t v = 0; v < n; ++v) {
      if (pick(0, 2) == 0) goal.push_back(vname(v));
    }
    if (goal.empty()) goal.push_back(vname(pick(0, n - 1)));
    b.goal(static_cast<std::int64_t>(i + 1), goal);
  }
  b.initial(vname(0));
  return b.build();
}

inline TreeStrategyProfile random_profile(const TruncatedTree& t, std::mt19937_64& rng) {
  TreeStrategyProfile s;
  s.choice.assign(t.size(), kNoNode);
  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.is_leaf(n)) continue;
    const TreeNode& x = t.node(n);
    s.choice[n] = x.first_child + std::uniform_int_distribution<std::uint32_t>(0, x.child_count - 1)(rng);
  }
  return s;
}

// All histories of length <= d from v0, by explicit depth-first expansion.
inline std::vector<History> enumerate_histories(const GameGraph& g, Vertex v0, std::size_t d) {
  std::vector<History> out;
  std::vector<History> stack{{v0}};
  while (!stack.empty()) {
    History h = stack.back();
    stack.pop_back();
    out.push_back(h);
    if (length(h) == d) continue;
    for (Vertex w : g.successors(h.back())) {
      History e = h;
      e.push_back(w);
      stack.push_back(e);
    }
  }
  return out;
}

// Leaves below `from` whose root path leaves the profile only at nodes of j.
inline std::vector<NodeId> consistent_leaves(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from,
                                             Player j) {
  std::vector<NodeId> out;
  for (NodeId leaf = t.level_begin(t.depth()); leaf < t.size(); ++leaf) {
    bool below = false, ok = true;
    for (NodeId n = leaf; n != kNoNode; n = t.node(n).parent) {
      if (n == from) {
        below = true;
        break;
      }
      NodeId p = t.node(n).parent;
      if (p != kNoNode && t.owner(p) != j && s.choice[p] != n && t.node(p).depth >= t.node(from).depth) ok = false;
    }
    if (below && ok) out.push_back(leaf);
  }
  return out;
}

// The leaf reached from `from` by following the profile, walked node by node.
inline NodeId follow(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from) {
  NodeId n = from;
  while (!t.is_leaf(n)) n = s.choice[n];
  return n;
}

// Checks the equilibrium condition at `from` against every consistent leaf.
inline bool brute_holds_at(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from, Relation r) {
  const CostProfile x = t.costs(follow(t, s, from));
  for (Player j = 0; j < t.game().player_count(); ++j) {
    for (NodeId leaf : consistent_leaves(t, s, from, j)) {
      if (prefers(r, j, x, t.costs(leaf))) return false;
    }
  }
  return true;
}

inline bool brute_holds(const TruncatedTree& t, const TreeStrategyProfile& s, Relation r, bool subgames) {
  if (!subgames) return brute_holds_at(t, s, TruncatedTree::root(), r);
  for (NodeId n = 0; n < t.size(); ++n) {
    if (!brute_holds_at(t, s, n, r)) return false;
  }
  return true;
}

// Naive alternating fixpoints: the largest set where the protagonist can stay
// in S, then the least set from which R is forced inside it.
inline VertexSet brute_winning(const ZeroSumArena& a) {
  const std::size_t n = a.size();
  auto cpre = [&](const VertexSet& z, Vertex v) {
    bool any = false, all = true;
    for (Vertex w : a.successors[v]) {
      any = any || z[w];
      all = all && z[w];
    }
    return a.protagonist[v] ? any : all;
  };
  VertexSet safe = a.safe;
  for (bool changed = true; changed;) {
    changed = false;
    VertexSet next(n, false);
    for (Vertex v = 0; v < n; ++v) next[v] = safe[v] && cpre(safe, v);
    if (next != safe) {
      safe = next;
      changed = true;
    }
  }
  VertexSet win(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    VertexSet next(n, false);
    for (Vertex v = 0; v < n; ++v) next[v] = safe[v] && (win[v] || a.reach[v] || cpre(win, v));
    if (next != win) {
      win = next;
      changed = true;
    }
  }
  return win;
}

}  // namespace qrg::testing
