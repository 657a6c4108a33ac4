#include "qrg/solver.hpp"

#include "qrg/errors.hpp"
#include "qrg/game_io.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace qrg {

const char* notion_name(Notion n) {
  switch (n) {
    case Notion::nash: return "nash";
    case Notion::secure: return "secure";
    case Notion::spe: return "spe";
    case Notion::spse: return "spse";
  }
  return "?";
}

std::string describe(const TruncatedTree& t, const Witness& w) {
  const GameGraph& g = t.game();
  std::ostringstream out;
  out << "player " << (w.player + 1) << " deviates";
  if (w.subgame != TruncatedTree::root()) out << " in the subgame at " << render_history(g, t.history(w.subgame));
  out << " at " << render_history(g, t.history(w.deviation)) << ": play "
      << render_history(g, t.history(w.leaf)) << " gives " << to_string(w.y) << " instead of "
      << to_string(w.x) << " (" << relation_name(w.relation) << ")";
  return out.str();
}

namespace {

// Nodes of depth <= horizon; nodes at the horizon act as leaves.
struct Scope {
  const TruncatedTree& t;
  std::uint32_t horizon;

  NodeId end() const { return t.level_begin(horizon + 1 <= t.depth() ? horizon + 1 : t.depth() + 1); }
  bool is_leaf(NodeId n) const { return t.is_leaf(n) || t.node(n).depth == horizon; }
};

Scope make_scope(const TruncatedTree& t, std::optional<std::uint32_t> horizon) {
  std::uint32_t h = horizon.value_or(t.depth());
  if (h > t.depth()) throw PreconditionError("horizon beyond the tree depth");
  return Scope{t, h};
}

// Interns the profiles of scope leaves.
struct Profiles {
  std::vector<std::uint32_t> pid;  // per node, meaningful at scope leaves
  std::vector<CostProfile> table;

  Profiles(const Scope& sc) : pid(sc.end(), 0) {
    std::map<CostProfile, std::uint32_t> ids;
    for (NodeId n = 0; n < sc.end(); ++n) {
      if (!sc.is_leaf(n)) continue;
      auto [it, fresh] = ids.emplace(sc.t.costs(n), static_cast<std::uint32_t>(table.size()));
      if (fresh) table.push_back(it->first);
      pid[n] = it->second;
    }
  }
};

// Leaf reached from each node when everybody follows the profile.
std::vector<NodeId> onpath_leaves(const Scope& sc, const TreeStrategyProfile& s) {
  std::vector<NodeId> leaf(sc.end());
  for (NodeId n = sc.end(); n-- > 0;) leaf[n] = sc.is_leaf(n) ? n : leaf[s.choice[n]];
  return leaf;
}

struct Entry {
  std::uint32_t pid;
  NodeId leaf;
};

// Achievable sets for one deviating player. Nodes not owned by j share the set
// of their chosen child; leaves hold an implicit singleton.
class AchievableSets {
 public:
  AchievableSets(const Scope& sc, const TreeStrategyProfile& s, const Profiles& p, Player j)
      : sc_(sc), p_(p), ref_(sc.end()) {
    std::vector<std::uint32_t> stamp(p.table.size(), 0);
    std::uint32_t round = 0;
    for (NodeId n = sc.end(); n-- > 0;) {
      if (sc.is_leaf(n)) {
        ref_[n] = -1 - static_cast<std::int64_t>(n);
      } else if (sc.t.owner(n) != j) {
        ref_[n] = ref_[s.choice[n]];
      } else {
        ++round;
        std::vector<Entry> merged;
        const TreeNode& x = sc.t.node(n);
        for (std::uint32_t k = 0; k < x.child_count; ++k) {
          for_each(x.first_child + k, [&](const Entry& e) {
            if (stamp[e.pid] != round) {
              stamp[e.pid] = round;
              merged.push_back(e);
            }
          });
        }
        ref_[n] = static_cast<std::int64_t>(sets_.size());
        sets_.push_back(std::move(merged));
      }
    }
  }

  template <class F>
  void for_each(NodeId n, F&& f) const {
    std::int64_t r = ref_[n];
    if (r < 0) {
      NodeId leaf = static_cast<NodeId>(-1 - r);
      f(Entry{p_.pid[leaf], leaf});
      return;
    }
    for (const Entry& e : sets_[static_cast<std::size_t>(r)]) f(e);
  }

 private:
  const Scope& sc_;
  const Profiles& p_;
  std::vector<std::int64_t> ref_;
  std::vector<std::vector<Entry>> sets_;
};

NodeId first_divergence(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId from, NodeId leaf) {
  std::vector<NodeId> path;
  for (NodeId n = leaf; n != from; n = t.node(n).parent) path.push_back(n);
  NodeId cur = from;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (s.choice[cur] != *it) return cur;
    cur = *it;
  }
  return kNoNode;
}

Verdict run_check(const TruncatedTree& t, const TreeStrategyProfile& s, Relation rel, bool subgames) {
  check_profile(t, s);
  Scope sc = make_scope(t, std::nullopt);
  Profiles p(sc);
  auto leaf = onpath_leaves(sc, s);
  for (Player j = 0; j < t.game().player_count(); ++j) {
    AchievableSets sets(sc, s, p, j);
    auto examine = [&](NodeId n) -> std::optional<Witness> {
      const CostProfile& x = p.table[p.pid[leaf[n]]];
      std::optional<Witness> w;
      sets.for_each(n, [&](const Entry& e) {
        if (w || !prefers(rel, j, x, p.table[e.pid])) return;
        w = Witness{j, n, first_divergence(t, s, n, e.leaf), e.leaf, x, p.table[e.pid], rel};
      });
      return w;
    };
    if (!subgames) {
      if (auto w = examine(TruncatedTree::root())) return {false, w};
      continue;
    }
    // Elsewhere the set and the induced play equal those of the chosen child.
    for (NodeId n = 0; n < sc.end(); ++n) {
      if (t.is_leaf(n) || t.owner(n) != j) continue;
      if (auto w = examine(n)) return {false, w};
    }
  }
  return {};
}

// Strict preference of a over b for the owner j, refining the owner's relation
// into a total preorder.
class Ranking {
 public:
  Ranking(Family kind, std::size_t players, std::uint64_t seed) : kind_(kind), seed_(seed) {
    order_.resize(players);
    std::iota(order_.begin(), order_.end(), 0);
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      std::shuffle(order_.begin(), order_.end(), rng);
    }
  }

  bool better(Player j, const CostProfile& a, const CostProfile& b) const {
    if (a[j] != b[j]) return a[j] < b[j];
    if (kind_ == Family::nash) return false;
    if (seed_ == 0) {
      std::size_t inf_a = 0, inf_b = 0;
      Rational sum_a{0}, sum_b{0};
      for (Player i = 0; i < a.size(); ++i) {
        if (i == j) continue;
        if (a[i].finite()) sum_a += a[i].value(); else ++inf_a;
        if (b[i].finite()) sum_b += b[i].value(); else ++inf_b;
      }
      if (inf_a != inf_b) return inf_a > inf_b;
      return sum_a > sum_b;
    }
    for (Player i : order_) {
      if (i == j || a[i] == b[i]) continue;
      return a[i] > b[i];
    }
    return false;
  }

 private:
  Family kind_;
  std::uint64_t seed_;
  std::vector<Player> order_;
};

}  // namespace

std::vector<CostProfile> achievable_profiles(const TruncatedTree& t, const TreeStrategyProfile& s,
                                             NodeId from, Player j, std::optional<std::uint32_t> horizon) {
  check_profile(t, s);
  if (j >= t.game().player_count()) throw PreconditionError("player out of range");
  Scope sc = make_scope(t, horizon);
  if (from >= sc.end()) throw PreconditionError("node beyond the horizon");
  Profiles p(sc);
  AchievableSets sets(sc, s, p, j);
  std::vector<CostProfile> out;
  sets.for_each(from, [&](const Entry& e) { out.push_back(p.table[e.pid]); });
  std::sort(out.begin(), out.end());
  return out;
}

TreeStrategyProfile backward_induction(const TruncatedTree& t, Family kind, std::uint64_t seed) {
  const std::size_t np = t.game().player_count();
  Ranking rank(kind, np, seed);
  std::mt19937_64 rng(seed);
  TreeStrategyProfile s;
  s.choice.assign(t.size(), kNoNode);
  std::vector<NodeId> leaf(t.size());
  std::vector<NodeId> kids;
  for (NodeId n = static_cast<NodeId>(t.size()); n-- > 0;) {
    if (t.is_leaf(n)) {
      leaf[n] = n;
      continue;
    }
    const TreeNode& x = t.node(n);
    kids.resize(x.child_count);
    std::iota(kids.begin(), kids.end(), x.first_child);
    if (seed != 0) std::shuffle(kids.begin(), kids.end(), rng);
    Player j = t.owner(n);
    NodeId best = kids.front();
    CostProfile best_x = t.costs(leaf[best]);
    for (std::size_t k = 1; k < kids.size(); ++k) {
      CostProfile c = t.costs(leaf[kids[k]]);
      if (rank.better(j, c, best_x)) {
        best = kids[k];
        best_x = std::move(c);
      }
    }
    s.choice[n] = best;
    leaf[n] = leaf[best];
  }
  return s;
}

Verdict is_nash(const TruncatedTree& t, const TreeStrategyProfile& s) {
  return run_check(t, s, Relation::nash, false);
}

Verdict is_secure(const TruncatedTree& t, const TreeStrategyProfile& s) {
  return run_check(t, s, Relation::secure, false);
}

Verdict is_spe(const TruncatedTree& t, const TreeStrategyProfile& s) {
  return run_check(t, s, Relation::nash, true);
}

Verdict is_spse(const TruncatedTree& t, const TreeStrategyProfile& s) {
  return run_check(t, s, Relation::secure, true);
}

Verdict check(const TruncatedTree& t, const TreeStrategyProfile& s, Notion n) {
  switch (n) {
    case Notion::nash: return is_nash(t, s);
    case Notion::secure: return is_secure(t, s);
    case Notion::spe: return is_spe(t, s);
    case Notion::spse: return is_spse(t, s);
  }
  return {};
}

bool is_goal_optimized(const GameGraph& g, const CostProfile& x) {
  const Cost bound(static_cast<std::int64_t>(depth_constants(g).d_goal));
  return std::all_of(x.begin(), x.end(), [&](const Cost& c) { return !c.finite() || c < bound; });
}

bool is_goal_optimized(const TruncatedTree& t, const TreeStrategyProfile& s) {
  check_profile(t, s);
  return is_goal_optimized(t.game(), outcome(t, s).costs);
}

std::uint64_t dev_depth(const CostProfile& x, const GameGraph& g) {
  std::int64_t top = 0;
  for (const Cost& c : x) {
    if (!c.finite()) continue;
    if (c.value().denominator() != 1) throw PreconditionError("deviation depth needs integer costs");
    top = std::max(top, c.value().numerator());
  }
  return static_cast<std::uint64_t>(top) + g.vertex_count();
}

Verdict is_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s) {
  check_profile(t, s);
  NodeId leaf = outcome_leaf(t, s, TruncatedTree::root());
  std::uint64_t d_dev = dev_depth(t.costs(leaf), t.game());
  if (t.depth() < d_dev) {
    throw PreconditionError("tree depth " + std::to_string(t.depth()) + " is below d_dev = " +
                            std::to_string(d_dev));
  }
  Scope sc{t, static_cast<std::uint32_t>(d_dev - 1)};
  Profiles p(sc);
  NodeId prefix = t.ancestor(leaf, sc.horizon);
  const CostProfile& x = p.table[p.pid[prefix]];
  for (Player j = 0; j < t.game().player_count(); ++j) {
    AchievableSets sets(sc, s, p, j);
    std::optional<Witness> w;
    sets.for_each(TruncatedTree::root(), [&](const Entry& e) {
      if (w || !secure_prefers(j, x, p.table[e.pid])) return;
      w = Witness{j, TruncatedTree::root(), first_divergence(t, s, TruncatedTree::root(), e.leaf),
                  e.leaf, x, p.table[e.pid], Relation::secure};
    });
    if (w) return {false, w};
  }
  return {};
}

Verdict devopt_characterization(const TruncatedTree& t, const TreeStrategyProfile& s) {
  if (!is_secure(t, s).holds) throw PreconditionError("the characterization assumes a secure profile");
  NodeId leaf = outcome_leaf(t, s, TruncatedTree::root());
  const CostProfile x = t.costs(leaf);
  const Cost d_dev(static_cast<std::int64_t>(dev_depth(x, t.game())));
  Scope sc = make_scope(t, std::nullopt);
  Profiles p(sc);
  const std::size_t np = x.size();
  for (Player j = 0; j < np; ++j) {
    AchievableSets sets(sc, s, p, j);
    std::optional<Witness> w;
    sets.for_each(TruncatedTree::root(), [&](const Entry& e) {
      if (w) return;
      const CostProfile& y = p.table[e.pid];
      if (y[j] != x[j]) return;
      bool strict = false;
      for (Player i = 0; i < np; ++i) {
        if (x[i].finite() && y[i] < x[i]) return;
        strict = strict || x[i] < y[i];
      }
      if (!strict) return;
      for (Player l = 0; l < np; ++l) {
        if (!x[l].finite() && y[l] < d_dev) return;
      }
      w = Witness{j, TruncatedTree::root(), first_divergence(t, s, TruncatedTree::root(), e.leaf),
                  e.leaf, x, y, Relation::secure};
    });
    if (w) return {false, w};
  }
  return {};
}

TreeStrategyProfile parse_tree_profile(const TruncatedTree& t, std::string_view text) {
  const GameGraph& g = t.game();
  std::map<NodeId, Vertex> at_node;
  std::vector<Vertex> at_vertex(g.vertex_count(), kNoVertex);
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    auto tok = split_ws(strip_comment(raw));
    if (tok.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw InputError("line " + std::to_string(line) + ": " + what);
    };
    if (tok.size() != 3 || (tok[1] != "->" && tok[1] != "=>")) fail("expected 'HISTORY -> V' or 'V => W'");
    Vertex w = g.vertex(tok[2]);
    if (tok[1] == "=>") {
      Vertex v = g.vertex(tok[0]);
      if (!g.has_edge(v, w)) fail(tok[0] + " -> " + tok[2] + " is not an edge");
      at_vertex[v] = w;
      continue;
    }
    History h = parse_history(g, tok[0]);
    if (!is_history(g, h)) fail("'" + tok[0] + "' is not a history of the game");
    if (!g.has_edge(h.back(), w)) fail(g.name(h.back()) + " -> " + tok[2] + " is not an edge");
    if (length(h) >= t.depth()) continue;
    NodeId n = t.find(h);
    if (n == kNoNode) fail("history '" + tok[0] + "' does not start at the initial vertex");
    at_node[n] = w;
  }
  TreeStrategyProfile s;
  s.choice.assign(t.size(), kNoNode);
  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.is_leaf(n)) continue;
    Vertex v = t.vertex(n);
    auto it = at_node.find(n);
    Vertex w = it != at_node.end() ? it->second : at_vertex[v];
    if (w == kNoVertex) {
      if (t.node(n).child_count != 1) {
        throw InputError("profile undefined at history " + render_history(g, t.history(n)));
      }
      w = g.successors(v).front();
    }
    s.choice[n] = t.child_with_vertex(n, w);
  }
  return s;
}

std::string render_tree_profile(const TruncatedTree& t, const TreeStrategyProfile& s) {
  check_profile(t, s);
  std::ostringstream out;
  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.is_leaf(n) || t.node(n).child_count < 2) continue;
    out << render_history(t.game(), t.history(n)) << " -> " << t.game().name(t.vertex(s.choice[n])) << "\n";
  }
  return out.str();
}

}  // namespace qrg
