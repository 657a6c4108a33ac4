#include "qrg/construction.hpp"

#include "qrg/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>

namespace qrg {

Player punishment(const GameGraph& g, const History& h, const Lasso& reference) {
  if (h.empty() || h.front() != reference.at(0)) throw PreconditionError("history does not start on the reference play");
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k] != reference.at(k)) return g.owner(h[k - 1]);
  }
  return kNoPlayer;
}

std::vector<Player> sorted_players(const CostProfile& x) {
  std::vector<Player> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Player a, Player b) { return x[a] < x[b]; });
  return order;
}

namespace {

Cost as_cost(std::size_t n) { return Cost(static_cast<std::int64_t>(n)); }

// Smallest x_i beyond len; throws when there is none (k = n).
Cost next_cost(const CostProfile& x, std::size_t len) {
  std::optional<Cost> next;
  for (const Cost& c : x) {
    if (c > as_cost(len) && (!next || c < *next)) next = c;
  }
  if (!next) throw PreconditionError("every cost is reached within the history (k = n)");
  return *next;
}

PromisingResult promising_core(const CostProfile& x, const CostProfile& ch, std::size_t len, Player j) {
  Cost next = next_cost(x, len);
  PromisingResult r;
  r.profitable_deviation = ch[j] < x[j];
  bool ge = true, gt = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ge = ge && ch[i] >= x[i];
    gt = gt || ch[i] > x[i];
  }
  if (next.finite()) {
    r.promising = x[j] <= as_cost(len) ? ch[j] == x[j] && ge : !ch[j].finite();
  } else {
    r.promising = ch[j] == x[j] && ge && gt;
  }
  return r;
}

struct CaseSets {
  PunishmentCase which;
  VertexSet reach;
  VertexSet safe;
};

CaseSets punishment_case(const GameGraph& g, const CostProfile& x, std::size_t len, Player j,
                         const CostProfile& reference_prefix, const CostProfile& ch) {
  const std::size_t n = g.vertex_count();
  auto late_goals = [&](bool skip_j) {
    VertexSet r(n, false);
    for (Player i = 0; i < x.size(); ++i) {
      if (x[i] <= as_cost(len) || (skip_j && i == j)) continue;
      for (Vertex v : g.goal(i)) r[v] = true;
    }
    return r;
  };
  VertexSet not_own = all_vertices(n);
  for (Vertex v : g.goal(j)) not_own[v] = false;
  if (x[j] <= as_cost(len)) return {PunishmentCase::reach_late_goals, late_goals(false), all_vertices(n)};
  if (x[j].finite()) return {PunishmentCase::avoid_own_goal, all_vertices(n), not_own};
  if (secure_prefers_eq(j, reference_prefix, ch)) {
    return {PunishmentCase::reach_goals_avoid_own, late_goals(true), not_own};
  }
  return {PunishmentCase::avoid_own_goal_late, all_vertices(n), not_own};
}

CoalitionStrategy solve_case(const GameGraph& g, Player j, CaseSets cs) {
  CoalitionStrategy c;
  c.deviator = j;
  c.which = cs.which;
  c.reach = std::move(cs.reach);
  c.safe = std::move(cs.safe);
  c.winning.assign(g.vertex_count(), false);
  c.move.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) c.move[v] = g.least_successor(v);
  if (std::none_of(c.reach.begin(), c.reach.end(), [](bool b) { return b; })) return c;
  AttractorResult r = solve_reach_under_safety(build_coalition_game(g, j, c.reach, c.safe));
  c.winning = r.winning;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (r.protagonist_strategy[v] != kNoVertex) c.move[v] = r.protagonist_strategy[v];
  }
  return c;
}

void require_unit(const TruncatedTree& t) {
  if (t.model() != CostModel::unit) throw PreconditionError("constructions use unit costs");
}

// Player j can have produced the node while the others followed s.
bool consistent_except(const TruncatedTree& t, const TreeStrategyProfile& s, NodeId n, Player j) {
  while (n != TruncatedTree::root()) {
    NodeId p = t.node(n).parent;
    if (t.owner(p) != j && s.choice[p] != n) return false;
    n = p;
  }
  return true;
}

// Coalition strategies at promising pivots of a fixed length, shared by the
// cycle removal and the dev-optimization.
class Punisher {
 public:
  Punisher(const TruncatedTree& t, const TreeStrategyProfile& s, const CostProfile& x, std::size_t len,
           CostProfile reference_prefix, bool check_window)
      : t_(t), s_(s), x_(x), len_(len), ref_(std::move(reference_prefix)), check_window_(check_window) {}

  // Move at node n (of any tree sharing t's prefix) when player j is punished
  // from the pivot; nullopt when the pivot is not j-promising.
  std::optional<Vertex> move(NodeId pivot, Player j, Vertex at) {
    auto key = std::make_pair(pivot, j);
    auto it = pivots_.find(key);
    if (it == pivots_.end()) it = pivots_.emplace(key, evaluate(pivot, j)).first;
    if (!it->second) return std::nullopt;
    return strategies_.at(*it->second).move[at];
  }

  std::size_t pivots_used() const {
    return static_cast<std::size_t>(std::count_if(pivots_.begin(), pivots_.end(),
                                                  [](const auto& kv) { return kv.second.has_value(); }));
  }

 private:
  std::optional<std::size_t> evaluate(NodeId pivot, Player j) {
    const GameGraph& g = t_.game();
    if (!consistent_except(t_, s_, pivot, j)) return std::nullopt;
    std::size_t k = 0;
    for (const Cost& c : x_) k += c <= as_cost(len_);
    if (k == x_.size()) return std::nullopt;
    CostProfile ch = t_.costs(pivot);
    if (!promising_core(x_, ch, len_, j).promising) return std::nullopt;
    if (check_window_) {
      Cost next = next_cost(x_, len_);
      if (next.finite() && as_cost(len_ + g.vertex_count()) > next) return std::nullopt;
    }
    CaseSets cs = punishment_case(g, x_, len_, j, ref_, ch);
    auto key = std::make_pair(j, static_cast<int>(cs.which));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      strategies_.push_back(solve_case(g, j, std::move(cs)));
      it = cache_.emplace(key, strategies_.size() - 1).first;
    }
    const CoalitionStrategy& c = strategies_[it->second];
    if (!c.winning[t_.vertex(pivot)]) {
      throw NotSecureError("input profile is not a secure equilibrium: the coalition cannot punish player " +
                           std::to_string(j + 1) + " from " + render_history(g, t_.history(pivot)));
    }
    return it->second;
  }

  const TruncatedTree& t_;
  const TreeStrategyProfile& s_;
  const CostProfile& x_;
  std::size_t len_;
  CostProfile ref_;
  bool check_window_;
  std::map<std::pair<NodeId, Player>, std::optional<std::size_t>> pivots_;
  std::map<std::pair<Player, int>, std::size_t> cache_;
  std::vector<CoalitionStrategy> strategies_;
};

}  // namespace

PromisingResult is_promising(const GameGraph& g, const CostProfile& x, const History& h, Player j) {
  if (x.size() != g.player_count() || j >= x.size()) throw PreconditionError("profile size mismatch");
  return promising_core(x, cost_profile(g, h), length(h), j);
}

CoalitionStrategy coalition_punishment(const GameGraph& g, const CostProfile& x, const History& h,
                                       Player j, const CostProfile& reference_prefix,
                                       CoalitionOptions options) {
  check_history(g, h);
  const std::size_t len = length(h);
  CostProfile ch = cost_profile(g, h);
  if (!promising_core(x, ch, len, j).promising) {
    throw PreconditionError("history " + render_history(g, h) + " is not " + std::to_string(j + 1) + "-promising");
  }
  if (options.check_window) {
    Cost next = next_cost(x, len);
    if (next.finite() && as_cost(len + g.vertex_count()) > next) {
      throw PreconditionError("window |h| + |V| <= x_{k+1} violated");
    }
  }
  CoalitionStrategy c = solve_case(g, j, punishment_case(g, x, len, j, reference_prefix, ch));
  if (!c.winning[h.back()]) {
    throw NotSecureError("input profile is not a secure equilibrium: the coalition cannot punish player " +
                         std::to_string(j + 1) + " from " + render_history(g, h));
  }
  return c;
}

Transformed remove_cycle(const TruncatedTree& t, const TreeStrategyProfile& s, CycleChoice c,
                         CycleOptions options) {
  require_unit(t);
  check_profile(t, s);
  const GameGraph& g = t.game();
  const Outcome o = outcome(t, s);
  const std::size_t D = t.depth(), nv = g.vertex_count();
  if (!(c.i < c.j && c.j <= D)) throw PreconditionError("cycle positions out of range");
  const std::vector<NodeId>& path = o.path;
  if (t.vertex(path[c.i]) != t.vertex(path[c.j])) throw PreconditionError("last(alpha) != last(alpha beta)");
  const PlayerSet va = t.visit_mask(path[c.i]);
  if (t.visit_mask(path[c.j]) != va) throw PreconditionError("the cycle visits a new goal set");
  if (t.visit_mask(o.leaf) == va) throw PreconditionError("no goal set is visited after the cycle");
  if (options.enforce_gamma_bound) {
    if (c.j + nv > D || t.visit_mask(path[c.j + nv]) != va) {
      throw PreconditionError("a new goal set is visited within |V| positions after the cycle");
    }
  }
  const std::size_t shift = c.j - c.i;
  if (D - shift < 1) throw PreconditionError("the shortened tree would be empty");

  Transformed r;
  r.excised = shift;
  r.tree = unravel(g, t.vertex(TruncatedTree::root()), static_cast<std::uint32_t>(D - shift), t.model(),
                   std::max<std::size_t>(t.size(), 1));
  const TruncatedTree& u = r.tree;
  Punisher punisher(t, s, o.costs, c.i, t.costs(path[c.i]), options.enforce_gamma_bound);

  std::vector<NodeId> image(u.size(), kNoNode);  // node alpha.delta -> alpha.beta.delta of t
  std::vector<char> onpath(u.size(), 0);
  std::vector<Player> pun(u.size(), kNoPlayer);
  image[path[c.i]] = path[c.j];
  onpath[TruncatedTree::root()] = 1;
  r.profile.choice.assign(u.size(), kNoNode);
  for (NodeId n = 0; n < u.size(); ++n) {
    const TreeNode& x = u.node(n);
    if (n != TruncatedTree::root() && image[x.parent] != kNoNode) {
      image[n] = t.child_with_vertex(image[x.parent], x.vertex);
    }
    if (u.is_leaf(n)) continue;
    const Player owner = u.owner(n);
    NodeId pick;
    if (image[n] != kNoNode) {
      pick = u.child_with_vertex(n, t.vertex(s.choice[image[n]]));
    } else if (options.punish && pun[n] == owner) {
      pick = x.first_child;
    } else {
      std::optional<Vertex> w;
      if (options.punish && pun[n] != kNoPlayer && x.depth >= c.i) {
        w = punisher.move(u.ancestor(n, static_cast<std::uint32_t>(c.i)), pun[n], x.vertex);
      }
      pick = w ? u.child_with_vertex(n, *w) : s.choice[n];
    }
    r.profile.choice[n] = pick;
    for (std::uint32_t k = 0; k < x.child_count; ++k) {
      NodeId ch = x.first_child + k;
      if (pun[n] != kNoPlayer) {
        pun[ch] = pun[n];
      } else if (onpath[n] && ch == pick) {
        onpath[ch] = 1;
      } else {
        pun[ch] = onpath[n] ? owner : pun[n];
      }
    }
  }
  r.outcome = outcome(u, r.profile);
  r.secure = is_secure(u, r.profile);
  for (Player i = 0; i < o.costs.size(); ++i) {
    if (r.outcome.costs[i] > o.costs[i]) {
      r.notes.push_back("cost of player " + std::to_string(i + 1) + " increased");
    }
  }
  if (!r.secure.holds) r.notes.push_back("re-verification failed: " + describe(u, *r.secure.witness));
  return r;
}

Transformed make_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s) {
  require_unit(t);
  check_profile(t, s);
  const GameGraph& g = t.game();
  const Outcome o = outcome(t, s);
  const std::size_t len = dev_depth(o.costs, g) - g.vertex_count();
  const NodeId alpha = o.path.at(len);
  Punisher punisher(t, s, o.costs, len, t.costs(alpha), true);

  Transformed r;
  r.tree = t;
  r.profile.choice.assign(t.size(), kNoNode);
  std::vector<Player> pun(t.size(), kNoPlayer);
  std::vector<char> onpath(t.size(), 0);
  onpath[TruncatedTree::root()] = 1;
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& x = t.node(n);
    if (t.is_leaf(n)) continue;
    const Player owner = t.owner(n);
    NodeId pick = s.choice[n];
    if (pun[n] == owner) {
      pick = x.first_child;
    } else if (pun[n] != kNoPlayer && x.depth >= len) {
      NodeId pivot = t.ancestor(n, static_cast<std::uint32_t>(len));
      if (pivot != alpha) {
        if (auto w = punisher.move(pivot, pun[n], x.vertex)) pick = t.child_with_vertex(n, *w);
      }
    }
    r.profile.choice[n] = pick;
    for (std::uint32_t k = 0; k < x.child_count; ++k) {
      NodeId ch = x.first_child + k;
      if (pun[n] != kNoPlayer) {
        pun[ch] = pun[n];
      } else if (onpath[n] && ch == pick) {
        onpath[ch] = 1;
      } else {
        pun[ch] = owner;
      }
    }
  }
  r.outcome = outcome(t, r.profile);
  r.secure = is_secure(t, r.profile);
  if (!r.secure.holds) r.notes.push_back("re-verification failed: " + describe(t, *r.secure.witness));
  if (t.depth() >= dev_depth(r.outcome.costs, g)) {
    r.dev_optimized = is_dev_optimized(t, r.profile);
  } else {
    r.notes.push_back("tree shallower than d_dev; dev-optimality not checked");
  }
  return r;
}

Transformed make_goal_dev_optimized(const TruncatedTree& t, const TreeStrategyProfile& s) {
  require_unit(t);
  const GameGraph& g = t.game();
  const std::size_t nv = g.vertex_count();
  TruncatedTree tree = t;
  TreeStrategyProfile prof = s;
  std::size_t excised = 0;
  std::vector<std::string> notes;
  while (true) {
    Outcome o = outcome(tree, prof);
    std::vector<std::int64_t> f{0};
    for (const Cost& c : o.costs) {
      if (c.finite()) f.push_back(c.value().numerator());
    }
    std::sort(f.begin() + 1, f.end());
    std::optional<CycleChoice> choice;
    for (std::size_t k = 0; k + 1 < f.size() && !choice; ++k) {
      if (f[k + 1] - f[k] < static_cast<std::int64_t>(2 * nv)) continue;
      for (std::size_t i = static_cast<std::size_t>(f[k]); !choice && i + 1 < o.path.size(); ++i) {
        for (std::size_t j = i + 1; j <= i + nv && j < o.path.size(); ++j) {
          if (static_cast<std::int64_t>(j + nv) >= f[k + 1]) break;
          if (tree.vertex(o.path[i]) == tree.vertex(o.path[j])) {
            choice = CycleChoice{i, j};
            break;
          }
        }
      }
      if (!choice) notes.push_back("gap after cost " + std::to_string(f[k]) + " has no removable cycle");
    }
    if (!choice) break;
    Transformed r = remove_cycle(tree, prof, *choice);
    excised += r.excised;
    notes.insert(notes.end(), r.notes.begin(), r.notes.end());
    if (!r.secure.holds) {
      r.excised = excised;
      r.notes = notes;
      return r;
    }
    tree = std::move(r.tree);
    prof = std::move(r.profile);
  }
  Transformed r = make_dev_optimized(tree, prof);
  r.excised = excised;
  notes.insert(notes.end(), r.notes.begin(), r.notes.end());
  r.notes = notes;
  return r;
}

namespace {

struct Decomposition {
  std::size_t i, j;
};

// Builds the machines for one decomposition; nullopt with a reason when a
// coalition check fails.
std::optional<MooreProfile> build_machines(const TruncatedTree& t, const TreeStrategyProfile& s,
                                           const std::vector<NodeId>& path, Decomposition dc,
                                           std::string& reason) {
  const GameGraph& g = t.game();
  const std::size_t np = g.player_count(), nv = g.vertex_count();
  const PlayerSet va = t.visit_mask(path[dc.i]);

  // Tracked off-path nodes above depth i, with the player being punished.
  std::vector<Player> pun(t.size(), kNoPlayer);
  std::vector<State> tracked(t.size(), 0);
  std::vector<NodeId> tracked_nodes;
  std::vector<char> onpath(t.size(), 0);
  for (std::size_t p = 0; p <= dc.i; ++p) onpath[path[p]] = 1;
  const NodeId stop = t.level_begin(static_cast<std::uint32_t>(dc.i));
  for (NodeId n = 0; n < stop; ++n) {
    const TreeNode& x = t.node(n);
    bool from_path = onpath[n];
    if (!from_path && pun[n] == kNoPlayer) continue;
    for (std::uint32_t k = 0; k < x.child_count; ++k) {
      NodeId c = x.first_child + k;
      if (onpath[c]) continue;
      Player q = from_path ? t.owner(n) : pun[n];
      if (!from_path && t.owner(n) != q && s.choice[n] != c) continue;
      pun[c] = q;
      if (t.node(c).depth < dc.i) tracked_nodes.push_back(c);
    }
  }

  // Coalition checks for players whose goal alpha misses.
  std::vector<AttractorResult> games(np);
  for (Player q = 0; q < np; ++q) {
    if (contains(va, q)) continue;
    games[q] = solve_reach_under_safety(build_player_game(g, q, vertex_set(nv, g.goal(q)), all_vertices(nv)));
    const VertexSet& w = games[q].winning;
    for (std::size_t p = dc.i; p < dc.j; ++p) {
      Vertex v = t.vertex(path[p]);
      if (g.owner(v) == q && w[v]) {
        reason = "player " + std::to_string(q + 1) + " can reach his goal from the cycle vertex " + g.name(v);
        return std::nullopt;
      }
    }
    const NodeId begin = t.level_begin(static_cast<std::uint32_t>(dc.i));
    const NodeId end = t.level_begin(static_cast<std::uint32_t>(dc.i + 1));
    for (NodeId c = begin; c < end; ++c) {
      if (pun[c] == q && w[t.vertex(c)]) {
        reason = "player " + std::to_string(q + 1) + " escapes punishment at " + render_history(g, t.history(c));
        return std::nullopt;
      }
    }
  }

  // States: 0 start, 1..j on the path, then tracked nodes, then one per punished player.
  const State on0 = 1;
  const State track0 = on0 + static_cast<State>(dc.j);
  for (std::size_t k = 0; k < tracked_nodes.size(); ++k) tracked[tracked_nodes[k]] = track0 + static_cast<State>(k);
  const State pun0 = track0 + static_cast<State>(tracked_nodes.size());
  const std::size_t states = pun0 + np;
  auto on = [&](std::size_t p) { return on0 + static_cast<State>(p == dc.j ? dc.i : p); };

  MooreMachine base(states, nv, 0);
  for (Vertex v = 0; v < nv; ++v) base.set_next(0, v, on(0));
  for (std::size_t p = 0; p < dc.j; ++p) {
    Player dev = t.owner(path[p]);
    for (Vertex v = 0; v < nv; ++v) {
      State next = pun0 + dev;
      if (v == t.vertex(path[p + 1])) {
        next = on(p + 1);
      } else if (p + 1 < dc.i) {
        NodeId c = t.child_with_vertex(path[p], v);
        if (c != kNoNode && tracked[c]) next = tracked[c];
      }
      base.set_next(on(p), v, next);
    }
  }
  for (NodeId n : tracked_nodes) {
    for (Vertex v = 0; v < nv; ++v) {
      NodeId c = t.child_with_vertex(n, v);
      base.set_next(tracked[n], v, c != kNoNode && tracked[c] ? tracked[c] : pun0 + pun[n]);
    }
  }

  MooreProfile prof;
  for (Player me = 0; me < np; ++me) {
    MooreMachine m = base;
    for (std::size_t p = 0; p < dc.j; ++p) {
      if (t.owner(path[p]) == me) m.set_output(on(p), t.vertex(path[p]), t.vertex(path[p + 1]));
    }
    for (NodeId n : tracked_nodes) {
      if (t.owner(n) == me && pun[n] != me) m.set_output(tracked[n], t.vertex(n), t.vertex(s.choice[n]));
    }
    for (Player q = 0; q < np; ++q) {
      if (q == me || contains(va, q)) continue;
      for (Vertex v = 0; v < nv; ++v) {
        if (g.owner(v) == me && games[q].antagonist_strategy[v] != kNoVertex) {
          m.set_output(pun0 + q, v, games[q].antagonist_strategy[v]);
        }
      }
    }
    prof.machines.push_back(std::move(m));
  }
  return prof;
}

}  // namespace

Assembly assemble_finite_memory(const TruncatedTree& t, const TreeStrategyProfile& s) {
  require_unit(t);
  check_profile(t, s);
  const GameGraph& g = t.game();
  const std::size_t nv = g.vertex_count(), np = g.player_count();
  const Outcome o = outcome(t, s);
  const DepthConstants dc = depth_constants(g);
  const std::size_t D = t.depth();
  const bool full = D >= dc.d;
  const std::size_t lo = full ? dc.d_goal + nv : dev_depth(o.costs, g);
  const Vertex v0 = t.vertex(TruncatedTree::root());
  std::vector<std::string> rejected;
  for (std::size_t i = lo; i < D; ++i) {
    for (std::size_t j = i + 1; j <= std::min(i + nv, D); ++j) {
      if (t.vertex(o.path[i]) != t.vertex(o.path[j])) continue;
      if (full ? j > dc.d_goal + 2 * nv : j + nv - 1 > D) continue;
      if (t.visit_mask(o.path[i]) != t.visit_mask(o.leaf)) continue;
      std::string reason;
      auto prof = build_machines(t, s, o.path, {i, j}, reason);
      std::string where = "(i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
      if (!prof) {
        rejected.push_back(where + " " + reason);
        continue;
      }
      Lasso expected;
      for (std::size_t p = 0; p <= i; ++p) expected.stem.push_back(t.vertex(o.path[p]));
      for (std::size_t p = i + 1; p <= j; ++p) expected.cycle.push_back(t.vertex(o.path[p]));
      Lasso got = simulate(g, v0, *prof);
      if (!same_play(got, expected) || cost_profile(g, got) != o.costs) {
        rejected.push_back(where + " simulated outcome differs");
        continue;
      }
      MooreVerdict mv = verify_moore_secure(g, v0, *prof);
      if (!mv.holds) {
        rejected.push_back(where + " " + mv.detail);
        continue;
      }
      Assembly a;
      a.profile = std::move(*prof);
      a.outcome = expected;
      a.cycle = {i, j};
      a.full_window = full;
      a.state_bound = t.level_begin(static_cast<std::uint32_t>(i + 1)) + nv * np + 1;
      a.notes = rejected;
      if (!full) a.notes.push_back("tree depth below d; decomposition taken from the reduced window");
      return a;
    }
  }
  std::string msg = "decomposition not found";
  for (const auto& r : rejected) msg += "; " + r;
  throw PreconditionError(msg);
}

namespace {

enum : std::uint8_t { kUnvisited = 0, kLess = 1, kEqual = 2, kGreater = 3 };

struct ProductKey {
  std::uint32_t time;
  Vertex v;
  std::vector<State> states;
  std::vector<std::uint8_t> cats;
  friend bool operator<(const ProductKey& a, const ProductKey& b) {
    return std::tie(a.time, a.v, a.states, a.cats) < std::tie(b.time, b.v, b.states, b.cats);
  }
};

}  // namespace

MooreVerdict verify_moore_secure(const GameGraph& g, Vertex v0, const MooreProfile& p) {
  check_moore(g, p);
  const std::size_t np = g.player_count();
  const CostProfile x = cost_profile(g, simulate(g, v0, p));
  std::int64_t top = 0;
  for (const Cost& c : x) {
    if (c.finite()) top = std::max(top, c.value().numerator());
  }
  const std::uint32_t T = static_cast<std::uint32_t>(top + 1);

  for (Player j = 0; j < np; ++j) {
    std::vector<ProductKey> nodes;
    std::vector<std::size_t> parent;
    std::map<ProductKey, std::size_t> index;
    std::deque<std::size_t> queue;
    auto visit = [&](ProductKey k, std::size_t from) {
      for (Player i = 0; i < np; ++i) {
        if (k.cats[i] != kUnvisited || !g.in_goal(i, k.v)) continue;
        if (!x[i].finite()) k.cats[i] = kLess;
        else if (k.time < T) k.cats[i] = Cost(k.time) < x[i] ? kLess : Cost(k.time) == x[i] ? kEqual : kGreater;
        else k.cats[i] = kGreater;
      }
      if (k.time == T) {
        for (Player i = 0; i < np; ++i) {
          if (x[i].finite() && k.cats[i] == kUnvisited) k.cats[i] = kGreater;
        }
      }
      auto [it, fresh] = index.emplace(k, nodes.size());
      if (fresh) {
        nodes.push_back(std::move(k));
        parent.push_back(from);
        queue.push_back(it->second);
      }
      return it->second;
    };
    auto history_of = [&](std::size_t n) {
      History h;
      for (std::size_t m = n; m != SIZE_MAX; m = parent[m]) h.push_back(nodes[m].v);
      std::reverse(h.begin(), h.end());
      return h;
    };
    ProductKey start{0, v0, {}, std::vector<std::uint8_t>(np, kUnvisited)};
    for (const auto& m : p.machines) start.states.push_back(m.next(m.initial(), v0));
    visit(std::move(start), SIZE_MAX);
    std::vector<std::vector<std::size_t>> succ;
    while (!queue.empty()) {
      std::size_t n = queue.front();
      queue.pop_front();
      if (nodes[n].cats[j] == kLess) {
        return {false, j, history_of(n), "player " + std::to_string(j + 1) + " lowers his own cost"};
      }
      const ProductKey cur = nodes[n];
      std::vector<Vertex> moves;
      if (g.owner(cur.v) == j) {
        moves = g.successors(cur.v);
      } else {
        Player o = g.owner(cur.v);
        moves.push_back(p.machines[o].choose(g, cur.states[o], cur.v));
      }
      std::vector<std::size_t> out;
      for (Vertex w : moves) {
        ProductKey k{std::min(cur.time + 1, T), w, cur.states, cur.cats};
        for (Player i = 0; i < np; ++i) k.states[i] = p.machines[i].next(k.states[i], w);
        out.push_back(visit(std::move(k), n));
      }
      if (succ.size() < nodes.size()) succ.resize(nodes.size());
      succ[n] = std::move(out);
    }
    succ.resize(nodes.size());

    // Late states whose categories already make x <_j y, provided no further
    // goal of an unvisited infinite-cost player is ever visited.
    auto good = [&](const ProductKey& k) {
      if (k.time < T) return false;
      if (k.cats[j] != kEqual && !(k.cats[j] == kUnvisited && !x[j].finite())) return false;
      bool greater = false;
      for (Player i = 0; i < np; ++i) {
        std::uint8_t c = k.cats[i];
        if (c == kLess) return false;
        greater = greater || c == kGreater;
      }
      return greater;
    };
    std::vector<char> alive(nodes.size(), 0);
    std::vector<std::size_t> out_alive(nodes.size(), 0);
    std::vector<std::vector<std::size_t>> pred(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (!good(nodes[n])) continue;
      alive[n] = 1;
    }
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (!alive[n]) continue;
      for (std::size_t m : succ[n]) {
        if (alive[m] && nodes[m].cats == nodes[n].cats) {
          ++out_alive[n];
          pred[m].push_back(n);
        }
      }
    }
    std::vector<std::size_t> dead;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (alive[n] && out_alive[n] == 0) dead.push_back(n);
    }
    while (!dead.empty()) {
      std::size_t n = dead.back();
      dead.pop_back();
      alive[n] = 0;
      for (std::size_t m : pred[n]) {
        if (alive[m] && --out_alive[m] == 0) dead.push_back(m);
      }
    }
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (alive[n]) {
        return {false, j, history_of(n),
                "player " + std::to_string(j + 1) + " keeps his cost and raises another player's"};
      }
    }
  }
  return {};
}

DeviationReport simulate_deviations(const GameGraph& g, Vertex v0, const MooreProfile& p,
                                    std::size_t runs, std::size_t steps, std::uint64_t seed) {
  check_moore(g, p);
  const std::size_t np = g.player_count();
  DeviationReport rep;
  rep.x = cost_profile(g, simulate(g, v0, p));
  std::mt19937_64 rng(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    Player j = static_cast<Player>(std::uniform_int_distribution<std::size_t>(0, np - 1)(rng));
    std::vector<State> st;
    for (const auto& m : p.machines) st.push_back(m.next(m.initial(), v0));
    History play{v0};
    auto advance = [&](bool random) {
      Vertex v = play.back();
      Vertex w;
      if (g.owner(v) == j) {
        const auto& succ = g.successors(v);
        w = random ? succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)] : succ.front();
      } else {
        Player o = g.owner(v);
        w = p.machines[o].choose(g, st[o], v);
      }
      for (Player i = 0; i < np; ++i) st[i] = p.machines[i].next(st[i], w);
      play.push_back(w);
    };
    for (std::size_t k = 0; k < steps; ++k) advance(true);
    std::map<std::pair<std::vector<State>, Vertex>, std::size_t> seen;
    while (seen.emplace(std::make_pair(st, play.back()), play.size()).second) advance(false);
    CostProfile y = cost_profile(g, play);
    ++rep.runs;
    if (secure_prefers(j, rep.x, y)) {
      if (!rep.player) {
        rep.player = j;
        rep.y = y;
      }
      ++rep.beaten;
    }
  }
  return rep;
}

}  // namespace qrg
