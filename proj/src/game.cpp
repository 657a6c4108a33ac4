#include "qrg/game.hpp"

#include "qrg/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qrg {

std::vector<Player> members(PlayerSet s) {
  std::vector<Player> out;
  for (Player i = 0; s; ++i, s >>= 1) {
    if (s & 1u) out.push_back(i);
  }
  return out;
}

std::optional<Vertex> GameGraph::find(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<Vertex>(it - names_.begin());
}

Vertex GameGraph::vertex(const std::string& name) const {
  auto v = find(name);
  if (!v) throw InputError("unknown vertex '" + name + "'");
  return *v;
}

bool GameGraph::has_edge(Vertex from, Vertex to) const {
  const auto& s = succ_[from];
  return std::binary_search(s.begin(), s.end(), to);
}

const std::vector<Rational>& GameGraph::weights(Vertex from, Vertex to) const {
  static const std::vector<Rational> kNone;
  if (!weighted_) return kNone;
  const auto& s = succ_[from];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) return kNone;
  return weights_[from][static_cast<std::size_t>(it - s.begin())];
}

void GameBuilder::mention(const std::string& name) {
  if (owners_.emplace(name, -1).second) order_.push_back(name);
}

GameBuilder& GameBuilder::players(std::size_t n) {
  players_ = n;
  return *this;
}

GameBuilder& GameBuilder::vertex(const std::string& name, std::int64_t owner) {
  auto it = owners_.find(name);
  if (it != owners_.end() && it->second != -1) {
    problems_.push_back("vertex " + name + " declared twice");
  }
  mention(name);
  owners_[name] = owner;
  return *this;
}

GameBuilder& GameBuilder::edge(const std::string& from, const std::string& to,
                               std::vector<Rational> weights) {
  mention(from);
  mention(to);
  edges_.push_back({from, to, std::move(weights)});
  return *this;
}

GameBuilder& GameBuilder::goal(std::int64_t player, const std::vector<std::string>& vertices) {
  auto& g = goals_[player];
  for (const auto& v : vertices) {
    mention(v);
    g.push_back(v);
  }
  return *this;
}

GameBuilder& GameBuilder::initial(const std::string& name) {
  mention(name);
  initial_ = name;
  return *this;
}

GameGraph GameBuilder::build() const {
  GameGraph g;
  g.players_ = players_;
  g.build_problems_ = problems_;
  if (players_ > kMaxPlayers) {
    g.build_problems_.push_back("at most " + std::to_string(kMaxPlayers) + " players are supported");
  }
  g.names_ = order_;
  std::sort(g.names_.begin(), g.names_.end());
  const std::size_t n = g.names_.size();
  g.owner_.assign(n, kNoPlayer);
  for (Vertex v = 0; v < n; ++v) {
    std::int64_t o = owners_.at(g.names_[v]);
    if (o == -1) continue;
    g.owner_[v] = (o >= 1 && static_cast<std::size_t>(o) <= players_) ? static_cast<Player>(o - 1)
                                                                       : kNoPlayer;
    if (g.owner_[v] == kNoPlayer) {
      g.build_problems_.push_back("vertex " + g.names_[v] + " has owner " + std::to_string(o) +
                                  " outside 1.." + std::to_string(players_));
    }
  }

  std::vector<std::vector<std::pair<Vertex, std::vector<Rational>>>> adj(n);
  bool any_weights = false;
  for (const auto& e : edges_) {
    Vertex a = *g.find(e.from);
    Vertex b = *g.find(e.to);
    auto& out = adj[a];
    if (std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.first == b; })) {
      g.build_problems_.push_back("duplicate edge " + e.from + " -> " + e.to);
      continue;
    }
    any_weights = any_weights || !e.weights.empty();
    out.emplace_back(b, e.weights);
  }
  g.weighted_ = any_weights;
  g.succ_.resize(n);
  g.weights_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    auto& out = adj[v];
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [to, w] : out) {
      g.succ_[v].push_back(to);
      g.weights_[v].push_back(std::move(w));
    }
  }
  if (!g.weighted_) g.weights_.assign(n, {});

  g.goals_.assign(players_, {});
  g.goal_mask_.assign(n, 0);
  for (const auto& [p, names] : goals_) {
    if (p < 1 || static_cast<std::size_t>(p) > players_) {
      g.stray_goal_players_.push_back(p);
      continue;
    }
    std::set<Vertex> vs;
    for (const auto& name : names) vs.insert(*g.find(name));
    auto i = static_cast<Player>(p - 1);
    g.goals_[i].assign(vs.begin(), vs.end());
    if (i < kMaxPlayers) {
      for (Vertex v : vs) g.goal_mask_[v] |= PlayerSet{1} << i;
    }
  }
  if (initial_) g.initial_ = g.find(*initial_);
  return g;
}

ValidationReport validate_game(const GameGraph& g) {
  ValidationReport r;
  auto& out = r.violations;
  for (const auto& p : g.build_problems()) out.push_back(p);
  if (g.player_count() == 0) out.push_back("no players declared");
  if (g.vertex_count() == 0) out.push_back("no vertices declared");
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.owner(v) == kNoPlayer) out.push_back("vertex " + g.name(v) + " has no owner");
    if (g.successors(v).empty()) out.push_back("vertex " + g.name(v) + " has no outgoing edge");
  }
  for (auto p : g.stray_goal_players()) {
    out.push_back("goal declared for unknown player " + std::to_string(p));
  }
  for (Player i = 0; i < g.player_count() && i < kMaxPlayers; ++i) {
    if (g.goal(i).empty()) out.push_back("player " + std::to_string(i + 1) + " has an empty goal set");
  }
  if (g.weighted()) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      for (Vertex w : g.successors(v)) {
        const auto& ws = g.weights(v, w);
        std::string edge = g.name(v) + " -> " + g.name(w);
        if (ws.empty()) {
          out.push_back("edge " + edge + " has no weights");
          continue;
        }
        if (ws.size() != g.player_count()) {
          out.push_back("edge " + edge + " has " + std::to_string(ws.size()) + " weights, expected " +
                        std::to_string(g.player_count()));
        }
        for (std::size_t i = 0; i < ws.size(); ++i) {
          if (ws[i] <= 0) {
            out.push_back("edge " + edge + " weight for player " + std::to_string(i + 1) +
                          " is not strictly positive");
          }
        }
      }
    }
  }
  return r;
}

void require_valid(const GameGraph& g) {
  auto report = validate_game(g);
  if (report.ok()) return;
  std::string msg = "invalid game:";
  for (const auto& v : report.violations) msg += "\n  " + v;
  throw InputError(msg);
}

}  // namespace qrg
