#pragma once

#include "qrg/cost.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qrg {

using Vertex = std::uint32_t;
using Player = std::uint32_t;  // 0-based; rendered 1-based in files and reports

inline constexpr Vertex kNoVertex = ~Vertex{0};
inline constexpr Player kNoPlayer = ~Player{0};
inline constexpr std::size_t kMaxPlayers = 64;

// Bit i set iff player i is a member.
using PlayerSet = std::uint64_t;

inline bool contains(PlayerSet s, Player i) { return (s >> i) & 1u; }
std::vector<Player> members(PlayerSet s);

// Vertices are numbered in lexicographic order of their identifiers, so
// "least vertex" and "least identifier" coincide. Successor lists are sorted.
// A GameGraph may violate the model invariants; see validate_game.
class GameGraph {
 public:
  std::size_t player_count() const { return players_; }
  std::size_t vertex_count() const { return names_.size(); }

  const std::string& name(Vertex v) const { return names_.at(v); }
  std::optional<Vertex> find(const std::string& name) const;
  // Throws InputError for unknown identifiers.
  Vertex vertex(const std::string& name) const;

  // kNoPlayer when the vertex was never declared with an owner.
  Player owner(Vertex v) const { return owner_[v]; }
  const std::vector<Vertex>& successors(Vertex v) const { return succ_[v]; }
  bool has_edge(Vertex from, Vertex to) const;

  bool weighted() const { return weighted_; }
  // Per-player weights of the edge from -> to; empty when unweighted.
  const std::vector<Rational>& weights(Vertex from, Vertex to) const;

  const std::vector<Vertex>& goal(Player i) const { return goals_.at(i); }
  bool in_goal(Player i, Vertex v) const { return contains(goal_mask_[v], i); }
  // Players whose goal set contains v.
  PlayerSet goal_mask(Vertex v) const { return goal_mask_[v]; }

  std::optional<Vertex> initial() const { return initial_; }
  Vertex least_successor(Vertex v) const { return succ_[v].front(); }

  // Declared goal player indices outside [0, players), kept for validation.
  const std::vector<std::int64_t>& stray_goal_players() const { return stray_goal_players_; }
  const std::vector<std::string>& build_problems() const { return build_problems_; }

  friend bool operator==(const GameGraph&, const GameGraph&) = default;

 private:
  friend class GameBuilder;

  std::size_t players_ = 0;
  std::vector<std::string> names_;
  std::vector<Player> owner_;
  std::vector<std::vector<Vertex>> succ_;
  std::vector<std::vector<std::vector<Rational>>> weights_;  // parallel to succ_
  bool weighted_ = false;
  std::vector<std::vector<Vertex>> goals_;
  std::vector<PlayerSet> goal_mask_;
  std::optional<Vertex> initial_;
  std::vector<std::int64_t> stray_goal_players_;
  std::vector<std::string> build_problems_;
};

// Accumulates declarations by identifier; build() sorts vertices by name.
// Players are given 1-based, as in the text format.
class GameBuilder {
 public:
  explicit GameBuilder(std::size_t players = 0) : players_(players) {}

  GameBuilder& players(std::size_t n);
  GameBuilder& vertex(const std::string& name, std::int64_t owner);
  GameBuilder& edge(const std::string& from, const std::string& to,
                    std::vector<Rational> weights = {});
  GameBuilder& goal(std::int64_t player, const std::vector<std::string>& vertices);
  GameBuilder& initial(const std::string& name);

  GameGraph build() const;

 private:
  struct EdgeDecl {
    std::string from, to;
    std::vector<Rational> weights;
  };
  std::size_t players_;
  std::vector<std::string> order_;
  std::map<std::string, std::int64_t> owners_;
  std::vector<EdgeDecl> edges_;
  std::map<std::int64_t, std::vector<std::string>> goals_;
  std::optional<std::string> initial_;
  std::vector<std::string> problems_;

  void mention(const std::string& name);
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_game(const GameGraph& g);

// Throws InputError listing the violations unless the game is valid.
void require_valid(const GameGraph& g);

}  // namespace qrg
