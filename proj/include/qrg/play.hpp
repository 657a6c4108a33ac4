#pragma once

#include "qrg/cost.hpp"
#include "qrg/game.hpp"

#include <optional>
#include <vector>

namespace qrg {

// Vertex sequence; its length is the number of edges (size() - 1).
using History = std::vector<Vertex>;

inline std::size_t length(const History& h) { return h.size() - 1; }

// The ultimately periodic play stem . cycle^omega.
struct Lasso {
  History stem;
  std::vector<Vertex> cycle;

  // Vertex at position i of the infinite play.
  Vertex at(std::size_t i) const;
  // Positions 0..length of the play, i.e. a history with `length` edges.
  History prefix(std::size_t length) const;
  // Number of positions covering the stem and one traversal of the cycle.
  std::size_t span() const { return stem.size() + cycle.size(); }

  friend bool operator==(const Lasso&, const Lasso&) = default;
};

// True iff both lassos denote the same infinite play.
bool same_play(const Lasso& a, const Lasso& b);

bool is_history(const GameGraph& g, const History& h);
// Throws PreconditionError for malformed plays.
void check_history(const GameGraph& g, const History& h);
void check_lasso(const GameGraph& g, const Lasso& l);

// Unit costs: least index visiting F_i, +inf otherwise. The horizon bounds the
// considered positions to 0..horizon and defaults to the history length.
CostProfile cost_profile(const GameGraph& g, const History& h,
                         std::optional<std::size_t> horizon = std::nullopt);
CostProfile cost_profile(const GameGraph& g, const Lasso& play);

// Sum of the player's edge weights up to the first visit of F_i.
CostProfile weighted_cost_profile(const GameGraph& g, const History& h);
CostProfile weighted_cost_profile(const GameGraph& g, const Lasso& play);

std::vector<Player> visit_set(const GameGraph& g, const History& h);
PlayerSet visit_mask(const GameGraph& g, const History& h);

struct WeightConstants {
  Rational c_min;
  Rational c_max;
  std::int64_t K = 1;
};

WeightConstants weight_constants(const GameGraph& g);

// play = alpha . beta . tail, positions alpha = 0..i, beta = i+1..j.
struct CycleDecomposition {
  std::size_t i = 0;
  std::size_t j = 0;
  History alpha;
  std::vector<Vertex> beta;
  Lasso tail;  // the play from position j+1 on
};

// Least (i, j) with play_i = play_j, Visit(alpha) = Visit(alpha beta) and
// Visit(alpha) != Visit(play), searched over the stem plus one cycle traversal.
std::optional<CycleDecomposition> find_unnecessary_cycle(const GameGraph& g, const Lasso& play);

std::string render_history(const GameGraph& g, const History& h, char sep = '/');
std::string render_lasso(const GameGraph& g, const Lasso& l);
History parse_history(const GameGraph& g, const std::string& text, char sep = '/');

}  // namespace qrg
