#pragma once

#include "qrg/game.hpp"
#include "qrg/play.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qrg {

using State = std::uint32_t;

// Finite-memory strategy. The machine reads every vertex of the history, the
// first one included, starting from `initial`; the move at history h is
// output(state after h, last(h)). Missing outputs fall back to the least
// successor; missing transitions keep the state.
class MooreMachine {
 public:
  MooreMachine() = default;
  MooreMachine(std::size_t states, std::size_t vertices, State initial = 0);

  std::size_t states() const { return states_; }
  std::size_t vertices() const { return vertices_; }
  State initial() const { return initial_; }

  State next(State s, Vertex v) const { return next_[s * vertices_ + v]; }
  Vertex output(State s, Vertex v) const { return out_[s * vertices_ + v]; }
  Vertex choose(const GameGraph& g, State s, Vertex v) const;

  void set_next(State s, Vertex v, State t) { next_[s * vertices_ + v] = t; }
  void set_output(State s, Vertex v, Vertex w) { out_[s * vertices_ + v] = w; }

  State run(const History& h) const;

 private:
  std::size_t states_ = 0;
  std::size_t vertices_ = 0;
  State initial_ = 0;
  std::vector<State> next_;
  std::vector<Vertex> out_;
};

struct MooreProfile {
  std::vector<MooreMachine> machines;  // one per player

  Vertex choose(const GameGraph& g, const History& h) const;
  std::size_t total_states() const;
};

// Throws PreconditionError when an output is not an edge of the game.
void check_moore(const GameGraph& g, const MooreProfile& p);

// Outcome from v0 as a lasso, detected on repeated (joint state, vertex).
Lasso simulate(const GameGraph& g, Vertex v0, const MooreProfile& p);

// Sections "player I" followed by: states N | initial S |
// transition S V -> S' | output S V -> W.
MooreProfile parse_moore(const GameGraph& g, std::string_view text);
std::string render_moore(const GameGraph& g, const MooreProfile& p);
bool looks_like_moore(std::string_view text);

}  // namespace qrg
