#pragma once

#include "qrg/game.hpp"

#include <cstdint>
#include <vector>

namespace qrg {

using VertexSet = std::vector<bool>;

// Two-player arena; the protagonist wins a play iff it visits `reach` and every
// vertex of the play, the first one included, lies in `safe`.
struct ZeroSumArena {
  std::vector<std::vector<Vertex>> successors;  // sorted
  VertexSet protagonist;
  VertexSet reach;
  VertexSet safe;

  std::size_t size() const { return successors.size(); }
};

inline constexpr std::uint32_t kNoRank = ~std::uint32_t{0};

struct AttractorResult {
  VertexSet winning;
  std::vector<std::uint32_t> rank;              // kNoRank outside the winning set
  // Defined on protagonist vertices of the winning set and of the safe region.
  std::vector<Vertex> protagonist_strategy;
  std::vector<Vertex> antagonist_strategy;  // defined on losing antagonist vertices
  VertexSet safe_region;                    // where the protagonist can stay in S forever
};

// Throws PreconditionError on malformed arenas (sizes, empty reach set, sinks).
void check_arena(const ZeroSumArena& a);

// The winning region is the attractor of reach within the protagonist's safe
// region; ranks count the edges needed to reach the target.
AttractorResult solve_reach_under_safety(const ZeroSumArena& a);

// 3 outside S, 2 on R inside S, 1 elsewhere.
std::vector<int> encode_weak_parity(const VertexSet& reach, const VertexSet& safe);

// Protagonist is player i.
ZeroSumArena build_player_game(const GameGraph& g, Player i, const VertexSet& reach,
                               const VertexSet& safe);
// Protagonist is the coalition of every player except j.
ZeroSumArena build_coalition_game(const GameGraph& g, Player j, const VertexSet& reach,
                                  const VertexSet& safe);

VertexSet vertex_set(std::size_t n, const std::vector<Vertex>& members);
VertexSet all_vertices(std::size_t n);

}  // namespace qrg
