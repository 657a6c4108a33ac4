#include "qrg/zero_sum.hpp"

#include "qrg/errors.hpp"

#include <algorithm>
#include <deque>

namespace qrg {

void check_arena(const ZeroSumArena& a) {
  const std::size_t n = a.size();
  if (a.protagonist.size() != n || a.reach.size() != n || a.safe.size() != n) {
    throw PreconditionError("arena vectors disagree in size");
  }
  if (std::none_of(a.reach.begin(), a.reach.end(), [](bool b) { return b; })) {
    throw PreconditionError("reach set is empty");
  }
  for (const auto& s : a.successors) {
    if (s.empty()) throw PreconditionError("arena vertex without successor");
    for (Vertex w : s) {
      if (w >= n) throw PreconditionError("arena edge leaves the vertex set");
    }
  }
}

namespace {

struct Layers {
  VertexSet in;
  std::vector<std::uint32_t> rank;
};

// Attractor of `target` for the side owning `mover` vertices, restricted to
// vertices in `domain`. Successors outside `domain` never help the attractor.
Layers attractor(const ZeroSumArena& a, const std::vector<std::vector<Vertex>>& pred,
                 const VertexSet& domain, const VertexSet& target, bool mover_is_protagonist) {
  const std::size_t n = a.size();
  Layers L{VertexSet(n, false), std::vector<std::uint32_t>(n, kNoRank)};
  std::vector<std::size_t> missing(n);
  for (Vertex v = 0; v < n; ++v) missing[v] = a.successors[v].size();
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    if (domain[v] && target[v]) {
      L.in[v] = true;
      L.rank[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex p : pred[u]) {
      if (!domain[p] || L.in[p]) continue;
      bool mine = a.protagonist[p] == mover_is_protagonist;
      if (mine || --missing[p] == 0) {
        L.in[p] = true;
        L.rank[p] = L.rank[u] + 1;
        queue.push_back(p);
      }
    }
  }
  return L;
}

}  // namespace

AttractorResult solve_reach_under_safety(const ZeroSumArena& a) {
  check_arena(a);
  const std::size_t n = a.size();
  std::vector<std::vector<Vertex>> pred(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : a.successors[v]) pred[w].push_back(v);
  }

  // The antagonist forces a visit outside S from `escape`; the rest is the
  // protagonist's safe region.
  VertexSet unsafe(n), everywhere(n, true);
  for (Vertex v = 0; v < n; ++v) unsafe[v] = !a.safe[v];
  Layers escape = attractor(a, pred, everywhere, unsafe, false);
  VertexSet safe_region(n);
  for (Vertex v = 0; v < n; ++v) safe_region[v] = !escape.in[v];

  Layers win = attractor(a, pred, safe_region, a.reach, true);

  AttractorResult r;
  r.winning = win.in;
  r.rank = win.rank;
  r.safe_region = safe_region;
  r.protagonist_strategy.assign(n, kNoVertex);
  r.antagonist_strategy.assign(n, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    const auto& succ = a.successors[v];
    if (a.protagonist[v]) {
      // Beyond rank 0 the objective is pure safety; keep the play in the safe
      // region, preferring winning vertices.
      if (!safe_region[v]) continue;
      auto pick = [&](auto ok) {
        for (Vertex w : succ) {
          if (ok(w)) return w;
        }
        return kNoVertex;
      };
      Vertex w = kNoVertex;
      if (win.in[v] && win.rank[v] > 0) {
        w = pick([&](Vertex u) { return win.in[u] && win.rank[u] < win.rank[v]; });
      } else {
        w = pick([&](Vertex u) { return bool(win.in[u]); });
        if (w == kNoVertex) w = pick([&](Vertex u) { return bool(safe_region[u]); });
      }
      r.protagonist_strategy[v] = w;
    } else {
      if (win.in[v]) continue;
      Vertex choice = succ.front();
      if (a.safe[v] && escape.in[v]) {
        for (Vertex w : succ) {
          if (escape.in[w] && escape.rank[w] < escape.rank[v]) {
            choice = w;
            break;
          }
        }
      } else {
        for (Vertex w : succ) {
          if (!win.in[w]) {
            choice = w;
            break;
          }
        }
      }
      r.antagonist_strategy[v] = choice;
    }
  }
  return r;
}

std::vector<int> encode_weak_parity(const VertexSet& reach, const VertexSet& safe) {
  if (reach.size() != safe.size()) throw PreconditionError("set sizes differ");
  std::vector<int> c(reach.size());
  for (std::size_t v = 0; v < c.size(); ++v) c[v] = !safe[v] ? 3 : reach[v] ? 2 : 1;
  return c;
}

namespace {

ZeroSumArena arena_of(const GameGraph& g, const VertexSet& reach, const VertexSet& safe) {
  ZeroSumArena a;
  for (Vertex v = 0; v < g.vertex_count(); ++v) a.successors.push_back(g.successors(v));
  a.reach = reach;
  a.safe = safe;
  a.protagonist.assign(g.vertex_count(), false);
  return a;
}

}  // namespace

ZeroSumArena build_player_game(const GameGraph& g, Player i, const VertexSet& reach,
                               const VertexSet& safe) {
  ZeroSumArena a = arena_of(g, reach, safe);
  for (Vertex v = 0; v < g.vertex_count(); ++v) a.protagonist[v] = g.owner(v) == i;
  return a;
}

ZeroSumArena build_coalition_game(const GameGraph& g, Player j, const VertexSet& reach,
                                  const VertexSet& safe) {
  ZeroSumArena a = arena_of(g, reach, safe);
  for (Vertex v = 0; v < g.vertex_count(); ++v) a.protagonist[v] = g.owner(v) != j;
  return a;
}

VertexSet vertex_set(std::size_t n, const std::vector<Vertex>& members) {
  VertexSet s(n, false);
  for (Vertex v : members) s.at(v) = true;
  return s;
}

VertexSet all_vertices(std::size_t n) { return VertexSet(n, true); }

}  // namespace qrg
