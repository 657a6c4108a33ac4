#include "qrg/play.hpp"

#include "qrg/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qrg {

Vertex Lasso::at(std::size_t i) const {
  if (i < stem.size()) return stem[i];
  return cycle[(i - stem.size()) % cycle.size()];
}

History Lasso::prefix(std::size_t len) const {
  History h;
  h.reserve(len + 1);
  for (std::size_t i = 0; i <= len; ++i) h.push_back(at(i));
  return h;
}

bool same_play(const Lasso& a, const Lasso& b) {
  std::size_t period = std::lcm(a.cycle.size(), b.cycle.size());
  std::size_t n = std::max(a.stem.size(), b.stem.size()) + period;
  for (std::size_t i = 0; i < n; ++i) {
    if (a.at(i) != b.at(i)) return false;
  }
  return true;
}

bool is_history(const GameGraph& g, const History& h) {
  if (h.empty()) return false;
  for (Vertex v : h) {
    if (v >= g.vertex_count()) return false;
  }
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (!g.has_edge(h[k - 1], h[k])) return false;
  }
  return true;
}

void check_history(const GameGraph& g, const History& h) {
  if (!is_history(g, h)) throw PreconditionError("not a history of the game");
}

void check_lasso(const GameGraph& g, const Lasso& l) {
  if (l.cycle.empty()) throw PreconditionError("lasso cycle is empty");
  check_history(g, l.stem);
  History c = l.cycle;
  c.insert(c.begin(), l.stem.back());
  c.push_back(l.cycle.front());
  if (!is_history(g, c)) throw PreconditionError("lasso cycle does not follow edges");
}

namespace {

template <typename At>
CostProfile unit_costs(const GameGraph& g, std::size_t positions, At at) {
  CostProfile x(g.player_count(), kInfinity);
  PlayerSet seen = 0;
  for (std::size_t p = 0; p < positions; ++p) {
    PlayerSet fresh = g.goal_mask(at(p)) & ~seen;
    for (Player i : members(fresh)) x[i] = Cost(static_cast<std::int64_t>(p));
    seen |= fresh;
  }
  return x;
}

template <typename At>
CostProfile weighted_costs(const GameGraph& g, std::size_t positions, At at) {
  if (!g.weighted()) throw PreconditionError("game has no weights");
  const std::size_t n = g.player_count();
  CostProfile x(n, kInfinity);
  std::vector<Rational> acc(n, Rational(0));
  PlayerSet seen = 0;
  for (std::size_t p = 0; p < positions; ++p) {
    if (p > 0) {
      const auto& w = g.weights(at(p - 1), at(p));
      if (w.size() != n) throw PreconditionError("missing weight on a traversed edge");
      for (std::size_t i = 0; i < n; ++i) acc[i] += w[i];
    }
    PlayerSet fresh = g.goal_mask(at(p)) & ~seen;
    for (Player i : members(fresh)) x[i] = Cost(acc[i]);
    seen |= fresh;
  }
  return x;
}

}  // namespace

CostProfile cost_profile(const GameGraph& g, const History& h, std::optional<std::size_t> horizon) {
  std::size_t len = horizon.value_or(length(h));
  if (len > length(h)) throw PreconditionError("horizon exceeds history length");
  return unit_costs(g, len + 1, [&](std::size_t p) { return h[p]; });
}

CostProfile cost_profile(const GameGraph& g, const Lasso& play) {
  return unit_costs(g, play.span(), [&](std::size_t p) { return play.at(p); });
}

CostProfile weighted_cost_profile(const GameGraph& g, const History& h) {
  return weighted_costs(g, h.size(), [&](std::size_t p) { return h[p]; });
}

CostProfile weighted_cost_profile(const GameGraph& g, const Lasso& play) {
  return weighted_costs(g, play.span(), [&](std::size_t p) { return play.at(p); });
}

PlayerSet visit_mask(const GameGraph& g, const History& h) {
  PlayerSet s = 0;
  for (Vertex v : h) s |= g.goal_mask(v);
  return s;
}

std::vector<Player> visit_set(const GameGraph& g, const History& h) { return members(visit_mask(g, h)); }

WeightConstants weight_constants(const GameGraph& g) {
  if (!g.weighted()) throw PreconditionError("game has no weights");
  std::optional<Rational> lo, hi;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex w : g.successors(v)) {
      for (const Rational& c : g.weights(v, w)) {
        if (!lo || c < *lo) lo = c;
        if (!hi || c > *hi) hi = c;
      }
    }
  }
  if (!lo) throw PreconditionError("game has no weights");
  Rational q = *hi / *lo;
  std::int64_t k = q.numerator() / q.denominator();
  if (k * q.denominator() < q.numerator()) ++k;
  return {*lo, *hi, k};
}

std::optional<CycleDecomposition> find_unnecessary_cycle(const GameGraph& g, const Lasso& play) {
  const std::size_t n = play.span();
  std::vector<PlayerSet> upto(n);
  PlayerSet s = 0;
  for (std::size_t p = 0; p < n; ++p) upto[p] = s |= g.goal_mask(play.at(p));
  const PlayerSet all = s;
  for (std::size_t i = 0; i < n; ++i) {
    if (upto[i] == all) break;
    for (std::size_t j = i + 1; j < n && upto[j] == upto[i]; ++j) {
      if (play.at(j) != play.at(i)) continue;
      CycleDecomposition d;
      d.i = i;
      d.j = j;
      d.alpha = play.prefix(i);
      for (std::size_t p = i + 1; p <= j; ++p) d.beta.push_back(play.at(p));
      std::size_t s0 = std::max(j + 1, play.stem.size());
      for (std::size_t p = j + 1; p <= s0; ++p) d.tail.stem.push_back(play.at(p));
      for (std::size_t p = s0 + 1; p <= s0 + play.cycle.size(); ++p) d.tail.cycle.push_back(play.at(p));
      return d;
    }
  }
  return std::nullopt;
}

std::string render_history(const GameGraph& g, const History& h, char sep) {
  std::string s;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (k) s += sep;
    s += g.name(h[k]);
  }
  return s;
}

std::string render_lasso(const GameGraph& g, const Lasso& l) {
  return render_history(g, l.stem, ' ') + " (" + render_history(g, l.cycle, ' ') + ")^w";
}

History parse_history(const GameGraph& g, const std::string& text, char sep) {
  History h;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    h.push_back(g.vertex(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return h;
}

}  // namespace qrg
