#include "qrg/moore.hpp"

#include "qrg/errors.hpp"
#include "qrg/game_io.hpp"

#include <map>
#include <sstream>

namespace qrg {

MooreMachine::MooreMachine(std::size_t states, std::size_t vertices, State initial)
    : states_(states), vertices_(vertices), initial_(initial), out_(states * vertices, kNoVertex) {
  next_.resize(states * vertices);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t v = 0; v < vertices; ++v) next_[s * vertices + v] = static_cast<State>(s);
  }
}

Vertex MooreMachine::choose(const GameGraph& g, State s, Vertex v) const {
  Vertex w = output(s, v);
  return w == kNoVertex ? g.least_successor(v) : w;
}

State MooreMachine::run(const History& h) const {
  State s = initial_;
  for (Vertex v : h) s = next(s, v);
  return s;
}

Vertex MooreProfile::choose(const GameGraph& g, const History& h) const {
  Player i = g.owner(h.back());
  const auto& m = machines.at(i);
  return m.choose(g, m.run(h), h.back());
}

std::size_t MooreProfile::total_states() const {
  std::size_t n = 0;
  for (const auto& m : machines) n += m.states();
  return n;
}

void check_moore(const GameGraph& g, const MooreProfile& p) {
  if (p.machines.size() != g.player_count()) throw PreconditionError("one machine per player expected");
  for (Player i = 0; i < p.machines.size(); ++i) {
    const auto& m = p.machines[i];
    if (m.vertices() != g.vertex_count() || m.states() == 0 || m.initial() >= m.states()) {
      throw PreconditionError("machine of player " + std::to_string(i + 1) + " is malformed");
    }
    for (State s = 0; s < m.states(); ++s) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (m.next(s, v) >= m.states()) throw PreconditionError("transition to an unknown state");
        Vertex w = m.output(s, v);
        if (w != kNoVertex && !g.has_edge(v, w)) {
          throw PreconditionError("output " + g.name(v) + " -> " + g.name(w) + " is not an edge");
        }
      }
    }
  }
}

Lasso simulate(const GameGraph& g, Vertex v0, const MooreProfile& p) {
  std::vector<State> states;
  for (const auto& m : p.machines) states.push_back(m.next(m.initial(), v0));
  std::map<std::pair<std::vector<State>, Vertex>, std::size_t> seen;
  History play{v0};
  while (true) {
    Vertex v = play.back();
    auto [it, fresh] = seen.emplace(std::make_pair(states, v), play.size() - 1);
    if (!fresh) {
      std::size_t start = it->second;
      Lasso l;
      l.stem.assign(play.begin(), play.begin() + static_cast<std::ptrdiff_t>(start) + 1);
      l.cycle.assign(play.begin() + static_cast<std::ptrdiff_t>(start) + 1, play.end());
      if (l.cycle.empty()) l.cycle.push_back(v);
      return l;
    }
    Player i = g.owner(v);
    Vertex w = p.machines[i].choose(g, states[i], v);
    for (std::size_t k = 0; k < states.size(); ++k) states[k] = p.machines[k].next(states[k], w);
    play.push_back(w);
  }
}

bool looks_like_moore(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    auto t = split_ws(strip_comment(raw));
    if (!t.empty()) return t[0] == "player";
  }
  return false;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

State parse_state(std::size_t line, const std::string& tok, std::size_t states) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(tok, &used);
    if (used != tok.size() || v >= states) throw std::out_of_range("state");
    return static_cast<State>(v);
  } catch (const std::exception&) {
    fail(line, "bad state '" + tok + "'");
  }
}

}  // namespace

MooreProfile parse_moore(const GameGraph& g, std::string_view text) {
  MooreProfile p;
  p.machines.resize(g.player_count());
  std::vector<bool> declared(g.player_count(), false);
  long current = -1;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto vertex = [&](std::size_t line, const std::string& name) {
    auto v = g.find(name);
    if (!v) fail(line, "unknown vertex '" + name + "'");
    return *v;
  };
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    auto t = split_ws(strip_comment(raw));
    if (t.empty()) continue;
    if (t[0] == "player") {
      if (t.size() != 2) fail(line, "usage: player I");
      long i = 0;
      try {
        i = std::stol(t[1]);
      } catch (const std::exception&) {
        fail(line, "bad player '" + t[1] + "'");
      }
      if (i < 1 || static_cast<std::size_t>(i) > g.player_count()) fail(line, "player out of range");
      current = i - 1;
      if (declared[current]) fail(line, "player section repeated");
      declared[current] = true;
      p.machines[current] = MooreMachine(1, g.vertex_count());
      continue;
    }
    if (current < 0) fail(line, "expected 'player I' first");
    auto& m = p.machines[current];
    if (t[0] == "states") {
      if (t.size() != 2) fail(line, "usage: states N");
      std::size_t n = 0;
      try {
        n = std::stoul(t[1]);
      } catch (const std::exception&) {
        fail(line, "bad state count");
      }
      if (n == 0 || n > 50'000'000 / std::max<std::size_t>(1, g.vertex_count())) {
        fail(line, "state count out of range");
      }
      m = MooreMachine(n, g.vertex_count(), m.initial() < n ? m.initial() : 0);
    } else if (t[0] == "initial") {
      if (t.size() != 2) fail(line, "usage: initial S");
      State s = parse_state(line, t[1], m.states());
      MooreMachine fresh(m.states(), g.vertex_count(), s);
      for (State a = 0; a < m.states(); ++a) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
          fresh.set_next(a, v, m.next(a, v));
          fresh.set_output(a, v, m.output(a, v));
        }
      }
      m = std::move(fresh);
    } else if (t[0] == "transition" || t[0] == "output") {
      if (t.size() != 5 || t[3] != "->") fail(line, "usage: " + t[0] + " S V -> X");
      State s = parse_state(line, t[1], m.states());
      Vertex v = vertex(line, t[2]);
      if (t[0] == "transition") {
        m.set_next(s, v, parse_state(line, t[4], m.states()));
      } else {
        Vertex w = vertex(line, t[4]);
        if (!g.has_edge(v, w)) fail(line, "output " + t[2] + " -> " + t[4] + " is not an edge");
        m.set_output(s, v, w);
      }
    } else {
      fail(line, "unknown keyword '" + t[0] + "'");
    }
  }
  for (Player i = 0; i < g.player_count(); ++i) {
    if (!declared[i]) p.machines[i] = MooreMachine(1, g.vertex_count());
  }
  return p;
}

std::string render_moore(const GameGraph& g, const MooreProfile& p) {
  std::ostringstream out;
  for (Player i = 0; i < p.machines.size(); ++i) {
    const auto& m = p.machines[i];
    out << "player " << (i + 1) << "\nstates " << m.states() << "\ninitial " << m.initial() << "\n";
    for (State s = 0; s < m.states(); ++s) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (m.next(s, v) != s) out << "transition " << s << " " << g.name(v) << " -> " << m.next(s, v) << "\n";
      }
    }
    for (State s = 0; s < m.states(); ++s) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != i) continue;
        Vertex w = m.output(s, v);
        if (w != kNoVertex && w != g.least_successor(v)) {
          out << "output " << s << " " << g.name(v) << " -> " << g.name(w) << "\n";
        }
      }
    }
  }
  return out.str();
}

}  // namespace qrg
