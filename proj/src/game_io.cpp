#include "qrg/game_io.hpp"

#include "qrg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace qrg {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_index(std::size_t line, const std::string& tok) {
  if (tok.empty() || tok.size() > 9 ||
      !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    fail(line, "expected a positive integer, got '" + tok + "'");
  }
  return std::stoll(tok);
}

const std::string& ident(std::size_t line, const std::string& tok) {
  if (!is_identifier(tok)) fail(line, "bad identifier '" + tok + "'");
  return tok;
}

}  // namespace

bool is_identifier(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c); });
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(std::string_view line) {
  return std::string(line.substr(0, line.find('#')));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GameGraph parse_game(std::string_view text) {
  GameBuilder b;
  bool seen_players = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    auto t = split_ws(strip_comment(raw));
    if (t.empty()) continue;
    const std::string& kw = t[0];
    if (kw == "players") {
      if (t.size() != 2) fail(line, "usage: players N");
      if (seen_players) fail(line, "players declared twice");
      seen_players = true;
      b.players(static_cast<std::size_t>(parse_index(line, t[1])));
    } else if (kw == "vertex") {
      if (t.size() != 3 || t[2].rfind("owner=", 0) != 0) fail(line, "usage: vertex X owner=I");
      b.vertex(ident(line, t[1]), parse_index(line, t[2].substr(6)));
    } else if (kw == "edge") {
      if (t.size() != 3 && t.size() != 4) fail(line, "usage: edge A B [weights=w1,...]");
      std::vector<Rational> w;
      if (t.size() == 4) {
        if (t[3].rfind("weights=", 0) != 0) fail(line, "expected weights=..., got '" + t[3] + "'");
        std::string list = t[3].substr(8);
        std::size_t start = 0;
        while (true) {
          auto comma = list.find(',', start);
          auto item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          try {
            w.push_back(parse_rational(item));
          } catch (const InputError& e) {
            fail(line, e.what());
          }
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      b.edge(ident(line, t[1]), ident(line, t[2]), std::move(w));
    } else if (kw == "goal") {
      if (t.size() < 2) fail(line, "usage: goal I V...");
      std::vector<std::string> vs;
      for (std::size_t k = 2; k < t.size(); ++k) vs.push_back(ident(line, t[k]));
      b.goal(parse_index(line, t[1]), vs);
    } else if (kw == "init") {
      if (t.size() != 2) fail(line, "usage: init V");
      b.initial(ident(line, t[1]));
    } else {
      fail(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!seen_players) throw InputError("missing 'players' declaration");
  return b.build();
}

GameGraph load_game(const std::string& path) { return parse_game(read_file(path)); }

std::string render_game(const GameGraph& g) {
  std::ostringstream out;
  out << "players " << g.player_count() << "\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "vertex " << g.name(v) << " owner=" << (g.owner(v) + 1) << "\n";
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex w : g.successors(v)) {
      out << "edge " << g.name(v) << " " << g.name(w);
      const auto& ws = g.weights(v, w);
      for (std::size_t i = 0; i < ws.size(); ++i) out << (i ? "," : " weights=") << to_string(ws[i]);
      out << "\n";
    }
  }
  for (Player i = 0; i < g.player_count(); ++i) {
    out << "goal " << (i + 1);
    for (Vertex v : g.goal(i)) out << " " << g.name(v);
    out << "\n";
  }
  if (g.initial()) out << "init " << g.name(*g.initial()) << "\n";
  return out.str();
}

}  // namespace qrg
