#pragma once

#include "qrg/game.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qrg {

// Line-oriented game format:
//   players N | vertex X owner=I | edge A B [weights=w1,..,wN] | goal I V.. | init V
// '#' starts a comment. Throws InputError on syntax errors; model invariants are
// left to validate_game.
GameGraph parse_game(std::string_view text);
GameGraph load_game(const std::string& path);
std::string render_game(const GameGraph& g);

bool is_identifier(std::string_view s);
std::vector<std::string> split_ws(std::string_view line);
std::string strip_comment(std::string_view line);
std::string read_file(const std::string& path);

}  // namespace qrg
