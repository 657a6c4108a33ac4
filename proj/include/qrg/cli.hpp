#pragma once

#include "qrg/decider.hpp"
#include "qrg/game.hpp"
#include "qrg/tree.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qrg {

enum class ExitCode : int { holds = 0, fails = 1, unknown = 2, input_error = 3, resource = 4 };

enum class Format { human, json };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;  // game first, then a profile where applicable
  std::optional<std::uint32_t> depth;
  Budgets budgets;
  Format format = Format::human;
  std::uint64_t seed = 0;
  std::string kind;                 // solve / check
  std::optional<std::string> thresholds;
  std::string protagonist;          // attractor: coalition:J | player:I
  std::vector<std::string> reach;
  std::vector<std::string> safe;    // empty: every vertex
  std::optional<std::string> out_dir;
};

// Throws InputError when a budget is not positive.
void check_config(const RunConfig& c);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses the command line and calls run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct DotOverlay {
  std::vector<std::pair<Vertex, Vertex>> edges;  // highlighted
};

std::string export_dot(const GameGraph& g, const DotOverlay& overlay = {});
std::string export_dot(const TruncatedTree& t, const TreeStrategyProfile* s = nullptr);

}  // namespace qrg
