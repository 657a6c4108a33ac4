#pragma once

#include "qrg/construction.hpp"
#include "qrg/cost.hpp"
#include "qrg/moore.hpp"
#include "qrg/solver.hpp"
#include "qrg/tree.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qrg {

enum class Answer { yes, no, unknown };
const char* answer_name(Answer a);

struct Budgets {
  std::size_t nodes = kDefaultNodeBudget;
  std::uint64_t profiles = 100'000;  // Stage 3 runs when the tree has at most this many profiles
  std::size_t seeds = 16;            // backward-induction tie-break seeds in Stage 1
  std::uint64_t outcomes = 1'000'000;
  double seconds = 120.0;
};

struct DecideOptions {
  std::optional<std::uint32_t> depth;       // defaults to min(d, largest depth within the node budget)
  std::optional<CostProfile> thresholds;    // accept only witnesses with c_i <= t_i
  Budgets budgets;
  bool run_all_stages = false;              // keep searching after a Yes, for cross-checks
};

struct StageResult {
  std::string name;
  Answer answer = Answer::unknown;  // unknown: skipped or budget exhausted
  std::string detail;
};

struct Decision {
  Answer answer = Answer::unknown;            // about the infinite game
  Answer truncated_answer = Answer::unknown;  // about T^depth
  std::uint32_t depth = 0;
  std::uint32_t full_depth = 0;               // d
  std::vector<StageResult> stages;
  std::shared_ptr<const TruncatedTree> tree;
  std::optional<TreeStrategyProfile> witness;
  std::optional<Assembly> moore;
  CostProfile cost;
  std::string provenance;
  std::string certificate;
  std::string reason;
  double seconds = 0;
};

// Throws ResourceError when not even depth 1 fits the node budget.
Decision decide_secure_existence(const GameGraph& g, Vertex v0, const DecideOptions& options = {});
Decision decide_secure_with_thresholds(const GameGraph& g, Vertex v0, const CostProfile& t,
                                       DecideOptions options = {});

// Independent check of a witness: secure, goal- and dev-optimized, thresholds.
bool accepts(const TruncatedTree& t, const TreeStrategyProfile& s, const std::optional<CostProfile>& thresholds,
             std::string* why = nullptr);

std::string decision_json(const Decision& d, const GameGraph& g);

}  // namespace qrg
