#include "qrg/decider.hpp"

#include "qrg/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <tuple>

namespace qrg {

const char* answer_name(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
  }
  return "?";
}

namespace {

bool within(const CostProfile& c, const std::optional<CostProfile>& t) {
  if (!t) return true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > (*t)[i]) return false;
  }
  return true;
}

// Cheap filters shared by every stage.
bool outcome_admissible(const TruncatedTree& t, const CostProfile& x, const std::optional<CostProfile>& thr,
                        std::string* why) {
  auto fail = [&](const char* m) {
    if (why) *why = m;
    return false;
  };
  if (!is_goal_optimized(t.game(), x)) return fail("outcome is not goal-optimized");
  if (!within(x, thr)) return fail("outcome exceeds the thresholds");
  if (dev_depth(x, t.game()) > t.depth()) return fail("tree shallower than d_dev");
  return true;
}

}  // namespace

bool accepts(const TruncatedTree& t, const TreeStrategyProfile& s, const std::optional<CostProfile>& thresholds,
             std::string* why) {
  check_profile(t, s);
  if (thresholds && thresholds->size() != t.game().player_count()) {
    throw PreconditionError("one threshold per player expected");
  }
  CostProfile x = outcome(t, s).costs;
  if (!outcome_admissible(t, x, thresholds, why)) return false;
  Verdict v = is_secure(t, s);
  if (!v.holds) {
    if (why) *why = "not secure: " + describe(t, *v.witness);
    return false;
  }
  v = is_dev_optimized(t, s);
  if (!v.holds) {
    if (why) *why = "not dev-optimized: " + describe(t, *v.witness);
    return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

enum class Offer { rejected, accepted, stop };
using OfferFn = std::function<Offer(TreeStrategyProfile)>;

class Search {
 public:
  Search(const TruncatedTree& t, const DecideOptions& o, Clock::time_point start)
      : t_(t), o_(o), deadline_(start + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>(o.budgets.seconds))) {}

  bool out_of_time() const { return Clock::now() > deadline_; }

  // Stage 1: secure-family backward induction over tie-break seeds.
  StageResult stage1(const OfferFn& offer) {
    StageResult r{"backward-induction", Answer::unknown, ""};
    std::size_t tried = 0;
    for (std::uint64_t seed = 0; seed < std::max<std::size_t>(1, o_.budgets.seeds); ++seed) {
      if (out_of_time()) {
        r.detail = "time budget exhausted after " + std::to_string(tried) + " seeds";
        return r;
      }
      ++tried;
      Offer o = offer(backward_induction(t_, Family::secure, seed));
      if (o == Offer::rejected) continue;
      r.answer = Answer::yes;
      r.detail = "seed " + std::to_string(seed) + " accepted";
      if (o == Offer::stop) return r;
    }
    if (r.answer != Answer::yes) r.detail = std::to_string(tried) + " seeds rejected";
    return r;
  }

  // Stage 2: for each admissible outcome, decides exactly whether some profile
  // with that outcome is secure and dev-optimized. Off the outcome, the
  // subtree entered by a deviation of j is an AND/OR game in which the
  // coalition must avoid every leaf that beats the outcome for j, at full
  // depth or at depth d_dev - 1.
  StageResult stage2(const OfferFn& offer) {
    StageResult r{"outcome-search", Answer::unknown, ""};
    const NodeId first = t_.level_begin(t_.depth());
    std::vector<std::pair<Rational, NodeId>> leaves;
    for (NodeId n = first; n < t_.size(); ++n) {
      Rational sum{0};
      for (const Cost& c : t_.costs(n)) {
        if (c.finite()) sum += c.value();
      }
      leaves.emplace_back(sum, n);
    }
    std::sort(leaves.begin(), leaves.end());
    std::uint64_t examined = 0, admissible = 0;
    for (const auto& [sum, leaf] : leaves) {
      if (out_of_time() || examined >= o_.budgets.outcomes) {
        r.detail = "budget exhausted after " + std::to_string(examined) + " of " + std::to_string(leaves.size()) +
                   " outcomes";
        return r;
      }
      ++examined;
      CostProfile x = t_.costs(leaf);
      if (!outcome_admissible(t_, x, o_.thresholds, nullptr)) continue;
      ++admissible;
      auto s = support(leaf, x);
      if (!s) continue;
      Offer o = offer(std::move(*s));
      if (o == Offer::rejected) continue;
      if (r.answer != Answer::yes) {
        r.answer = Answer::yes;
        r.detail = "outcome " + render_history(t_.game(), t_.history(leaf)) + " supported";
      }
      if (o == Offer::stop) return r;
    }
    if (r.answer == Answer::yes) {
      r.detail += "; no witness assembled into a verified finite-memory profile";
    } else {
      r.answer = Answer::no;
      r.detail = "all " + std::to_string(leaves.size()) + " outcomes examined, " + std::to_string(admissible) +
                 " admissible, none supported";
    }
    return r;
  }

  // Stage 3: every profile of the tree.
  StageResult stage3(const OfferFn& offer, bool& complete) {
    StageResult r{"exhaustive", Answer::unknown, ""};
    complete = false;
    std::vector<NodeId> choice_nodes;
    long double count = 1;
    for (NodeId n = 0; n < t_.size(); ++n) {
      if (t_.is_leaf(n) || t_.node(n).child_count < 2) continue;
      choice_nodes.push_back(n);
      count *= t_.node(n).child_count;
      if (count > static_cast<long double>(o_.budgets.profiles)) {
        r.detail = "more than " + std::to_string(o_.budgets.profiles) + " profiles";
        return r;
      }
    }
    TreeStrategyProfile s;
    s.choice.assign(t_.size(), kNoNode);
    for (NodeId n = 0; n < t_.size(); ++n) {
      if (!t_.is_leaf(n)) s.choice[n] = t_.node(n).first_child;
    }
    std::uint64_t enumerated = 0;
    while (true) {
      if (out_of_time()) {
        r.detail = "time budget exhausted after " + std::to_string(enumerated) + " profiles";
        return r;
      }
      ++enumerated;
      Offer o = offer(s);
      if (o != Offer::rejected && r.answer != Answer::yes) {
        r.answer = Answer::yes;
        r.detail = "profile " + std::to_string(enumerated) + " of " + std::to_string(static_cast<std::uint64_t>(count)) +
                   " accepted";
        complete = true;
      }
      if (o == Offer::stop) return r;
      std::size_t k = 0;
      for (; k < choice_nodes.size(); ++k) {
        NodeId n = choice_nodes[k];
        const TreeNode& x = t_.node(n);
        if (++s.choice[n] < x.first_child + x.child_count) break;
        s.choice[n] = x.first_child;
      }
      if (k == choice_nodes.size()) break;
    }
    complete = true;
    if (r.answer == Answer::yes) {
      r.detail += "; no witness assembled into a verified finite-memory profile";
    } else {
      r.answer = Answer::no;
      r.detail = "all " + std::to_string(enumerated) + " profiles enumerated, none accepted";
    }
    return r;
  }

 private:
  bool wins(NodeId n, Player j, const CostProfile& x, const CostProfile& xp, std::uint32_t prefix_depth) const {
    const TreeNode& nd = t_.node(n);
    if (nd.depth == prefix_depth && secure_prefers(j, xp, t_.costs(n))) return false;
    if (t_.is_leaf(n)) return !secure_prefers(j, x, t_.costs(n));
    bool deviator = t_.owner(n) == j;
    for (std::uint32_t k = 0; k < nd.child_count; ++k) {
      bool w = wins(nd.first_child + k, j, x, xp, prefix_depth);
      if (deviator && !w) return false;
      if (!deviator && w) return true;
    }
    return deviator;
  }

  // Coalition choices realizing a win below n.
  void fill(NodeId n, Player j, const CostProfile& x, const CostProfile& xp, std::uint32_t prefix_depth,
            TreeStrategyProfile& s) const {
    if (t_.is_leaf(n)) return;
    const TreeNode& nd = t_.node(n);
    NodeId pick = nd.first_child;
    if (t_.owner(n) != j) {
      for (std::uint32_t k = 0; k < nd.child_count; ++k) {
        if (wins(nd.first_child + k, j, x, xp, prefix_depth)) {
          pick = nd.first_child + k;
          break;
        }
      }
    }
    s.choice[n] = pick;
    for (std::uint32_t k = 0; k < nd.child_count; ++k) fill(nd.first_child + k, j, x, xp, prefix_depth, s);
  }

  std::optional<TreeStrategyProfile> support(NodeId leaf, const CostProfile& x) {
    const std::uint32_t prefix_depth = static_cast<std::uint32_t>(dev_depth(x, t_.game()) - 1);
    const NodeId pnode = t_.ancestor(leaf, prefix_depth);
    const CostProfile xp = t_.costs(pnode);
    std::vector<NodeId> path;
    for (NodeId n = leaf; n != kNoNode; n = t_.node(n).parent) path.push_back(n);
    std::reverse(path.begin(), path.end());
    auto xi = intern(x), xpi = intern(xp);
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const TreeNode& u = t_.node(path[p]);
      Player j = t_.owner(path[p]);
      for (std::uint32_t k = 0; k < u.child_count; ++k) {
        NodeId c = u.first_child + k;
        if (c == path[p + 1]) continue;
        auto key = std::make_tuple(c, xi, xpi);
        auto it = memo_.find(key);
        if (it == memo_.end()) it = memo_.emplace(key, wins(c, j, x, xp, prefix_depth)).first;
        if (!it->second) return std::nullopt;
      }
    }
    TreeStrategyProfile s;
    s.choice.assign(t_.size(), kNoNode);
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const TreeNode& u = t_.node(path[p]);
      s.choice[path[p]] = path[p + 1];
      for (std::uint32_t k = 0; k < u.child_count; ++k) {
        NodeId c = u.first_child + k;
        if (c != path[p + 1]) fill(c, t_.owner(path[p]), x, xp, prefix_depth, s);
      }
    }
    return s;
  }

  std::uint32_t intern(const CostProfile& x) {
    return ids_.emplace(x, static_cast<std::uint32_t>(ids_.size())).first->second;
  }

  const TruncatedTree& t_;
  const DecideOptions& o_;
  Clock::time_point deadline_;
  std::map<CostProfile, std::uint32_t> ids_;
  std::map<std::tuple<NodeId, std::uint32_t, std::uint32_t>, bool> memo_;
};

}  // namespace

Decision decide_secure_existence(const GameGraph& g, Vertex v0, const DecideOptions& options) {
  const auto start = Clock::now();
  require_valid(g);
  if (options.thresholds && options.thresholds->size() != g.player_count()) {
    throw PreconditionError("one threshold per player expected");
  }
  Decision d;
  const DepthConstants dc = depth_constants(g);
  d.full_depth = static_cast<std::uint32_t>(dc.d);
  if (options.depth) {
    d.depth = *options.depth;
  } else {
    d.depth = max_depth_within(g, v0, d.full_depth, options.budgets.nodes);
    if (d.depth == 0) throw ResourceError("not even depth 1 fits the node budget");
  }
  auto tree = std::make_shared<TruncatedTree>(unravel(g, v0, d.depth, CostModel::unit, options.budgets.nodes));
  d.tree = tree;
  const TruncatedTree& t = *tree;
  const bool full = d.depth >= d.full_depth;

  Search search(t, options, start);
  bool truncated_yes = false;
  bool done = false;
  std::vector<std::string> assembly_failures;
  auto offer = [&](TreeStrategyProfile s) {
    if (!accepts(t, s, options.thresholds)) return Offer::rejected;
    truncated_yes = true;
    if (done) return Offer::stop;
    std::optional<Assembly> a;
    try {
      a = assemble_finite_memory(t, s);
    } catch (const PreconditionError& e) {
      assembly_failures.push_back(e.what());
    }
    if (!full && !a) return Offer::accepted;
    done = true;
    d.witness = std::move(s);
    d.moore = std::move(a);
    d.cost = outcome(t, *d.witness).costs;
    return Offer::stop;
  };

  d.stages.push_back(search.stage1(offer));
  Answer stage2_answer = Answer::unknown;
  if (!done || options.run_all_stages) {
    auto r = search.stage2(offer);
    stage2_answer = r.answer;
    d.stages.push_back(r);
  }
  bool stage3_complete = false;
  Answer stage3_answer = Answer::unknown;
  const bool need_confirm = !done && stage2_answer == Answer::no;
  if (!done || options.run_all_stages || need_confirm) {
    auto r = search.stage3(offer, stage3_complete);
    stage3_answer = r.answer;
    d.stages.push_back(r);
  }

  if (truncated_yes) {
    d.truncated_answer = Answer::yes;
  } else if (stage2_answer == Answer::no || stage3_answer == Answer::no) {
    d.truncated_answer = Answer::no;
  }

  if (done) {
    d.answer = Answer::yes;
    if (full) {
      d.provenance = "goal- and dev-optimized secure equilibrium of T^d";
      if (d.moore) d.provenance += "; finite-memory profile verified exactly";
    } else {
      d.provenance = "finite-memory profile assembled at depth " + std::to_string(d.depth) + " and verified exactly";
    }
  } else if (d.truncated_answer == Answer::yes) {
    d.reason = "witnesses exist at depth " + std::to_string(d.depth) +
               " but none assembled into a verified finite-memory profile";
    for (const auto& f : assembly_failures) d.reason += "; " + f;
  } else if (d.truncated_answer == Answer::no) {
    std::vector<std::string> certs;
    for (const auto& s : d.stages) {
      if (s.answer == Answer::no) certs.push_back(s.name + ": " + s.detail);
    }
    for (std::size_t k = 0; k < certs.size(); ++k) d.certificate += (k ? "; " : "") + certs[k];
    const bool multiplayer = g.player_count() >= 3 && !options.thresholds;
    if (!full) {
      d.reason = "no witness at depth " + std::to_string(d.depth) + " < d = " + std::to_string(d.full_depth);
    } else if (multiplayer && stage3_answer != Answer::no) {
      d.reason = "multiplayer No requires confirmation by exhaustive enumeration, which exceeded the budget";
    } else {
      d.answer = Answer::no;
      d.provenance = "exhaustive search of T^d";
    }
  } else {
    d.reason = "budgets exhausted before any stage concluded";
  }
  d.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return d;
}

Decision decide_secure_with_thresholds(const GameGraph& g, Vertex v0, const CostProfile& t,
                                       DecideOptions options) {
  options.thresholds = t;
  return decide_secure_existence(g, v0, options);
}

std::string decision_json(const Decision& d, const GameGraph& g) {
  nlohmann::ordered_json j;
  j["answer"] = answer_name(d.answer);
  j["truncated_answer"] = answer_name(d.truncated_answer);
  j["depth"] = d.depth;
  j["full_depth"] = d.full_depth;
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& s : d.stages) {
    stages.push_back({{"name", s.name}, {"answer", answer_name(s.answer)}, {"detail", s.detail}});
  }
  j["stages"] = stages;
  if (d.witness && d.tree) {
    nlohmann::ordered_json w;
    Outcome o = outcome(*d.tree, *d.witness);
    w["outcome"] = render_history(g, d.tree->history(o.leaf));
    std::vector<std::string> cost;
    for (const Cost& c : d.cost) cost.push_back(to_string(c));
    w["cost"] = cost;
    if (d.moore) {
      w["moore_outcome"] = render_lasso(g, d.moore->outcome);
      w["moore_states"] = d.moore->profile.total_states();
      w["moore_state_bound"] = d.moore->state_bound;
      w["cycle"] = {d.moore->cycle.i, d.moore->cycle.j};
    }
    j["witness"] = w;
  }
  j["provenance"] = d.provenance;
  j["certificate"] = d.certificate;
  j["reason"] = d.reason;
  j["seconds"] = d.seconds;
  return j.dump(2);
}

}  // namespace qrg
