#include "qrg/cli.hpp"

#include "qrg/construction.hpp"
#include "qrg/errors.hpp"
#include "qrg/game_io.hpp"
#include "qrg/moore.hpp"
#include "qrg/play.hpp"
#include "qrg/solver.hpp"
#include "qrg/zero_sum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qrg {

namespace {

using Json = nlohmann::ordered_json;

int code(ExitCode c) { return static_cast<int>(c); }

Vertex initial_of(const GameGraph& g) {
  if (!g.initial()) throw InputError("game has no init declaration");
  return *g.initial();
}

GameGraph load_valid(const RunConfig& c) {
  if (c.inputs.empty()) throw InputError(c.subcommand + ": game file expected");
  GameGraph g = load_game(c.inputs[0]);
  require_valid(g);
  return g;
}

std::string cost_string(const CostProfile& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + to_string(x[i]);
  return s + ")";
}

Json cost_json(const CostProfile& x) {
  Json a = Json::array();
  for (const Cost& c : x) a.push_back(to_string(c));
  return a;
}

std::uint32_t check_depth(const RunConfig& c, const GameGraph& g) {
  if (c.depth) return *c.depth;
  if (!is_terminal_lasso(g)) {
    throw InputError("--depth is required unless every play reaches an absorbing self-loop");
  }
  return static_cast<std::uint32_t>(g.vertex_count() + 1);
}

// A profile file holds either a tree profile or Moore machines.
struct LoadedProfile {
  TreeStrategyProfile tree;
  std::optional<MooreProfile> moore;
};

LoadedProfile load_profile(const TruncatedTree& t, const std::string& path) {
  std::string text = read_file(path);
  LoadedProfile p;
  if (looks_like_moore(text)) {
    p.moore = parse_moore(t.game(), text);
    check_moore(t.game(), *p.moore);
    p.tree = restrict_strategy(*p.moore, t);
  } else {
    p.tree = parse_tree_profile(t, text);
  }
  return p;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  if (c.inputs.empty()) throw InputError("validate: game file expected");
  GameGraph g = load_game(c.inputs[0]);
  auto r = validate_game(g);
  if (!r.ok()) {
    std::string msg = "invalid game:";
    for (const auto& v : r.violations) msg += "\n  " + v;
    throw InputError(msg);
  }
  if (c.format == Format::json) {
    out << Json{{"valid", true}, {"players", g.player_count()}, {"vertices", g.vertex_count()}}.dump(2) << "\n";
  } else {
    out << "valid: " << g.player_count() << " players, " << g.vertex_count() << " vertices\n";
  }
  return code(ExitCode::holds);
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  GameGraph g = load_valid(c);
  if (!c.depth) throw InputError("solve: --depth is required");
  Family f;
  if (c.kind == "spe") f = Family::nash;
  else if (c.kind == "spse") f = Family::secure;
  else throw InputError("solve: --kind must be spe or spse");
  const CostModel model = g.weighted() ? CostModel::weighted : CostModel::unit;
  TruncatedTree t = unravel(g, initial_of(g), *c.depth, model, c.budgets.nodes);
  TreeStrategyProfile s = backward_induction(t, f, c.seed);
  Outcome o = outcome(t, s);
  std::string outcome_text = render_history(g, t.history(o.leaf));
  if (c.format == Format::json) {
    out << Json{{"kind", c.kind},
                {"depth", *c.depth},
                {"outcome", outcome_text},
                {"cost", cost_json(o.costs)},
                {"profile", render_tree_profile(t, s)}}
               .dump(2)
        << "\n";
  } else {
    out << "# " << c.kind << " at depth " << *c.depth << ", outcome " << outcome_text << ", cost "
        << cost_string(o.costs) << "\n"
        << render_tree_profile(t, s);
  }
  return code(ExitCode::holds);
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  GameGraph g = load_valid(c);
  if (c.inputs.size() < 2) throw InputError("check: GAME PROFILE expected");
  const std::uint32_t depth = check_depth(c, g);
  const CostModel model = g.weighted() ? CostModel::weighted : CostModel::unit;
  TruncatedTree t = unravel(g, initial_of(g), depth, model, c.budgets.nodes);
  LoadedProfile p = load_profile(t, c.inputs[1]);
  Outcome o = outcome(t, p.tree);

  Verdict v;
  if (c.kind == "nash") v = is_nash(t, p.tree);
  else if (c.kind == "secure") v = is_secure(t, p.tree);
  else if (c.kind == "spe") v = is_spe(t, p.tree);
  else if (c.kind == "spse") v = is_spse(t, p.tree);
  else if (c.kind == "goalopt") v.holds = is_goal_optimized(t, p.tree);
  else if (c.kind == "devopt") v = is_dev_optimized(t, p.tree);
  else throw InputError("check: unknown --kind " + c.kind);

  std::optional<MooreVerdict> exact;
  if (p.moore && c.kind == "secure") {
    exact = verify_moore_secure(g, initial_of(g), *p.moore);
  }
  const bool holds = v.holds && (!exact || exact->holds);

  if (c.format == Format::json) {
    Json j{{"kind", c.kind},
           {"depth", depth},
           {"holds", holds},
           {"outcome", render_history(g, t.history(o.leaf))},
           {"cost", cost_json(o.costs)}};
    if (v.witness) j["witness"] = describe(t, *v.witness);
    if (exact) {
      j["moore_secure"] = exact->holds;
      if (!exact->holds) j["moore_witness"] = exact->detail;
    }
    out << j.dump(2) << "\n";
  } else {
    out << c.kind << ": " << (holds ? "holds" : "fails") << " at depth " << depth << "\n";
    out << "outcome " << render_history(g, t.history(o.leaf)) << " cost " << cost_string(o.costs) << "\n";
    if (v.witness) out << "witness: " << describe(t, *v.witness) << "\n";
    if (exact && !exact->holds) out << "moore witness: " << exact->detail << "\n";
  }
  return code(holds ? ExitCode::holds : ExitCode::fails);
}

CostProfile parse_thresholds(const std::string& text, std::size_t players) {
  CostProfile t;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) t.push_back(parse_cost(item));
  if (t.size() != players) {
    throw InputError("--thresholds: " + std::to_string(players) + " values expected");
  }
  return t;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f << text;
}

int cmd_decide(const RunConfig& c, std::ostream& out) {
  GameGraph g = load_valid(c);
  DecideOptions o;
  o.depth = c.depth;
  o.budgets = c.budgets;
  o.budgets.seeds = std::max<std::size_t>(o.budgets.seeds, 1);
  if (c.thresholds) o.thresholds = parse_thresholds(*c.thresholds, g.player_count());
  Decision d = decide_secure_existence(g, initial_of(g), o);

  std::vector<std::string> files;
  if (c.out_dir && d.witness) {
    std::filesystem::create_directories(*c.out_dir);
    auto prof = std::filesystem::path(*c.out_dir) / "witness.prof";
    write_file(prof, "# depth " + std::to_string(d.depth) + "\n" + render_tree_profile(*d.tree, *d.witness));
    files.push_back(prof.string());
    if (d.moore) {
      auto moore = std::filesystem::path(*c.out_dir) / "witness.moore";
      write_file(moore, render_moore(g, d.moore->profile));
      files.push_back(moore.string());
    }
  }

  if (c.format == Format::json) {
    Json j = Json::parse(decision_json(d, g));
    j["budgets"] = {{"nodes", o.budgets.nodes},
                    {"profiles", o.budgets.profiles},
                    {"seeds", o.budgets.seeds},
                    {"outcomes", o.budgets.outcomes},
                    {"seconds", o.budgets.seconds}};
    if (!files.empty()) j["files"] = files;
    out << j.dump(2) << "\n";
  } else {
    out << "answer: " << answer_name(d.answer) << "\n";
    out << "truncated answer: " << answer_name(d.truncated_answer) << " at depth " << d.depth << " (d = "
        << d.full_depth << ")\n";
    for (const auto& s : d.stages) {
      out << "stage " << s.name << ": " << answer_name(s.answer) << ", " << s.detail << "\n";
    }
    if (d.witness) {
      Outcome w = outcome(*d.tree, *d.witness);
      out << "witness outcome " << render_history(g, d.tree->history(w.leaf)) << " cost " << cost_string(d.cost)
          << "\n";
    }
    if (d.moore) {
      out << "finite-memory outcome " << render_lasso(g, d.moore->outcome) << ", "
          << d.moore->profile.total_states() << " states\n";
    }
    if (!d.provenance.empty()) out << "provenance: " << d.provenance << "\n";
    if (!d.certificate.empty()) out << "certificate: " << d.certificate << "\n";
    if (!d.reason.empty()) out << "reason: " << d.reason << "\n";
    for (const auto& f : files) out << "wrote " << f << "\n";
  }
  switch (d.answer) {
    case Answer::yes: return code(ExitCode::holds);
    case Answer::no: return code(ExitCode::fails);
    case Answer::unknown: break;
  }
  return code(ExitCode::unknown);
}

std::vector<Vertex> vertex_list(const GameGraph& g, const std::vector<std::string>& names) {
  std::vector<Vertex> vs;
  for (const auto& n : names) vs.push_back(g.vertex(n));
  return vs;
}

std::uint32_t parse_index(const std::string& s, std::size_t players) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v < 1 || static_cast<std::size_t>(v) > players) {
    throw InputError("player index out of range: " + s);
  }
  return static_cast<std::uint32_t>(v - 1);
}

int cmd_attractor(const RunConfig& c, std::ostream& out) {
  GameGraph g = load_valid(c);
  const std::size_t n = g.vertex_count();
  VertexSet reach = vertex_set(n, vertex_list(g, c.reach));
  VertexSet safe = c.safe.empty() ? all_vertices(n) : vertex_set(n, vertex_list(g, c.safe));
  auto colon = c.protagonist.find(':');
  if (colon == std::string::npos) throw InputError("--protagonist must be coalition:J or player:I");
  std::string mode = c.protagonist.substr(0, colon);
  Player who = parse_index(c.protagonist.substr(colon + 1), g.player_count());
  ZeroSumArena a;
  if (mode == "player") a = build_player_game(g, who, reach, safe);
  else if (mode == "coalition") a = build_coalition_game(g, who, reach, safe);
  else throw InputError("--protagonist must be coalition:J or player:I");
  if (c.reach.empty()) throw InputError("--reach needs at least one vertex");
  AttractorResult r = solve_reach_under_safety(a);

  std::vector<std::string> winning;
  for (Vertex v = 0; v < n; ++v) {
    if (r.winning[v]) winning.push_back(g.name(v));
  }
  const bool holds = !g.initial() || r.winning[*g.initial()];
  if (c.format == Format::json) {
    Json ranks = Json::object();
    Json strategy = Json::object();
    for (Vertex v = 0; v < n; ++v) {
      if (!r.winning[v]) continue;
      ranks[g.name(v)] = r.rank[v];
      if (a.protagonist[v] && r.protagonist_strategy[v] != kNoVertex) {
        strategy[g.name(v)] = g.name(r.protagonist_strategy[v]);
      }
    }
    Json j{{"protagonist", c.protagonist}, {"winning", winning}, {"rank", ranks}, {"strategy", strategy}};
    if (g.initial()) j["initial_winning"] = holds;
    out << j.dump(2) << "\n";
  } else {
    out << "winning:";
    for (const auto& w : winning) out << " " << w;
    out << "\n";
    for (Vertex v = 0; v < n; ++v) {
      if (!r.winning[v]) continue;
      out << g.name(v) << " rank " << r.rank[v];
      if (a.protagonist[v] && r.protagonist_strategy[v] != kNoVertex) {
        out << " -> " << g.name(r.protagonist_strategy[v]);
      }
      out << "\n";
    }
  }
  return code(holds ? ExitCode::holds : ExitCode::fails);
}

int cmd_export_dot(const RunConfig& c, std::ostream& out) {
  GameGraph g = load_valid(c);
  DotOverlay overlay;
  if (c.inputs.size() >= 2) {
    std::string text = read_file(c.inputs[1]);
    Lasso play;
    if (looks_like_moore(text)) {
      MooreProfile p = parse_moore(g, text);
      check_moore(g, p);
      play = simulate(g, initial_of(g), p);
    } else {
      TruncatedTree t = unravel(g, initial_of(g), check_depth(c, g), CostModel::unit, c.budgets.nodes);
      TreeStrategyProfile s = parse_tree_profile(t, text);
      History h = t.history(outcome(t, s).leaf);
      play.stem = h;
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    History all = play.stem;
    all.insert(all.end(), play.cycle.begin(), play.cycle.end());
    if (!play.cycle.empty()) all.push_back(play.cycle.front());
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
      if (seen.insert({all[k], all[k + 1]}).second) overlay.edges.push_back({all[k], all[k + 1]});
    }
  }
  out << export_dot(g, overlay);
  return code(ExitCode::holds);
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

void check_config(const RunConfig& c) {
  if (c.budgets.nodes == 0 || c.budgets.profiles == 0 || c.budgets.outcomes == 0 || !(c.budgets.seconds > 0)) {
    throw InputError("budgets must be positive");
  }
  if (c.depth && *c.depth == 0) throw InputError("--depth must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    check_config(config);
    const std::string& s = config.subcommand;
    if (s == "validate") return cmd_validate(config, out);
    if (s == "solve") return cmd_solve(config, out);
    if (s == "check") return cmd_check(config, out);
    if (s == "decide-secure") return cmd_decide(config, out);
    if (s == "attractor") return cmd_attractor(config, out);
    if (s == "export-dot") return cmd_export_dot(config, out);
    throw InputError("unknown subcommand: " + s);
  } catch (const ResourceError& e) {
    err << "resource budget exceeded: " << e.what() << "\n";
    return code(ExitCode::resource);
  } catch (const NotSecureError& e) {
    err << "not secure: " << e.what() << "\n";
    return code(ExitCode::fails);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::input_error);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative reachability games: equilibrium checks, solvers and the secure decider"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format = "human";

  auto common = [&](CLI::App* sub, bool profile) {
    sub->add_option("game", c.inputs, "game file" + std::string(profile ? ", then a profile file" : ""))
        ->required();
    sub->add_option("--depth", c.depth, "tree depth");
    sub->add_option("--nodes", c.budgets.nodes, "tree node budget");
    sub->add_option("--format", format, "human or json")->check(CLI::IsMember({"human", "json"}));
    sub->add_flag_callback("--json", [&] { format = "json"; }, "same as --format json");
  };

  auto* validate = app.add_subcommand("validate", "check a game file against the model invariants");
  common(validate, false);
  auto* solve = app.add_subcommand("solve", "backward induction on the truncated tree");
  common(solve, false);
  solve->add_option("--kind", c.kind, "spe or spse")->required()->check(CLI::IsMember({"spe", "spse"}));
  solve->add_option("--seed", c.seed, "tie-break seed");
  auto* check = app.add_subcommand("check", "verify a profile");
  common(check, true);
  check->add_option("--kind", c.kind, "nash, secure, spe, spse, goalopt or devopt")
      ->required()
      ->check(CLI::IsMember({"nash", "secure", "spe", "spse", "goalopt", "devopt"}));
  auto* decide = app.add_subcommand("decide-secure", "decide existence of a secure equilibrium");
  common(decide, false);
  decide->add_option("--thresholds", c.thresholds, "t1,t2,... (inf allowed)");
  decide->add_option("--profiles", c.budgets.profiles, "exhaustive stage profile budget");
  decide->add_option("--seeds", c.budgets.seeds, "backward-induction seeds");
  decide->add_option("--outcomes", c.budgets.outcomes, "outcome search budget");
  decide->add_option("--seconds", c.budgets.seconds, "time budget");
  decide->add_option("--out-dir", c.out_dir, "write witness.prof and witness.moore here");
  auto* attractor = app.add_subcommand("attractor", "reachability under safety");
  common(attractor, false);
  attractor->add_option("--protagonist", c.protagonist, "coalition:J or player:I")->required();
  attractor->add_option("--reach", c.reach, "target vertices")->required();
  attractor->add_option("--safe", c.safe, "safe vertices (default: all)");
  auto* dot = app.add_subcommand("export-dot", "render the arena, optionally with a profile's outcome");
  common(dot, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::input_error);
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  c.format = format == "json" ? Format::json : Format::human;
  return run(c, out, err);
}

std::string export_dot(const GameGraph& g, const DotOverlay& overlay) {
  static const char* shapes[] = {"circle", "box", "diamond", "hexagon", "triangle", "octagon"};
  std::set<std::pair<Vertex, Vertex>> hl(overlay.edges.begin(), overlay.edges.end());
  std::ostringstream o;
  o << "digraph game {\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::string goals;
    for (Player i = 0; i < g.player_count(); ++i) {
      if (g.in_goal(i, v)) goals += (goals.empty() ? "" : ",") + std::to_string(i + 1);
    }
    Player p = g.owner(v);
    o << "  " << quote(g.name(v)) << " [owner=" << p + 1 << ", shape=" << shapes[p % 6];
    if (!goals.empty()) o << ", goals=" << quote(goals) << ", peripheries=2, style=filled, fillcolor=lightgray";
    if (g.initial() && *g.initial() == v) o << ", initial=true";
    o << "];\n";
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex w : g.successors(v)) {
      o << "  " << quote(g.name(v)) << " -> " << quote(g.name(w));
      std::vector<std::string> attrs;
      if (g.weighted()) {
        std::string ws;
        for (const Rational& r : g.weights(v, w)) ws += (ws.empty() ? "" : ",") + to_string(Cost(r));
        attrs.push_back("label=" + quote(ws));
      }
      if (hl.count({v, w})) {
        attrs.push_back("color=red");
        attrs.push_back("penwidth=2");
      }
      if (!attrs.empty()) {
        o << " [";
        for (std::size_t k = 0; k < attrs.size(); ++k) o << (k ? ", " : "") << attrs[k];
        o << "]";
      }
      o << ";\n";
    }
  }
  o << "}\n";
  return o.str();
}

std::string export_dot(const TruncatedTree& t, const TreeStrategyProfile* s) {
  const GameGraph& g = t.game();
  std::ostringstream o;
  o << "digraph tree {\n";
  for (NodeId n = 0; n < t.size(); ++n) {
    o << "  n" << n << " [label=" << quote(g.name(t.vertex(n))) << ", owner=" << t.owner(n) + 1 << "];\n";
  }
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& x = t.node(n);
    for (std::uint32_t k = 0; k < x.child_count; ++k) {
      NodeId c = x.first_child + k;
      o << "  n" << n << " -> n" << c;
      if (s && s->choice[n] == c) o << " [color=red, penwidth=2]";
      o << ";\n";
    }
  }
  o << "}\n";
  return o.str();
}

}  // namespace qrg
