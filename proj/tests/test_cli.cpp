#include "helpers.hpp"

#include "qrg/cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sstream>

using namespace qrg;
using namespace qrg::testing;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result qrg_run(std::vector<std::string> args) {
  args.insert(args.begin(), "qrg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t count(const std::string& text, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

}  // namespace

TEST(Cli, CheckSpeOnFig4) {
  auto r = qrg_run({"check", "--kind", "spe", fixture("fig4.qrg"), fixture("sigma_n2.prof"), "--depth", "8"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, CheckSecureOnFig4FailsWithWitness) {
  auto r = qrg_run({"check", "--kind", "secure", fixture("fig4.qrg"), fixture("sigma_n2.prof"), "--depth", "8"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("witness: player 1 deviates"), std::string::npos) << r.out;
}

TEST(Cli, ValidateBroken) {
  auto r = qrg_run({"validate", fixture("broken.qrg")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("empty goal set"), std::string::npos);
}

TEST(Cli, MissingFileAndBadFlags) {
  EXPECT_EQ(qrg_run({"validate", fixture("nope.qrg")}).code, 3);
  EXPECT_EQ(qrg_run({"check", "--kind", "bogus", fixture("fig5.qrg"), fixture("fig5_sigma_n1.prof")}).code, 3);
  EXPECT_EQ(qrg_run({"frobnicate"}).code, 3);
  EXPECT_EQ(qrg_run({"decide-secure", fixture("fig5.qrg"), "--seconds", "0"}).code, 3);
}

TEST(Cli, CheckNeedsDepthUnlessTerminal) {
  EXPECT_EQ(qrg_run({"check", "--kind", "secure", fixture("fig5.qrg"), fixture("fig5_sigma_n1.prof")}).code, 3);
  auto r = qrg_run({"check", "--kind", "secure", fixture("fig1_G.qrg"), fixture("sigma1_sigma2.prof")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("depth 8"), std::string::npos);
}

TEST(Cli, CheckKinds) {
  const std::string g = fixture("fig6.qrg"), p = fixture("fig6_sigma.prof");
  EXPECT_EQ(qrg_run({"check", "--kind", "nash", g, p, "--depth", "14"}).code, 0);
  EXPECT_EQ(qrg_run({"check", "--kind", "goalopt", g, p, "--depth", "14"}).code, 0);
  EXPECT_EQ(qrg_run({"check", "--kind", "devopt", g, p, "--depth", "14"}).code,
            is_dev_optimized(unravel(load_fixture("fig6.qrg"), 0, 14),
                             load_tree_profile(unravel(load_fixture("fig6.qrg"), 0, 14), "fig6_sigma.prof"))
                    .holds
                ? 0
                : 1);
  EXPECT_EQ(qrg_run({"check", "--kind", "devopt", g, p, "--depth", "10"}).code, 3);
}

TEST(Cli, ResourceBudget) {
  auto r = qrg_run({"solve", "--kind", "spe", "--depth", "40", fixture("fig5.qrg"), "--nodes", "1000"});
  EXPECT_EQ(r.code, 4);
}

TEST(Cli, SolveOutputsAVerifiableProfile) {
  auto r = qrg_run({"solve", "--kind", "spse", "--depth", "7", fixture("fig3_Gpp.qrg")});
  ASSERT_EQ(r.code, 0);
  GameGraph g = load_fixture("fig3_Gpp.qrg");
  TruncatedTree t = unravel(g, 0, 7);
  TreeStrategyProfile s = parse_tree_profile(t, r.out);
  EXPECT_TRUE(is_spse(t, s).holds);
}

TEST(Cli, DecideWritesReverifiableWitnesses) {
  auto dir = std::filesystem::temp_directory_path() / "qrg_cli_decide";
  std::filesystem::remove_all(dir);
  auto r = qrg_run({"decide-secure", fixture("fig5.qrg"), "--json", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  // Report schema.
  for (const char* key : {"answer", "truncated_answer", "depth", "full_depth", "stages", "witness", "provenance",
                          "budgets", "seconds", "files"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["answer"].is_string());
  EXPECT_TRUE(j["depth"].is_number_unsigned());
  EXPECT_TRUE(j["stages"].is_array());
  for (const auto& s : j["stages"]) {
    EXPECT_TRUE(s["name"].is_string());
    EXPECT_TRUE(s["answer"] == "yes" || s["answer"] == "no" || s["answer"] == "unknown");
  }
  EXPECT_TRUE(j["seconds"].is_number());
  const std::string depth = std::to_string(j["depth"].get<unsigned>());
  const std::string game = fixture("fig5.qrg");
  auto prof = (dir / "witness.prof").string();
  auto moore = (dir / "witness.moore").string();
  EXPECT_EQ(qrg_run({"check", "--kind", "secure", game, prof, "--depth", depth}).code, 0);
  EXPECT_EQ(qrg_run({"check", "--kind", "devopt", game, prof, "--depth", depth}).code, 0);
  EXPECT_EQ(qrg_run({"check", "--kind", "goalopt", game, prof, "--depth", depth}).code, 0);
  EXPECT_EQ(qrg_run({"check", "--kind", "secure", game, moore, "--depth", depth}).code, 0);
}

TEST(Cli, DecideThresholds) {
  EXPECT_EQ(qrg_run({"decide-secure", fixture("fig5.qrg"), "--thresholds", "3,3"}).code, 0);
  EXPECT_EQ(qrg_run({"decide-secure", fixture("fig5.qrg"), "--thresholds", "0,0"}).code, 1);
  EXPECT_EQ(qrg_run({"decide-secure", fixture("fig5.qrg"), "--thresholds", "inf,inf"}).code, 0);
  EXPECT_EQ(qrg_run({"decide-secure", fixture("fig5.qrg"), "--thresholds", "1"}).code, 3);
}

TEST(Cli, DecideShallowDepthIsNeverNo) {
  auto r = qrg_run({"decide-secure", fixture("fig5.qrg"), "--depth", "3", "--thresholds", "0,0"});
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, Attractor) {
  auto r = qrg_run({"attractor", fixture("fig5.qrg"), "--protagonist", "player:1", "--reach", "C", "--json"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["winning"], nlohmann::json::array({"C"}));
  r = qrg_run({"attractor", fixture("fig5.qrg"), "--protagonist", "coalition:1", "--reach", "A", "B", "--safe", "A",
               "B"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(qrg_run({"attractor", fixture("fig5.qrg"), "--protagonist", "team:1", "--reach", "C"}).code, 3);
  EXPECT_EQ(qrg_run({"attractor", fixture("fig5.qrg"), "--protagonist", "player:3", "--reach", "C"}).code, 3);
}

TEST(Cli, ExportDotFig5) {
  auto r = qrg_run({"export-dot", fixture("fig5.qrg")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, std::regex(R"(\n  "[A-Z0-9]+" \[)")), 3u);
  EXPECT_EQ(count(r.out, std::regex("->")), 5u);
  EXPECT_NE(r.out.find("\"A\" [owner=1"), std::string::npos);
  EXPECT_EQ(r.out.find("color=red"), std::string::npos);
  EXPECT_EQ(qrg_run({"export-dot", fixture("fig5.qrg")}).out, r.out);
}

TEST(Cli, ExportDotOverlay) {
  auto r = qrg_run({"export-dot", fixture("fig5.qrg"), fixture("fig5_sigma_n1.prof"), "--depth", "5"});
  ASSERT_EQ(r.code, 0);
  // A -> B, B -> C and C -> C lie on the outcome.
  EXPECT_EQ(count(r.out, std::regex("color=red")), 3u);
  GameGraph g = load_fixture("fig5.qrg");
  EXPECT_EQ(export_dot(g), export_dot(g, DotOverlay{}));
  TruncatedTree t = unravel(g, 0, 2);
  EXPECT_EQ(count(export_dot(t), std::regex("->")), t.size() - 1);
}

TEST(Cli, JsonCheckReport) {
  auto r = qrg_run({"check", "--kind", "secure", fixture("fig6.qrg"), fixture("fig6_sigma.prof"), "--depth", "12",
                    "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["holds"], true);
  EXPECT_EQ(j["cost"], nlohmann::json::array({"0", "0", "5"}));
}
