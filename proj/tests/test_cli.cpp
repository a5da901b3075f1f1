#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + TAUTRING_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  auto r = run(args);
  EXPECT_EQ(r.code, 0) << args;
  return nlohmann::json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("tautring_cli_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Cli, EnumerateCounts) {
  EXPECT_EQ(run_json("enumerate --g 0 --n 4 --max-edges 1")["count"], 4);
  EXPECT_EQ(run_json("enumerate --g 1 --n 1 --max-edges 1")["count"], 2);
  EXPECT_EQ(run_json("enumerate --g 0 --n 5")["count"], 26);
  EXPECT_EQ(run_json("enumerate --g 0 --n 4 --codim 1")["count"], 8);
}

TEST(Cli, InvalidInputExitsOne) {
  EXPECT_EQ(run("enumerate --g 0 --n 2").code, 1);
  EXPECT_EQ(run("enumerate --g 0 --n 4 --max-edges 5").code, 1);
  EXPECT_EQ(run("enumerate --g 1 --n 1 --format xml").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("pullback --loops -1").code, 1);
  EXPECT_EQ(run("enumerate --g 0 --n 4", "TAUTRING_BUDGET=abc").code, 1);
}

TEST(Cli, GorensteinSmall) {
  auto j = run_json("gorenstein --g 0 --n 5");
  EXPECT_EQ(j["degree_ranks"], nlohmann::json({1, 5, 1}));
  EXPECT_EQ(j["socle"], true);
  EXPECT_TRUE(j["defects"].empty());
}

TEST(Cli, GorensteinOverBudgetReportsKnownStatus) {
  auto r = run("gorenstein --g 2 --n 20");
  EXPECT_EQ(r.code, 2);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["known_status"]["verdict"], "NotGorenstein-proven");
  EXPECT_NE(j["message"].get<std::string>().find("not feasible"), std::string::npos);
}

TEST(Cli, VerifyLemmas) {
  auto ok = run("verify-lemmas");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(nlohmann::json::parse(ok.out)["all_pass"], true);
  auto bad = run("verify-lemmas --inject-sign-error --format table");
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("FAIL  elliptic-tail"), std::string::npos);
  EXPECT_EQ(bad.out.find("FAIL  forgetful-psi"), std::string::npos);
  auto only = run_json("verify-lemmas --g 0 --n 4");
  EXPECT_EQ(only["checks"].size(), 9u);
}

TEST(Cli, Pullback) {
  auto zero = run_json("pullback --loops 0");
  EXPECT_EQ(zero["terms"].size(), 1u);
  EXPECT_EQ(zero["c"], "1/1");
  auto one = run("pullback --loops 1 --format table");
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("c = 24/1"), std::string::npos);
  EXPECT_EQ(run("pullback --loops 10").code, 2);
}

TEST(Cli, DeterministicOutput) {
  for (const char* args : {"enumerate --g 1 --n 2", "gorenstein --g 1 --n 2 --threads 3", "pullback --loops 1",
                           "verify-lemmas --seed 5"}) {
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, OutFile) {
  auto path = std::filesystem::temp_directory_path() / "tautring_cli_out.json";
  std::filesystem::remove(path);
  auto r = run("enumerate --g 0 --n 4 --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(nlohmann::json::parse(in)["count"], 4);
}

TEST(Cli, ConfigEnvironmentFlagPrecedence) {
  auto cfg = temp_file("cfg.toml", "g = 0\nn = 5\nbudget = 3\n");
  const std::string base = "enumerate --config " + cfg.string();
  EXPECT_EQ(run(base).code, 2);
  EXPECT_EQ(run(base, "TAUTRING_BUDGET=100").code, 0);
  EXPECT_EQ(run(base + " --budget 100").code, 0);
  EXPECT_EQ(run(base + " --budget 100", "TAUTRING_BUDGET=2").code, 0);
  EXPECT_EQ(run(base + " --n 4 --budget 100").code, 0);
  EXPECT_EQ(nlohmann::json::parse(run(base + " --n 4 --budget 100").out)["count"], 4);
  EXPECT_EQ(run("pullback --loops 1", "TAUTRING_BUDGET=10").code, 2);
}
