#include <gtest/gtest.h>

#include <sstream>

#include "supersolve/cli.hpp"
#include "test_support.hpp"

namespace supersolve {
namespace {

using cli::Command;
using cli::RunConfig;
using testing::data_path;

struct Result {
  int code;
  std::string out, err;
};

Result run(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig solve_config(const std::string& algebra, const std::string& system) {
  RunConfig cfg;
  cfg.command = Command::solve;
  cfg.algebra_path = data_path(algebra);
  cfg.system_path = data_path(system);
  return cfg;
}

TEST(Cli, SolveZ4Example) {
  const auto r = run(solve_config("algebras/z4.json", "systems/z4_sum.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solution: (3, 0, 0)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("candidates_tested: 4"), std::string::npos) << r.out;
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, SolveJson) {
  auto cfg = solve_config("algebras/z4.json", "systems/z4_sum.txt");
  cfg.json = true;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], "supersolve/1");
  EXPECT_EQ(doc["command"], "solve");
  EXPECT_EQ(doc["outcome"]["assignment"], (std::vector<int>{3, 0, 0}));
}

TEST(Cli, NoSolutionExitCode) {
  EXPECT_EQ(run(solve_config("algebras/z2.json", "systems/z2_unsat.txt")).code, 1);
  auto brute = solve_config("algebras/z2.json", "systems/z2_unsat.txt");
  brute.command = Command::brute;
  EXPECT_EQ(run(brute).code, 1);
}

TEST(Cli, InputErrors) {
  auto missing = solve_config("algebras/does_not_exist.json", "systems/z4_sum.txt");
  const auto r = run(missing);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
  EXPECT_TRUE(r.out.empty());

  // Z4 system against the lattice signature: unknown operation.
  EXPECT_EQ(run(solve_config("algebras/lattice2.json", "systems/z4_sum.txt")).code, 2);
  auto bad_zero = solve_config("algebras/z4.json", "systems/z4_sum.txt");
  bad_zero.zero = 9;
  EXPECT_EQ(run(bad_zero).code, 2);
  // A malformed system file.
  auto bad_sys = solve_config("algebras/z4.json", "algebras/z4.json");
  EXPECT_EQ(run(bad_sys).code, 2);
}

TEST(Cli, BoundJson) {
  RunConfig cfg;
  cfg.command = Command::bound;
  cfg.algebra_path = data_path("algebras/z4.json");
  cfg.s = 1;
  cfg.json = true;
  const auto r = run(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["report"]["tight_bound"], 12);
  EXPECT_EQ(doc["report"]["loose_bound"], 256);
  EXPECT_EQ(doc["report"]["e"], 257);

  cfg.s.reset();
  EXPECT_EQ(run(cfg).code, 2);
  cfg.system_path = data_path("systems/z4_sum.txt");
  const auto from_system = nlohmann::json::parse(run(cfg).out);
  EXPECT_EQ(from_system["report"]["effective_bound"], 3);
}

TEST(Cli, MalcevExitCodes) {
  RunConfig cfg;
  cfg.command = Command::malcev;
  cfg.json = true;
  cfg.algebra_path = data_path("algebras/z4.json");
  const auto found = run(cfg);
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(nlohmann::json::parse(found.out)["found"], true);
  cfg.algebra_path = data_path("algebras/lattice2.json");
  const auto none = run(cfg);
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(nlohmann::json::parse(none.out)["complete"], true);
}

TEST(Cli, AbsorbAndReduceWitness) {
  RunConfig cfg;
  cfg.command = Command::absorb;
  cfg.json = true;
  cfg.input_path = data_path("functions/and.json");
  const auto absorb = run(cfg);
  ASSERT_EQ(absorb.code, 0) << absorb.err;
  EXPECT_EQ(nlohmann::json::parse(absorb.out)["decomposition"]["absorbing_degree"], 2);

  cfg.command = Command::reduce_witness;
  cfg.input_path = data_path("functions/phi_example.json");
  const auto ks = run(cfg);
  ASSERT_EQ(ks.code, 0) << ks.err;
  EXPECT_EQ(nlohmann::json::parse(ks.out)["u"], (std::vector<int>{1}));

  cfg.input_path = data_path("functions/sum3_witness.json");
  const auto red = run(cfg);
  ASSERT_EQ(red.code, 0) << red.err;
  EXPECT_EQ(nlohmann::json::parse(red.out)["u"], (std::vector<int>{1}));

  cfg.input_path = data_path("systems/z4_sum.txt");
  EXPECT_EQ(run(cfg).code, 2);
}

TEST(Cli, Validate) {
  RunConfig cfg;
  cfg.command = Command::validate;
  cfg.algebra_path = data_path("algebras/q8.json");
  EXPECT_EQ(run(cfg).code, 0);
  cfg.algebra_path = data_path("algebras/z4.json");
  cfg.system_path = data_path("systems/z4_sum.txt");
  const auto r = run(cfg);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 equations, 3 variables, length 6"), std::string::npos) << r.out;
}

// Deterministic mode: repeated runs give byte-identical JSON.
TEST(Cli, JsonIsReproducible) {
  for (Command c : {Command::solve, Command::bench}) {
    auto cfg = solve_config("algebras/z2.json", "systems/z2_affine16.txt");
    cfg.command = c;
    cfg.json = true;
    const auto first = run(cfg);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(run(cfg).out, first.out);
    cfg.threads = 3;
    if (c == Command::solve) {
      EXPECT_EQ(nlohmann::json::parse(run(cfg).out)["outcome"]["assignment"],
                nlohmann::json::parse(first.out)["outcome"]["assignment"]);
    }
  }
}

}  // namespace
}  // namespace supersolve
