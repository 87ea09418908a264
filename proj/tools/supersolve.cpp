#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "supersolve/cli.hpp"

namespace {

using supersolve::cli::Command;
using supersolve::cli::RunConfig;

struct Options {
  std::string algebra, system, input;
  unsigned zero = 0;
  std::uint64_t bound = 0;
  std::uint64_t s = 0, n = 0;
  std::vector<std::uint64_t> k;
  std::size_t threads = 1;
  std::size_t cap = supersolve::kDefaultCloneCap;
  bool nondeterministic = false;
  bool json = false;
  bool timing = false;
  bool constants = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-weight equation solving over finite supernilpotent algebras"};
  app.require_subcommand(1);
  Options opt;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--algebra,-a", opt.algebra, "algebra JSON file")->required();
    sub->add_option("--system,-y", opt.system, "equation system file")->required();
    sub->add_option("--zero,-z", opt.zero, "designated element z (default 0)");
    sub->add_option("--bound,-b", opt.bound, "override the weight bound");
    sub->add_option("--k", opt.k, "per-prime-factor supernilpotency degrees");
    sub->add_flag("--json", opt.json, "machine-readable output");
  };

  auto* solve = app.add_subcommand("solve", "bounded-weight search");
  add_solver_flags(solve);
  solve->add_option("--threads,-j", opt.threads, "worker threads");
  solve->add_flag("--nondeterministic", opt.nondeterministic,
                  "with several threads, return any solution");

  auto* brute = app.add_subcommand("brute", "exhaustive search over A^n");
  brute->add_option("--algebra,-a", opt.algebra, "algebra JSON file")->required();
  brute->add_option("--system,-y", opt.system, "equation system file")->required();
  brute->add_flag("--json", opt.json, "machine-readable output");

  auto* bench = app.add_subcommand("bench", "compare bounded and exhaustive search");
  add_solver_flags(bench);
  bench->add_flag("--timing", opt.timing, "include wall-clock times in JSON output");

  auto* bound = app.add_subcommand("bound", "print the weight bounds");
  bound->add_option("--algebra,-a", opt.algebra, "algebra JSON file")->required();
  auto* s_opt = bound->add_option("-s", opt.s, "number of equations");
  auto* n_opt = bound->add_option("-n", opt.n, "number of variables");
  bound->add_option("--system,-y", opt.system, "take s and n from a system file");
  bound->add_option("--k", opt.k, "per-prime-factor supernilpotency degrees");
  bound->add_flag("--json", opt.json, "machine-readable output");

  auto* malcev = app.add_subcommand("malcev", "search the ternary clone for a Mal'cev term");
  malcev->add_option("--algebra,-a", opt.algebra, "algebra JSON file")->required();
  malcev->add_flag("--constants", opt.constants, "allow constants (polynomial operations)");
  malcev->add_option("--cap", opt.cap, "maximal number of ternary operations to generate");
  malcev->add_flag("--json", opt.json, "machine-readable output");

  auto* absorb = app.add_subcommand("absorb", "absorbing decomposition of a tabulated function");
  absorb->add_option("input", opt.input, "function JSON file")->required();
  absorb->add_flag("--json", opt.json, "machine-readable output");

  auto* witness = app.add_subcommand("reduce-witness", "find a weight-reduction witness set U");
  witness->add_option("input", opt.input, "witness problem JSON file")->required();
  witness->add_flag("--json", opt.json, "machine-readable output");

  auto* validate = app.add_subcommand("validate", "check algebra and system files");
  validate->add_option("--algebra,-a", opt.algebra, "algebra JSON file")->required();
  validate->add_option("--system,-y", opt.system, "equation system file");
  validate->add_flag("--json", opt.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(supersolve::cli::ExitCode::input_error);
  }

  RunConfig cfg;
  const std::pair<CLI::App*, Command> commands[] = {
      {solve, Command::solve},   {brute, Command::brute},   {bench, Command::bench},
      {bound, Command::bound},   {malcev, Command::malcev}, {absorb, Command::absorb},
      {witness, Command::reduce_witness}, {validate, Command::validate}};
  for (const auto& [sub, command] : commands) {
    if (sub->parsed()) cfg.command = command;
  }
  cfg.algebra_path = opt.algebra;
  cfg.system_path = opt.system;
  cfg.input_path = opt.input;
  cfg.zero = opt.zero;
  cfg.json = opt.json;
  cfg.timing = opt.timing;
  cfg.threads = opt.threads;
  cfg.deterministic = !opt.nondeterministic;
  cfg.include_constants = opt.constants;
  cfg.cap = opt.cap;
  for (CLI::App* sub : {solve, bench}) {
    if (sub->parsed() && sub->count("--bound") > 0) cfg.bound_override = opt.bound;
  }
  if (!opt.k.empty()) cfg.k_overrides = opt.k;
  if (s_opt->count() > 0) cfg.s = opt.s;
  if (n_opt->count() > 0) cfg.n = opt.n;

  return supersolve::cli::run(cfg, std::cout, std::cerr);
}
