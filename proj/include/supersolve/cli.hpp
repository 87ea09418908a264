#pragma once

// Command-line front end. Argument parsing lives in tools/; this header holds
// the dispatch so it can be driven directly from tests.
//
// Exit codes: 0 satisfiable / success, 1 no solution (or no Mal'cev term),
// 2 input error, 3 internal theorem violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "supersolve/absorbing.hpp"
#include "supersolve/algebra.hpp"
#include "supersolve/bounds.hpp"
#include "supersolve/malcev.hpp"
#include "supersolve/solver.hpp"
#include "supersolve/term.hpp"
#include "supersolve/witness.hpp"

namespace supersolve::cli {

inline constexpr const char* kSchema = "supersolve/1";

enum class ExitCode : int { ok = 0, no_solution = 1, input_error = 2, theorem_violation = 3 };

enum class Command { solve, brute, bench, bound, malcev, absorb, reduce_witness, validate };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::brute: return "brute";
    case Command::bench: return "bench";
    case Command::bound: return "bound";
    case Command::malcev: return "malcev";
    case Command::absorb: return "absorb";
    case Command::reduce_witness: return "reduce-witness";
    case Command::validate: return "validate";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::solve;
  std::string algebra_path;
  std::string system_path;
  std::string input_path;  // absorb / reduce-witness
  Element zero = 0;
  std::optional<std::uint64_t> bound_override;
  std::optional<std::vector<std::uint64_t>> k_overrides;
  std::optional<std::uint64_t> s;  // bound: equation count
  std::optional<std::uint64_t> n;  // bound: variable count
  bool deterministic = true;
  std::size_t threads = 1;
  bool json = false;
  bool timing = false;  // bench: include wall-clock times
  bool include_constants = false;
  std::size_t cap = kDefaultCloneCap;
};

namespace detail {

inline std::string read_file(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing ") + what + " path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + what + " file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline FiniteAlgebra read_algebra(const RunConfig& cfg) {
  const auto text = read_file(cfg.algebra_path, "algebra");
  try {
    return load_algebra(text);
  } catch (const InputError& e) {
    throw InputError(cfg.algebra_path + ": " + e.what());
  }
}

inline EquationSystem read_system(const RunConfig& cfg) {
  const auto text = read_file(cfg.system_path, "system");
  try {
    return parse_system(text);
  } catch (const InputError& e) {
    throw InputError(cfg.system_path + ": " + e.what());
  }
}

inline nlohmann::json read_json_input(const RunConfig& cfg) {
  const auto text = read_file(cfg.input_path, "input");
  try {
    return ::supersolve::detail::parse_json(text);
  } catch (const InputError& e) {
    throw InputError(cfg.input_path + ": " + e.what());
  }
}

inline nlohmann::json envelope(Command c) {
  return {{"schema", kSchema}, {"command", command_name(c)}};
}

inline std::string format_assignment(const Assignment& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(a[i]);
  }
  return out + ")";
}

inline std::string format_subset(Subset s) {
  return subset_to_string(s);
}

inline void print_outcome(std::ostream& out, const SolveOutcome& o) {
  switch (o.verdict) {
    case Verdict::solution_found:
      out << "solution: " << format_assignment(o.assignment) << "\n";
      out << "verified: " << (o.verified ? "yes" : "no") << "\n";
      break;
    case Verdict::no_solution_in_bounded_set:
      out << "no solution of weight <= " << *o.bound
          << " (conditional: relies on the algebra being supernilpotent)\n";
      break;
    case Verdict::no_solution_exhaustive:
      out << "no solution (exhaustive)\n";
      break;
  }
  if (o.bound) out << "bound: " << *o.bound << "\n";
  out << "candidates_tested: " << o.stats.candidates_tested << "\n";
  out << "term_evaluations: " << o.stats.term_evaluations << "\n";
}

inline void emit(std::ostream& out, const nlohmann::json& doc) { out << doc.dump(2) << "\n"; }

inline std::optional<std::uint64_t> solver_bound(const RunConfig& cfg, const FiniteAlgebra& alg,
                                                 const EquationSystem& sys) {
  if (cfg.bound_override) return cfg.bound_override;
  if (cfg.k_overrides) {
    const std::uint64_t mu = std::max<std::uint64_t>(max_arity(alg), 1);
    return make_bound_report(sys.size(), mu, alg.size(), sys.num_variables, cfg.k_overrides)
        .effective_bound;
  }
  return std::nullopt;
}

inline ExitCode run_solve(const RunConfig& cfg, std::ostream& out) {
  const auto alg = read_algebra(cfg);
  const auto sys = read_system(cfg);
  SolveOutcome o;
  if (cfg.command == Command::brute) {
    o = solve_brute(alg, sys);
  } else {
    o = solve_bounded(alg, sys, cfg.zero, solver_bound(cfg, alg, sys),
                      SolveOptions{cfg.threads, cfg.deterministic});
  }
  if (cfg.json) {
    auto doc = envelope(cfg.command);
    doc["algebra"] = alg.name();
    doc["zero"] = cfg.zero;
    doc["outcome"] = outcome_to_json(o);
    emit(out, doc);
  } else {
    print_outcome(out, o);
  }
  return o.solvable() ? ExitCode::ok : ExitCode::no_solution;
}

inline ExitCode run_bench(const RunConfig& cfg, std::ostream& out) {
  const auto alg = read_algebra(cfg);
  const auto sys = read_system(cfg);
  const auto r = bench(alg, sys, cfg.zero, solver_bound(cfg, alg, sys));
  if (cfg.json) {
    auto doc = envelope(cfg.command);
    doc["algebra"] = alg.name();
    doc["bounded"] = outcome_to_json(r.bounded);
    doc["brute"] = outcome_to_json(r.brute);
    doc["search_space"] = {{"bounded", r.bounded_space}, {"brute", r.brute_space}};
    doc["verdicts_agree"] = r.verdicts_agree;
    if (cfg.timing) doc["wall_time_ms"] = {{"bounded", r.bounded_ms}, {"brute", r.brute_ms}};
    emit(out, doc);
  } else {
    out << "[bounded]\n";
    print_outcome(out, r.bounded);
    out << "wall_time_ms: " << r.bounded_ms << "\n";
    out << "[brute]\n";
    print_outcome(out, r.brute);
    out << "wall_time_ms: " << r.brute_ms << "\n";
    out << "search_space: bounded " << r.bounded_space << ", brute " << r.brute_space << "\n";
    out << "verdicts_agree: " << (r.verdicts_agree ? "yes" : "no") << "\n";
  }
  return r.brute.solvable() ? ExitCode::ok : ExitCode::no_solution;
}

inline ExitCode run_bound(const RunConfig& cfg, std::ostream& out) {
  const auto alg = read_algebra(cfg);
  std::optional<std::uint64_t> s = cfg.s, n = cfg.n;
  if (!cfg.system_path.empty()) {
    const auto sys = read_system(cfg);
    if (!s) s = sys.size();
    if (!n) n = sys.num_variables;
  }
  if (!s) throw InputError("bound: the equation count -s (or --system) is required");
  const std::uint64_t mu = max_arity(alg);
  if (mu < 1) throw InputError("bound: the algebra has no operation of positive arity");
  const auto report = make_bound_report(*s, mu, alg.size(), n, cfg.k_overrides);
  if (cfg.json) {
    auto doc = envelope(cfg.command);
    doc["algebra"] = alg.name();
    doc["report"] = bound_report_to_json(report);
    emit(out, doc);
  } else {
    out << "mu: " << report.mu << "\n|A|: " << report.cardinality << "\ns: " << report.s << "\n";
    out << "factorization:";
    for (const auto& [p, a] : report.factorization) out << " " << p << "^" << a;
    out << "\nk:";
    for (auto k : report.k_list) out << " " << k;
    out << "\ntight_bound: " << report.tight_bound << "\nloose_bound: " << report.loose_bound
        << "\ne: " << report.e << "\neffective_bound: " << report.effective_bound << "\n";
    out << "note: bounds assume the algebra is supernilpotent (not verified)\n";
  }
  return ExitCode::ok;
}

inline ExitCode run_malcev(const RunConfig& cfg, std::ostream& out) {
  const auto alg = read_algebra(cfg);
  const auto result = find_malcev(alg, cfg.include_constants, cfg.cap);
  auto doc = envelope(cfg.command);
  doc["algebra"] = alg.name();
  doc["include_constants"] = cfg.include_constants;
  ExitCode code = ExitCode::ok;
  if (const auto* found = std::get_if<TernaryFunctionTable>(&result)) {
    doc["found"] = true;
    doc["witness"] = print_term(found->witness);
    doc["table"] = found->table;
    if (!cfg.json) out << "malcev term: " << print_term(found->witness) << "\n";
  } else {
    const auto& nf = std::get<MalcevNotFound>(result);
    doc["found"] = false;
    doc["complete"] = nf.complete;
    doc["explored"] = nf.explored;
    if (!cfg.json) {
      out << (nf.complete ? "no Mal'cev term: clone exhausted after "
                          : "no Mal'cev term found before the cap; inconclusive after ")
          << nf.explored << " operations\n";
    }
    code = ExitCode::no_solution;
  }
  if (cfg.json) emit(out, doc);
  return code;
}

inline ExitCode run_absorb(const RunConfig& cfg, std::ostream& out) {
  const auto f = function_from_json(read_json_input(cfg));
  const auto d = decompose(f);
  if (cfg.json) {
    auto doc = envelope(cfg.command);
    doc["decomposition"] = decomposition_to_json(f, d);
    emit(out, doc);
  } else {
    out << "absorbing_degree: " << d.degree() << "\n";
    for (const auto& [I, fi] : d.components) {
      if (fi.is_zero()) continue;
      out << "component " << format_subset(I) << ":";
      for (auto v : fi.values()) out << " " << v;
      out << "\n";
    }
  }
  return ExitCode::ok;
}

inline ExitCode run_reduce_witness(const RunConfig& cfg, std::ostream& out) {
  const auto doc_in = read_json_input(cfg);
  const auto kind_it = doc_in.find("kind");
  if (kind_it == doc_in.end() || !kind_it->is_string()) {
    throw InputError("reduce-witness: input needs a string field 'kind'");
  }
  const std::string kind = kind_it->get<std::string>();
  Subset U = 0;
  std::uint64_t bound = 0;
  if (kind == "subset_function") {
    const auto phi = subset_function_from_json(doc_in);
    U = ks_find_u(phi);
    bound = witness_bound(phi.k(), phi.m(), phi.p());
  } else if (kind == "functions") {
    const auto& list = ::supersolve::detail::json_field(doc_in, "functions", "input");
    if (!list.is_array()) throw InputError("functions: expected an array");
    std::vector<TabulatedFunction> fs;
    for (std::size_t i = 0; i < list.size(); ++i) {
      fs.push_back(function_from_json(list[i], "functions[" + std::to_string(i) + "]"));
    }
    const auto k = ::supersolve::detail::json_uint(
        ::supersolve::detail::json_field(doc_in, "k", "input"), "k");
    const auto& a_json = ::supersolve::detail::json_field(doc_in, "a", "input");
    if (!a_json.is_array()) throw InputError("a: expected an array");
    Assignment a;
    for (const auto& v : a_json) {
      a.push_back(static_cast<Element>(::supersolve::detail::json_uint(v, "a")));
    }
    U = redweight_find_u(fs, k, a);
    bound = fs.empty() ? 0 : witness_bound(k, fs.size(), fs.front().prime());
  } else {
    throw InputError("reduce-witness: unknown kind '" + kind + "'");
  }
  if (cfg.json) {
    auto doc = envelope(cfg.command);
    doc["kind"] = kind;
    doc["u"] = subset_elements(U);
    doc["size"] = subset_size(U);
    doc["bound"] = bound;
    emit(out, doc);
  } else {
    out << "U: " << format_subset(U) << "\n|U|: " << subset_size(U) << "\nbound: " << bound << "\n";
  }
  return ExitCode::ok;
}

inline ExitCode run_validate(const RunConfig& cfg, std::ostream& out) {
  const auto alg = read_algebra(cfg);
  nlohmann::json doc = envelope(cfg.command);
  doc["algebra"] = {{"name", alg.name()}, {"size", alg.size()}, {"max_arity", max_arity(alg)}};
  if (!cfg.system_path.empty()) {
    const auto sys = read_system(cfg);
    // Compiling checks operation names, arities and constants against the algebra.
    CompiledSystem compiled(alg, sys);
    doc["system"] = {{"equations", sys.size()},
                     {"variables", sys.num_variables},
                     {"length", system_length(sys)}};
  }
  if (cfg.json) {
    emit(out, doc);
  } else {
    out << "algebra '" << alg.name() << "': ok (size " << alg.size() << ", max arity "
        << max_arity(alg) << ")\n";
    if (doc.contains("system")) {
      out << "system: ok (" << doc["system"]["equations"] << " equations, "
          << doc["system"]["variables"] << " variables, length " << doc["system"]["length"]
          << ")\n";
    }
  }
  return ExitCode::ok;
}

}  // namespace detail

/// Executes one command. Results go to `out`, diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    ExitCode code = ExitCode::ok;
    switch (cfg.command) {
      case Command::solve:
      case Command::brute:
        code = detail::run_solve(cfg, out);
        break;
      case Command::bench:
        code = detail::run_bench(cfg, out);
        break;
      case Command::bound:
        code = detail::run_bound(cfg, out);
        break;
      case Command::malcev:
        code = detail::run_malcev(cfg, out);
        break;
      case Command::absorb:
        code = detail::run_absorb(cfg, out);
        break;
      case Command::reduce_witness:
        code = detail::run_reduce_witness(cfg, out);
        break;
      case Command::validate:
        code = detail::run_validate(cfg, out);
        break;
    }
    return static_cast<int>(code);
  } catch (const TheoremViolation& e) {
    err << "internal error (theorem violation): " << e.what() << "\n";
    return static_cast<int>(ExitCode::theorem_violation);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input_error);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input_error);
  }
}

}  // namespace supersolve::cli
