#pragma once

// Bounded-weight solving of polynomial equation systems.
//
// Over a supernilpotent algebra, a solvable system of s equations has a
// solution in which at most tight_weight_bound(s, mu, |A|) coordinates differ
// from any fixed element z. solve_bounded scans exactly those candidates in
// canonical order; solve_brute scans all of A^n and serves as the oracle.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include <json.hpp>

#include "supersolve/algebra.hpp"
#include "supersolve/arith.hpp"
#include "supersolve/bounds.hpp"
#include "supersolve/error.hpp"
#include "supersolve/malcev.hpp"
#include "supersolve/term.hpp"

namespace supersolve {

// Enumeration ---------------------------------------------------------------

/// sum_{i=0}^{min(w,n)} C(n,i) (size-1)^i, saturating at UINT64_MAX.
inline std::uint64_t bounded_weight_count(std::uint64_t n, std::uint64_t w, std::uint64_t size) {
  const std::uint64_t top = std::min(n, w);
  std::uint64_t total = 0, binom = 1, power = 1;
  for (std::uint64_t i = 0; i <= top; ++i) {
    if (i > 0) {
      // C(n,i) = C(n,i-1) * (n-i+1) / i; exact because C(n,i-1)*(n-i+1) = i*C(n,i).
      const unsigned __int128 next = static_cast<unsigned __int128>(binom) * (n - i + 1) / i;
      binom = next > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(next);
      power = saturating_mul(power, size - 1);
    }
    const std::uint64_t term = saturating_mul(binom, power);
    total = term > UINT64_MAX - total ? UINT64_MAX : total + term;
  }
  return total;
}

namespace detail {

// Next k-combination of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Values different from z, ascending.
inline std::vector<Element> non_z_values(std::size_t size, Element z) {
  std::vector<Element> out;
  for (Element v = 0; v < size; ++v) {
    if (v != z) out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Assignments in A^n with at most min(w, n) coordinates different from z.
///
/// Order: support size ascending, then support set lexicographically, then the
/// non-z values (ascending, last support position fastest).
class BoundedWeightEnumerator {
 public:
  BoundedWeightEnumerator(std::size_t n, std::size_t w, std::size_t size, Element z)
      : n_(n), max_weight_(std::min(w, n)), values_(detail::non_z_values(size, z)), z_(z) {
    if (size < 1) throw InputError("enumeration: size must be at least 1");
    if (z >= size) throw InputError("enumeration: z = " + std::to_string(z) + " out of range");
    if (values_.empty()) max_weight_ = 0;
  }

  /// Writes the next assignment into `out`; false once exhausted.
  bool next(Assignment& out) {
    if (finished_) return false;
    if (!started_) {
      started_ = true;
      start_weight(0);
    } else if (!advance()) {
      finished_ = true;
      return false;
    }
    out.assign(n_, z_);
    for (std::size_t i = 0; i < support_.size(); ++i) out[support_[i]] = values_[digits_[i]];
    return true;
  }

  std::size_t current_weight() const noexcept { return support_.size(); }

 private:
  void start_weight(std::size_t w) {
    support_.resize(w);
    for (std::size_t i = 0; i < w; ++i) support_[i] = i;
    digits_.assign(w, 0);
  }

  bool advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < values_.size()) return true;
      digits_[i] = 0;
    }
    if (detail::next_combination(support_, n_)) return true;
    if (support_.size() >= max_weight_) return false;
    start_weight(support_.size() + 1);
    return true;
  }

  std::size_t n_;
  std::size_t max_weight_;
  std::vector<Element> values_;
  Element z_;
  std::vector<std::size_t> support_;
  std::vector<std::size_t> digits_;
  bool started_ = false;
  bool finished_ = false;
};

inline std::vector<Assignment> enumerate_bounded_weight(std::size_t n, std::size_t w, std::size_t size,
                                                        Element z) {
  BoundedWeightEnumerator e(n, w, size, z);
  std::vector<Assignment> out;
  Assignment a;
  while (e.next(a)) out.push_back(a);
  return out;
}

// Outcomes ------------------------------------------------------------------

enum class Verdict { solution_found, no_solution_in_bounded_set, no_solution_exhaustive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::solution_found:
      return "solution_found";
    case Verdict::no_solution_in_bounded_set:
      return "no_solution_in_bounded_set";
    case Verdict::no_solution_exhaustive:
      return "no_solution_exhaustive";
  }
  return "unknown";
}

struct SolveStats {
  std::uint64_t candidates_tested = 0;
  std::uint64_t term_evaluations = 0;  // term nodes evaluated
};

struct SolveOutcome {
  Verdict verdict = Verdict::no_solution_exhaustive;
  Assignment assignment;                  // set for solution_found
  bool verified = false;                  // solution re-checked by the reference evaluator
  std::optional<std::uint64_t> bound;     // weight bound used (bounded search only)
  bool conditional = false;               // "no" relies on the supernilpotency precondition
  SolveStats stats;

  bool solvable() const noexcept { return verdict == Verdict::solution_found; }
};

struct SolveOptions {
  std::size_t threads = 1;
  // With several threads, still report the canonical-order-first solution.
  bool deterministic = true;
};

/// A system compiled for repeated evaluation. Immutable; shareable across threads.
class CompiledSystem {
 public:
  CompiledSystem(const FiniteAlgebra& alg, const EquationSystem& sys)
      : n_(sys.num_variables) {
    for (const auto& eq : sys.equations) {
      equations_.emplace_back(CompiledTerm(alg, eq.lhs), CompiledTerm(alg, eq.rhs));
      stack_ = std::max({stack_, equations_.back().first.stack_size(),
                         equations_.back().second.stack_size()});
    }
  }

  std::size_t num_variables() const noexcept { return n_; }
  std::size_t stack_size() const noexcept { return std::max<std::size_t>(stack_, 1); }

  /// Checks equations in order and stops at the first violated one.
  bool satisfied(std::span<const Element> a, std::span<Element> stack,
                 std::uint64_t& node_evaluations) const noexcept {
    for (const auto& [lhs, rhs] : equations_) {
      node_evaluations += lhs.length() + rhs.length();
      if (lhs.eval(a, stack) != rhs.eval(a, stack)) return false;
    }
    return true;
  }

 private:
  std::size_t n_;
  std::size_t stack_ = 1;
  std::vector<std::pair<CompiledTerm, CompiledTerm>> equations_;
};

/// Reference check through the AST evaluator.
inline bool satisfies(const FiniteAlgebra& alg, const EquationSystem& sys, std::span<const Element> a) {
  for (const auto& eq : sys.equations) {
    if (eval_term(alg, eq.lhs, a) != eval_term(alg, eq.rhs, a)) return false;
  }
  return true;
}

namespace detail {

inline void verify_solution(const FiniteAlgebra& alg, const EquationSystem& sys, SolveOutcome& out) {
  if (!satisfies(alg, sys, out.assignment)) {
    throw TheoremViolation("search reported an assignment that fails re-verification");
  }
  out.verified = true;
}

inline std::uint64_t default_bound(const FiniteAlgebra& alg, const EquationSystem& sys) {
  // An algebra whose operations are all nullary has only constant polynomial
  // functions; any bound is valid, so mu is clamped to 1.
  const std::uint64_t mu = std::max<std::uint64_t>(max_arity(alg), 1);
  return make_bound_report(sys.size(), mu, alg.size(), sys.num_variables).effective_bound;
}

// Scans one support set: all value patterns on `support`, in canonical order.
inline bool scan_support(const CompiledSystem& sys, std::span<const std::size_t> support,
                         std::span<const Element> values, Assignment& a, std::vector<std::size_t>& digits,
                         std::span<Element> stack, SolveStats& stats, const std::atomic<bool>* cancel) {
  const std::size_t w = support.size();
  digits.assign(w, 0);
  for (std::size_t i = 0; i < w; ++i) a[support[i]] = values[0];
  while (true) {
    ++stats.candidates_tested;
    if (sys.satisfied(a, stack, stats.term_evaluations)) return true;
    if (cancel && cancel->load(std::memory_order_relaxed)) return false;
    std::size_t i = w;
    while (i > 0) {
      --i;
      if (++digits[i] < values.size()) {
        a[support[i]] = values[digits[i]];
        break;
      }
      digits[i] = 0;
      a[support[i]] = values[0];
      if (i == 0) return false;
    }
    if (w == 0) return false;
  }
}

}  // namespace detail

/// Scans all assignments of weight <= bound (relative to z) in canonical order.
///
/// Without an explicit bound the tight bound for (s, mu, |A|) is used. When the
/// bound covers all n variables the scan is exhaustive and a negative verdict
/// is unconditional.
inline SolveOutcome solve_bounded(const FiniteAlgebra& alg, const EquationSystem& sys, Element z = 0,
                                  std::optional<std::uint64_t> bound = std::nullopt,
                                  const SolveOptions& options = {}) {
  if (z >= alg.size()) throw InputError("zero element " + std::to_string(z) + " out of range");
  if (sys.equations.empty()) throw InputError("system has no equations");
  const CompiledSystem compiled(alg, sys);
  const std::size_t n = sys.num_variables;
  const std::uint64_t used = bound ? *bound : detail::default_bound(alg, sys);
  const std::size_t max_weight = static_cast<std::size_t>(std::min<std::uint64_t>(used, n));
  const bool exhaustive = used >= n;
  const auto values = detail::non_z_values(alg.size(), z);
  const std::size_t top = values.empty() ? 0 : max_weight;

  SolveOutcome out;
  out.bound = used;

  if (options.threads <= 1) {
    Assignment a(n, z);
    std::vector<std::size_t> digits;
    std::vector<Element> stack(compiled.stack_size());
    for (std::size_t w = 0; w <= top; ++w) {
      std::vector<std::size_t> support(w);
      for (std::size_t i = 0; i < w; ++i) support[i] = i;
      do {
        std::fill(a.begin(), a.end(), z);
        if (detail::scan_support(compiled, support, values, a, digits, stack, out.stats, nullptr)) {
          out.verdict = Verdict::solution_found;
          out.assignment = a;
          detail::verify_solution(alg, sys, out);
          return out;
        }
      } while (detail::next_combination(support, n));
    }
  } else {
    // Layer by layer; workers pull support sets from a shared generator.
    for (std::size_t w = 0; w <= top; ++w) {
      std::mutex mutex;
      std::vector<std::size_t> next_support(w);
      for (std::size_t i = 0; i < w; ++i) next_support[i] = i;
      bool generator_done = false;
      std::uint64_t next_ordinal = 0;
      std::atomic<std::uint64_t> best{UINT64_MAX};
      std::atomic<bool> cancel{false};
      Assignment best_assignment;
      SolveStats total;

      auto worker = [&] {
        Assignment a(n, z);
        std::vector<std::size_t> digits, support;
        std::vector<Element> stack(compiled.stack_size());
        SolveStats local;
        while (!cancel.load()) {
          std::uint64_t ordinal = 0;
          {
            std::lock_guard lock(mutex);
            if (generator_done) break;
            support = next_support;
            ordinal = next_ordinal++;
            generator_done = !detail::next_combination(next_support, n);
          }
          if (ordinal > best.load()) break;  // canonical order already beaten
          std::fill(a.begin(), a.end(), z);
          const std::atomic<bool>* stop = options.deterministic ? nullptr : &cancel;
          if (detail::scan_support(compiled, support, values, a, digits, stack, local, stop)) {
            std::lock_guard lock(mutex);
            if (ordinal < best.load()) {
              best.store(ordinal);
              best_assignment = a;
            }
            if (!options.deterministic) cancel.store(true);
          }
        }
        std::lock_guard lock(mutex);
        total.candidates_tested += local.candidates_tested;
        total.term_evaluations += local.term_evaluations;
      };

      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < options.threads; ++t) pool.emplace_back(worker);
      pool.clear();

      out.stats.candidates_tested += total.candidates_tested;
      out.stats.term_evaluations += total.term_evaluations;
      if (best.load() != UINT64_MAX) {
        out.verdict = Verdict::solution_found;
        out.assignment = best_assignment;
        detail::verify_solution(alg, sys, out);
        return out;
      }
    }
  }

  out.verdict = exhaustive ? Verdict::no_solution_exhaustive : Verdict::no_solution_in_bounded_set;
  out.conditional = !exhaustive;
  return out;
}

/// Full lexicographic scan of A^n (last coordinate fastest).
inline SolveOutcome solve_brute(const FiniteAlgebra& alg, const EquationSystem& sys) {
  if (sys.equations.empty()) throw InputError("system has no equations");
  const CompiledSystem compiled(alg, sys);
  const std::size_t n = sys.num_variables;
  const std::size_t size = alg.size();
  Assignment a(n, 0);
  std::vector<Element> stack(compiled.stack_size());
  SolveOutcome out;
  while (true) {
    ++out.stats.candidates_tested;
    if (compiled.satisfied(a, stack, out.stats.term_evaluations)) {
      out.verdict = Verdict::solution_found;
      out.assignment = a;
      detail::verify_solution(alg, sys, out);
      return out;
    }
    std::size_t i = n;
    bool wrapped = true;
    while (i > 0) {
      --i;
      if (++a[i] < size) {
        wrapped = false;
        break;
      }
      a[i] = 0;
    }
    if (wrapped) break;
  }
  out.verdict = Verdict::no_solution_exhaustive;
  return out;
}

// Normalization -------------------------------------------------------------

namespace detail {

inline Term substitute_ternary(const Term& t, const Term& x1, const Term& x2, const Term& x3) {
  switch (t.kind) {
    case Term::Kind::variable:
      return t.index == 1 ? x1 : t.index == 2 ? x2 : x3;
    case Term::Kind::constant:
      return t;
    case Term::Kind::apply: {
      std::vector<Term> children;
      children.reserve(t.children.size());
      for (const auto& c : t.children) children.push_back(substitute_ternary(c, x1, x2, x3));
      return Term::apply(t.op, std::move(children));
    }
  }
  return t;
}

}  // namespace detail

/// h_i = d(f_i, g_i, z). Because x -> d(x, g, z) is injective for a Mal'cev
/// operation d, h_i(a) = z exactly when f_i(a) = g_i(a).
inline std::vector<Term> normalize_system(const FiniteAlgebra& alg, const EquationSystem& sys,
                                          const TernaryFunctionTable& d, Element z = 0) {
  if (z >= alg.size()) throw InputError("zero element " + std::to_string(z) + " out of range");
  if (d.size != alg.size() || !is_malcev(d)) {
    throw InputError("normalization requires a Mal'cev operation on the same carrier");
  }
  if (ternary_table(alg, d.witness) != d.table) {
    throw InputError("witness term does not induce the given Mal'cev table");
  }
  std::vector<Term> out;
  out.reserve(sys.size());
  for (const auto& eq : sys.equations) {
    out.push_back(detail::substitute_ternary(d.witness, eq.lhs, eq.rhs, Term::constant(z)));
  }
  return out;
}

// Benchmarking --------------------------------------------------------------

struct BenchRecord {
  SolveOutcome bounded;
  SolveOutcome brute;
  std::uint64_t bounded_space = 0;  // assignments of weight <= bound
  std::uint64_t brute_space = 0;    // |A|^n, saturating
  double bounded_ms = 0;
  double brute_ms = 0;
  bool verdicts_agree = false;
};

inline BenchRecord bench(const FiniteAlgebra& alg, const EquationSystem& sys, Element z = 0,
                         std::optional<std::uint64_t> bound = std::nullopt) {
  using Clock = std::chrono::steady_clock;
  BenchRecord r;
  auto t0 = Clock::now();
  r.bounded = solve_bounded(alg, sys, z, bound);
  auto t1 = Clock::now();
  r.brute = solve_brute(alg, sys);
  auto t2 = Clock::now();
  r.bounded_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.brute_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  r.verdicts_agree = r.bounded.solvable() == r.brute.solvable();
  const std::uint64_t n = sys.num_variables;
  r.bounded_space = bounded_weight_count(n, std::min<std::uint64_t>(*r.bounded.bound, n), alg.size());
  r.brute_space = bounded_weight_count(n, n, alg.size());
  return r;
}

// JSON ----------------------------------------------------------------------

inline nlohmann::json outcome_to_json(const SolveOutcome& o) {
  return {{"verdict", verdict_name(o.verdict)},
          {"assignment", o.solvable() ? nlohmann::json(o.assignment) : nlohmann::json(nullptr)},
          {"verified", o.verified},
          {"bound", o.bound ? nlohmann::json(*o.bound) : nlohmann::json(nullptr)},
          {"conditional", o.conditional},
          {"stats",
           {{"candidates_tested", o.stats.candidates_tested},
            {"term_evaluations", o.stats.term_evaluations}}}};
}

}  // namespace supersolve
