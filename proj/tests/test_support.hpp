#pragma once

// Shared helpers for the test suites: random generators and brute-force
// oracles that deliberately avoid the library's own code paths.

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supersolve/supersolve.hpp"

namespace supersolve::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(SUPERSOLVE_DATA_DIR) + "/" + rel;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Random polynomial term over the algebra's signature plus constants.
class TermGenerator {
 public:
  TermGenerator(const FiniteAlgebra& alg, std::size_t n, std::uint64_t seed)
      : alg_(alg), n_(n), rng_(seed) {}

  Term operator()(std::size_t depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    if (depth == 0 || pick(rng_) < 3) return leaf();
    std::vector<std::size_t> ops;
    for (std::size_t i = 0; i < alg_.operations().size(); ++i) ops.push_back(i);
    const auto& op = alg_.operations()[ops[std::uniform_int_distribution<std::size_t>(
        0, ops.size() - 1)(rng_)]];
    std::vector<Term> children;
    for (std::size_t i = 0; i < op.arity; ++i) children.push_back((*this)(depth - 1));
    return Term::apply(op.name, std::move(children));
  }

  Term leaf() {
    // Mostly variables; constants a quarter of the time (always when n = 0).
    if (n_ == 0 || std::uniform_int_distribution<int>(0, 3)(rng_) == 0) {
      return Term::constant(std::uniform_int_distribution<std::size_t>(0, alg_.size() - 1)(rng_));
    }
    return Term::var(std::uniform_int_distribution<std::size_t>(1, n_)(rng_));
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const FiniteAlgebra& alg_;
  std::size_t n_;
  std::mt19937_64 rng_;
};

/// Random system with s equations in at most n variables, terms of depth <= depth.
inline EquationSystem random_system(const FiniteAlgebra& alg, std::size_t n, std::size_t s,
                                    std::size_t depth, std::uint64_t seed) {
  TermGenerator gen(alg, n, seed);
  EquationSystem sys;
  for (std::size_t i = 0; i < s; ++i) {
    Term lhs = gen(depth), rhs = gen(depth);
    sys.num_variables = std::max({sys.num_variables, max_variable(lhs), max_variable(rhs)});
    sys.equations.push_back({std::move(lhs), std::move(rhs)});
  }
  return sys;
}

/// Every vector of A^n, last coordinate fastest.
inline std::vector<Assignment> all_vectors(std::size_t n, std::size_t size) {
  std::vector<Assignment> out;
  Assignment a(n, 0);
  while (true) {
    out.push_back(a);
    std::size_t i = n;
    while (i > 0 && ++a[i - 1] == size) a[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline std::size_t weight(const Assignment& a, Element z) {
  std::size_t w = 0;
  for (Element x : a) w += x != z;
  return w;
}

/// Solution set by direct AST evaluation.
inline std::vector<Assignment> solution_set(const FiniteAlgebra& alg, const EquationSystem& sys) {
  std::vector<Assignment> out;
  for (const auto& a : all_vectors(sys.num_variables, alg.size())) {
    bool ok = true;
    for (const auto& eq : sys.equations) {
      ok = ok && eval_term(alg, eq.lhs, a) == eval_term(alg, eq.rhs, a);
    }
    if (ok) out.push_back(a);
  }
  return out;
}

/// Pointwise sum mod p of a family of tables.
inline std::vector<std::uint32_t> pointwise_sum(const std::vector<const TabulatedFunction*>& fs) {
  std::vector<std::uint32_t> out(fs.front()->table_size(), 0);
  const std::uint32_t p = fs.front()->prime();
  for (const auto* f : fs) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] + f->values()[i]) % p;
  }
  return out;
}

/// Boolean function over {0,1}^n that is sum_{I in coeffs} c_I * prod_{i in I} a_i mod 2.
inline TabulatedFunction boolean_from_coefficients(std::size_t n,
                                                   const std::vector<std::pair<Subset, std::uint32_t>>& coeffs) {
  return TabulatedFunction::from(2, n, 2, [&](std::span<const Element> a) {
    std::uint32_t v = 0;
    for (const auto& [I, c] : coeffs) {
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if ((I >> i) & 1u) all = all && a[i] == 1;
      }
      if (all) v += c;
    }
    return v % 2;
  });
}

}  // namespace supersolve::testing
