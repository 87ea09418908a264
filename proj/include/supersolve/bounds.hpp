#pragma once

// Weight bounds for bounded-weight search over supernilpotent algebras.
//
// For |A| = prod p_i^alpha_i and maximal arity mu:
//   k_i            = (mu (p_i^alpha_i - 1))^(alpha_i - 1)
//   tight bound    = s * sum_i k_i alpha_i (p_i - 1)
//   loose bound    = s * |A|^(log2 mu + log2 |A| + 1)       (rounded up)
//   e              = loose bound + 1
// The solver searches with the tight bound; the loose one is reported only.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include "supersolve/arith.hpp"
#include "supersolve/error.hpp"

namespace supersolve {

struct PrimePower {
  std::uint64_t prime;
  std::uint64_t exponent;

  bool operator==(const PrimePower&) const = default;
};

/// Trial division, primes ascending; empty for 1.
inline std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n < 1) throw InputError("factorize: argument must be at least 1");
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    PrimePower pp{d, 0};
    while (n % d == 0) {
      n /= d;
      ++pp.exponent;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

/// (mu (p^alpha - 1))^(alpha - 1), exactly.
inline std::uint64_t k_factor(std::uint64_t mu, std::uint64_t p, std::uint64_t alpha) {
  if (mu < 1) throw InputError("k_factor: mu must be at least 1");
  if (!is_prime(p)) throw InputError("k_factor: " + std::to_string(p) + " is not prime");
  if (alpha < 1) throw InputError("k_factor: alpha must be at least 1");
  const std::uint64_t order = checked_pow(p, alpha, "k_factor");
  return checked_pow(checked_mul(mu, order - 1, "k_factor"), alpha - 1, "k_factor");
}

/// s * sum_i k_i alpha_i (p_i - 1). `overrides` replaces the k_i one-for-one.
inline std::uint64_t tight_weight_bound(std::uint64_t s, std::uint64_t mu, std::uint64_t cardinality,
                                        const std::optional<std::vector<std::uint64_t>>& overrides =
                                            std::nullopt) {
  if (s < 1) throw InputError("tight bound: s must be at least 1");
  const auto factors = factorize(cardinality);
  if (overrides && overrides->size() != factors.size()) {
    throw InputError("tight bound: expected " + std::to_string(factors.size()) +
                     " per-factor degrees, got " + std::to_string(overrides->size()));
  }
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& [p, alpha] = factors[i];
    std::uint64_t k = 0;
    if (overrides) {
      k = (*overrides)[i];
      if (k < 1) throw InputError("tight bound: per-factor degrees must be positive");
    } else {
      k = k_factor(mu, p, alpha);
    }
    sum = checked_add(sum, checked_mul(checked_mul(k, alpha, "tight bound"), p - 1, "tight bound"),
                      "tight bound");
  }
  return checked_mul(s, sum, "tight bound");
}

namespace detail {

inline std::optional<std::uint64_t> exact_log2(std::uint64_t x) {
  if (x == 0 || (x & (x - 1)) != 0) return std::nullopt;
  std::uint64_t e = 0;
  while (x > 1) {
    x >>= 1;
    ++e;
  }
  return e;
}

}  // namespace detail

/// s * |A|^(log2 mu + log2 |A| + 1), rounded up.
///
/// Uses |A|^(log2 mu) = mu^(log2 |A|): when |A| is a power of two the value is
/// the exact integer s * mu^a * |A|^(a+1) with a = log2 |A|. Otherwise it is
/// evaluated with a 256-bit mantissa and rounded up.
inline std::uint64_t loose_weight_bound(std::uint64_t s, std::uint64_t mu, std::uint64_t cardinality) {
  if (mu < 1) throw InputError("loose bound: mu must be at least 1");
  if (cardinality < 1) throw InputError("loose bound: cardinality must be at least 1");
  if (cardinality == 1) return s;  // 1^x = 1
  if (auto a = detail::exact_log2(cardinality)) {
    return checked_mul(s,
                       checked_mul(checked_pow(mu, *a, "loose bound"),
                                   checked_pow(cardinality, *a + 1, "loose bound"), "loose bound"),
                       "loose bound");
  }
  using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256>>;
  const Float card(cardinality);
  const Float exponent = log(Float(mu)) / log(Float(2)) + log(card) / log(Float(2)) + 1;
  const Float value = Float(s) * exp(exponent * log(card));
  const Float rounded = ceil(value);
  if (rounded > Float(std::numeric_limits<std::uint64_t>::max())) {
    throw OverflowError("loose bound: result exceeds 64 bits");
  }
  return rounded.convert_to<std::uint64_t>();
}

struct BoundReport {
  std::uint64_t mu = 0;
  std::uint64_t cardinality = 0;
  std::uint64_t s = 0;
  std::optional<std::uint64_t> n;
  std::vector<PrimePower> factorization;
  std::vector<std::uint64_t> k_list;
  bool k_overridden = false;
  std::uint64_t tight_bound = 0;
  std::uint64_t loose_bound = 0;
  std::uint64_t effective_bound = 0;
  std::uint64_t e = 0;
  // The bounds are only meaningful for supernilpotent algebras, which is not checked.
  bool assumes_supernilpotent = true;
};

inline BoundReport make_bound_report(std::uint64_t s, std::uint64_t mu, std::uint64_t cardinality,
                                     std::optional<std::uint64_t> n = std::nullopt,
                                     const std::optional<std::vector<std::uint64_t>>& overrides =
                                         std::nullopt) {
  BoundReport r;
  r.s = s;
  r.mu = mu;
  r.cardinality = cardinality;
  r.n = n;
  r.factorization = factorize(cardinality);
  if (overrides) {
    r.k_list = *overrides;
    r.k_overridden = true;
  } else {
    for (const auto& [p, alpha] : r.factorization) r.k_list.push_back(k_factor(mu, p, alpha));
  }
  r.tight_bound = tight_weight_bound(s, mu, cardinality, overrides);
  r.loose_bound = loose_weight_bound(s, mu, cardinality);
  r.e = checked_add(r.loose_bound, 1, "e");
  r.effective_bound = n ? std::min(*n, r.tight_bound) : r.tight_bound;
  if (!overrides && cardinality >= 2 && r.tight_bound > r.loose_bound) {
    throw TheoremViolation("tight bound " + std::to_string(r.tight_bound) +
                           " exceeds loose bound " + std::to_string(r.loose_bound));
  }
  return r;
}

inline nlohmann::json bound_report_to_json(const BoundReport& r) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& [p, alpha] : r.factorization) factors.push_back({{"prime", p}, {"exponent", alpha}});
  nlohmann::json out = {{"mu", r.mu},
                        {"cardinality", r.cardinality},
                        {"s", r.s},
                        {"n", r.n ? nlohmann::json(*r.n) : nlohmann::json(nullptr)},
                        {"factorization", std::move(factors)},
                        {"k_list", r.k_list},
                        {"k_overridden", r.k_overridden},
                        {"tight_bound", r.tight_bound},
                        {"loose_bound", r.loose_bound},
                        {"effective_bound", r.effective_bound},
                        {"e", r.e},
                        {"assumes_supernilpotent", r.assumes_supernilpotent}};
  return out;
}

}  // namespace supersolve
