#pragma once

// Explicit witness search for the two weight-reduction existence results:
//
//  * ks_find_u: for phi on the subsets of [n] of size at most k with values in
//    Z_p^m, a set U with |U| <= k m (p-1) whose restricted sum matches the
//    full sum.
//  * redweight_find_u: for f_1..f_m : A^n -> Z_p of absorbing degree at most
//    k and a point a, a set U with |U| <= k m (p-1) and f_i(a) = f_i(a|U).
//
// Both scan candidates in canonical order (size, then bitmask) and therefore
// return the canonical-order minimum. Failing to find U within the bound is a
// TheoremViolation.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "supersolve/absorbing.hpp"
#include "supersolve/arith.hpp"
#include "supersolve/error.hpp"
#include "supersolve/subset.hpp"

namespace supersolve {

/// phi : P_k([n]) -> Z_p^m.
class SubsetFunction {
 public:
  SubsetFunction(std::size_t n, std::size_t k, std::uint32_t p, std::size_t m,
                 std::map<Subset, std::vector<std::uint32_t>> values)
      : n_(n), k_(k), p_(p), m_(m), values_(std::move(values)) {
    if (!is_prime(p_)) throw ValidationError("p: " + std::to_string(p_) + " is not prime");
    if (m_ < 1) throw ValidationError("m: must be at least 1");
    domain_ = subsets_by_size(n_, k_);
    if (values_.size() != domain_.size()) {
      throw ValidationError("values: expected " + std::to_string(domain_.size()) +
                            " subsets of size <= k, got " + std::to_string(values_.size()));
    }
    for (Subset J : domain_) {
      auto it = values_.find(J);
      if (it == values_.end()) {
        throw ValidationError("values: missing subset " + subset_to_string(J));
      }
      if (it->second.size() != m_) {
        throw ValidationError("values" + subset_to_string(J) + ": expected a vector of length " +
                              std::to_string(m_));
      }
      for (auto v : it->second) {
        if (v >= p_) throw ValidationError("values" + subset_to_string(J) + ": entry not below p");
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::uint32_t p() const noexcept { return p_; }
  std::size_t m() const noexcept { return m_; }
  /// P_k([n]) in canonical order.
  std::span<const Subset> domain() const noexcept { return domain_; }
  const std::vector<std::uint32_t>& operator()(Subset J) const { return values_.at(J); }

  /// Sum of phi(J) over J in P_k(U).
  std::vector<std::uint32_t> restricted_sum(Subset U) const {
    std::vector<std::uint32_t> sum(m_, 0);
    for (Subset J : domain_) {
      if (!is_subset(J, U)) continue;
      const auto& v = values_.at(J);
      for (std::size_t i = 0; i < m_; ++i) sum[i] = (sum[i] + v[i]) % p_;
    }
    return sum;
  }

 private:
  std::size_t n_, k_;
  std::uint32_t p_;
  std::size_t m_;
  std::map<Subset, std::vector<std::uint32_t>> values_;
  std::vector<Subset> domain_;
};

/// k m (p-1), saturating.
inline std::uint64_t witness_bound(std::uint64_t k, std::uint64_t m, std::uint64_t p) {
  return saturating_mul(saturating_mul(k, m), p - 1);
}

inline Subset ks_find_u(const SubsetFunction& phi) {
  const std::uint64_t bound = witness_bound(phi.k(), phi.m(), phi.p());
  const std::size_t limit = static_cast<std::size_t>(std::min<std::uint64_t>(phi.n(), bound));
  const auto target = phi.restricted_sum(full_subset(phi.n()));
  for (Subset U : subsets_by_size(phi.n(), limit)) {
    if (phi.restricted_sum(U) == target) return U;
  }
  throw TheoremViolation("no witness U with |U| <= " + std::to_string(limit) +
                         " for a subset function with n=" + std::to_string(phi.n()) +
                         ", k=" + std::to_string(phi.k()) + ", p=" + std::to_string(phi.p()) +
                         ", m=" + std::to_string(phi.m()));
}

/// Finds U with f(a) = f(a|U) for every f in fs. Every f must have absorbing
/// degree at most k; otherwise HypothesisViolation.
inline Subset redweight_find_u(std::span<const TabulatedFunction> fs, std::size_t k,
                               std::span<const Element> a) {
  if (fs.empty()) return 0;
  const auto& first = fs.front();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    if (f.arity() != first.arity() || f.prime() != first.prime() ||
        f.domain_size() != first.domain_size()) {
      throw InputError("functions[" + std::to_string(i) + "]: shape differs from functions[0]");
    }
    const int degree = absorbing_degree(f);
    if (degree > static_cast<int>(k)) {
      throw HypothesisViolation("functions[" + std::to_string(i) + "] has absorbing degree " +
                                std::to_string(degree) + " > k = " + std::to_string(k));
    }
  }
  const std::size_t n = first.arity();
  std::vector<std::size_t> base_index(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) base_index[i] = fs[i].index_of(a);

  const std::uint64_t bound = witness_bound(k, fs.size(), first.prime());
  const std::size_t limit = static_cast<std::size_t>(std::min<std::uint64_t>(n, bound));
  for (Subset U : subsets_by_size(n, limit)) {
    const auto restricted = restrict_vector(a, U, 0);
    const std::size_t index = first.index_of(restricted);
    bool ok = true;
    for (std::size_t i = 0; i < fs.size() && ok; ++i) {
      ok = fs[i].at_index(index) == fs[i].at_index(base_index[i]);
    }
    if (ok) return U;
  }
  throw TheoremViolation("no weight-reducing U with |U| <= " + std::to_string(limit) + " for " +
                         std::to_string(fs.size()) + " functions of absorbing degree <= " +
                         std::to_string(k));
}

// JSON ----------------------------------------------------------------------

/// {"n", "k", "p", "m", "values": [{"subset": [1-based indices], "value": [...]}, ...]}
inline SubsetFunction subset_function_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("subset function: expected a JSON object");
  const auto n = detail::json_uint(detail::json_field(doc, "n", "subset function"), "n");
  const auto k = detail::json_uint(detail::json_field(doc, "k", "subset function"), "k");
  const auto p = detail::json_uint(detail::json_field(doc, "p", "subset function"), "p");
  const auto m = detail::json_uint(detail::json_field(doc, "m", "subset function"), "m");
  if (n > 20) throw ValidationError("n: at most 20 supported");
  if (p > UINT32_MAX) throw ValidationError("p: too large");
  const auto& list = detail::json_field(doc, "values", "subset function");
  if (!list.is_array()) throw ValidationError("values: expected an array");
  std::map<Subset, std::vector<std::uint32_t>> values;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "values[" + std::to_string(i) + "]";
    const auto& entry = list[i];
    if (!entry.is_object()) throw ValidationError(where + ": expected an object");
    const auto& subset_json = detail::json_field(entry, "subset", where);
    const auto& value_json = detail::json_field(entry, "value", where);
    if (!subset_json.is_array() || !value_json.is_array()) {
      throw ValidationError(where + ": subset and value must be arrays");
    }
    std::vector<std::size_t> elems;
    for (const auto& e : subset_json) elems.push_back(detail::json_uint(e, where + ".subset"));
    std::vector<std::uint32_t> value;
    for (const auto& v : value_json) {
      const auto x = detail::json_uint(v, where + ".value");
      if (x > UINT32_MAX) throw ValidationError(where + ".value: too large");
      value.push_back(static_cast<std::uint32_t>(x));
    }
    const Subset J = subset_from_elements(elems, n);
    if (!values.emplace(J, std::move(value)).second) {
      throw ValidationError(where + ": duplicate subset " + subset_to_string(J));
    }
  }
  return SubsetFunction(n, k, static_cast<std::uint32_t>(p), m, std::move(values));
}

}  // namespace supersolve
