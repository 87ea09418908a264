#pragma once

// Absorbing decompositions of functions A^n -> Z_p.
//
// The designated absorbing element of A is index 0 throughout. A function f is
// absorbing in I when it only depends on the coordinates in I and vanishes as
// soon as one of them is 0. Every f splits uniquely into I-absorbing components
// f_I, and adeg(f) is the largest |I| with f_I != 0.
//
// Three independent routes are provided: the subset recursion
// (component_recursive / AbsorbingDecomposer), the alternating sum
// (component_moebius), and an in-place coordinatewise transform
// (absorbing_transform) that absorbing_degree uses.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "supersolve/algebra.hpp"
#include "supersolve/arith.hpp"
#include "supersolve/error.hpp"
#include "supersolve/subset.hpp"

namespace supersolve {

// Default cap on |A|^n for tabulated functions.
inline constexpr std::size_t kDefaultTableBudget = std::size_t{1} << 20;

/// A function A^n -> Z_p stored as a row-major table.
class TabulatedFunction {
 public:
  TabulatedFunction(std::size_t domain_size, std::size_t arity, std::uint32_t prime,
                    std::vector<std::uint32_t> values,
                    std::size_t budget = kDefaultTableBudget)
      : domain_size_(domain_size), arity_(arity), prime_(prime), values_(std::move(values)) {
    if (domain_size_ < 1) throw ValidationError("domain_size: must be at least 1");
    if (!is_prime(prime_)) throw ValidationError("prime: " + std::to_string(prime_) + " is not prime");
    if (arity_ > kMaxSubsetUniverse) throw ValidationError("arity: too large");
    auto expected = detail::checked_pow(domain_size_, arity_, budget);
    if (!expected) {
      throw ValidationError("table: |A|^n exceeds the configured budget of " +
                            std::to_string(budget) + " entries");
    }
    if (values_.size() != *expected) {
      throw ValidationError("table: length " + std::to_string(values_.size()) +
                            " does not match domain_size^arity = " + std::to_string(*expected));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] >= prime_) {
        throw ValidationError("table[" + std::to_string(i) + "]: value " +
                              std::to_string(values_[i]) + " not below p = " +
                              std::to_string(prime_));
      }
    }
  }

  /// The zero function with the given shape.
  static TabulatedFunction zero(std::size_t domain_size, std::size_t arity, std::uint32_t prime) {
    auto entries = detail::checked_pow(domain_size, arity, kDefaultTableBudget);
    if (!entries) throw ValidationError("table: |A|^n exceeds the configured budget");
    return TabulatedFunction(domain_size, arity, prime, std::vector<std::uint32_t>(*entries, 0));
  }

  /// Tabulates `fn` over all of A^n in row-major order.
  template <typename Fn>
  static TabulatedFunction from(std::size_t domain_size, std::size_t arity, std::uint32_t prime,
                                Fn&& fn) {
    TabulatedFunction out = zero(domain_size, arity, prime);
    std::vector<Element> a(arity, 0);
    for (std::size_t index = 0; index < out.values_.size(); ++index) {
      out.values_[index] = static_cast<std::uint32_t>(fn(std::span<const Element>(a)) % prime);
      for (std::size_t j = arity; j-- > 0;) {
        if (++a[j] < domain_size) break;
        a[j] = 0;
      }
    }
    return out;
  }

  std::size_t domain_size() const noexcept { return domain_size_; }
  std::size_t arity() const noexcept { return arity_; }
  std::uint32_t prime() const noexcept { return prime_; }
  std::span<const std::uint32_t> values() const noexcept { return values_; }
  std::size_t table_size() const noexcept { return values_.size(); }

  std::size_t index_of(std::span<const Element> a) const {
    if (a.size() != arity_) {
      throw EvalError("argument vector of length " + std::to_string(a.size()) +
                      " for a function of arity " + std::to_string(arity_));
    }
    std::size_t index = 0;
    for (Element x : a) {
      if (x >= domain_size_) throw EvalError("argument " + std::to_string(x) + " out of range");
      index = index * domain_size_ + x;
    }
    return index;
  }

  std::uint32_t operator()(std::span<const Element> a) const { return values_[index_of(a)]; }
  std::uint32_t operator()(std::initializer_list<Element> a) const {
    return (*this)(std::span<const Element>(a.begin(), a.size()));
  }
  std::uint32_t at_index(std::size_t index) const { return values_.at(index); }

  bool is_zero() const noexcept {
    for (auto v : values_) {
      if (v != 0) return false;
    }
    return true;
  }

  bool operator==(const TabulatedFunction&) const = default;

 private:
  friend class AbsorbingDecomposer;
  friend std::vector<std::uint32_t> absorbing_transform(const TabulatedFunction& f);

  std::size_t domain_size_;
  std::size_t arity_;
  std::uint32_t prime_;
  std::vector<std::uint32_t> values_;
};

/// Copies the coordinates in J and sets all others to `zero`.
inline std::vector<Element> restrict_vector(std::span<const Element> a, Subset J, Element zero = 0) {
  std::vector<Element> out(a.size(), zero);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (J & (Subset{1} << i)) out[i] = a[i];
  }
  return out;
}

namespace detail {

// Row-major table index of the vector obtained from digits of `index` by
// zeroing every coordinate outside `keep`.
inline std::size_t restrict_index(std::size_t index, std::size_t domain_size, std::size_t arity,
                                  Subset keep) {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t j = arity; j-- > 0;) {
    const std::size_t digit = index % domain_size;
    index /= domain_size;
    if (keep & (Subset{1} << j)) out += digit * stride;
    stride *= domain_size;
  }
  return out;
}

// Coordinates (as a subset) where the vector at `index` is nonzero.
inline Subset support_of_index(std::size_t index, std::size_t domain_size, std::size_t arity) {
  Subset out = 0;
  for (std::size_t j = arity; j-- > 0;) {
    if (index % domain_size != 0) out |= Subset{1} << j;
    index /= domain_size;
  }
  return out;
}

}  // namespace detail

/// Computes components by recursion over the subset lattice:
/// f_I(a) = f(a restricted to I) - sum over proper subsets J of f_J(a).
///
/// Memoizes every component it touches. Not thread-safe; use one instance per
/// computation.
class AbsorbingDecomposer {
 public:
  explicit AbsorbingDecomposer(TabulatedFunction f) : f_(std::move(f)) {}

  const TabulatedFunction& function() const noexcept { return f_; }

  const TabulatedFunction& component(Subset I) {
    if (!is_subset(I, full_subset(f_.arity()))) {
      throw InputError("subset " + subset_to_string(I) + " is not contained in [" +
                       std::to_string(f_.arity()) + "]");
    }
    if (auto it = cache_.find(I); it != cache_.end()) return it->second;

    const std::uint32_t p = f_.prime();
    std::vector<std::uint32_t> values(f_.table_size());
    for (std::size_t index = 0; index < values.size(); ++index) {
      values[index] =
          f_.values_[detail::restrict_index(index, f_.domain_size(), f_.arity(), I)];
    }
    // Proper subsets of I, via the usual submask walk.
    if (I != 0) {
      for (Subset J = (I - 1) & I;; J = (J - 1) & I) {
        const auto& fj = component(J);
        for (std::size_t index = 0; index < values.size(); ++index) {
          values[index] = (values[index] + p - fj.values_[index]) % p;
        }
        if (J == 0) break;
      }
    }
    const std::size_t entries = values.size();
    auto [it, _] = cache_.emplace(
        I, TabulatedFunction(f_.domain_size(), f_.arity(), p, std::move(values), entries));
    return it->second;
  }

 private:
  TabulatedFunction f_;
  std::map<Subset, TabulatedFunction> cache_;
};

inline TabulatedFunction component_recursive(const TabulatedFunction& f, Subset I) {
  AbsorbingDecomposer decomposer(f);
  return decomposer.component(I);
}

/// f_I(a) as the alternating sum over J subset of I of f(a restricted to J).
inline std::uint32_t component_moebius(const TabulatedFunction& f, Subset I,
                                       std::span<const Element> a) {
  if (!is_subset(I, full_subset(f.arity()))) {
    throw InputError("subset " + subset_to_string(I) + " is not contained in [" +
                     std::to_string(f.arity()) + "]");
  }
  const std::uint32_t p = f.prime();
  const std::size_t base = f.index_of(a);
  std::uint64_t sum = 0;
  for (Subset J = I;; J = (J - 1) & I) {
    const std::uint32_t v =
        f.at_index(detail::restrict_index(base, f.domain_size(), f.arity(), J));
    const bool negative = (subset_size(I) + subset_size(J)) % 2 == 1;
    sum += negative ? (p - v) % p : v;
    if (J == 0) break;
  }
  return static_cast<std::uint32_t>(sum % p);
}

/// Table g with g(a) = f_{supp(a)}(a). Since f_I(a) = f_I(a restricted to I)
/// and vanishes unless a is nonzero on all of I, g determines every component.
/// Runs in O(n |A|^n).
inline std::vector<std::uint32_t> absorbing_transform(const TabulatedFunction& f) {
  std::vector<std::uint32_t> g = f.values_;
  const std::uint32_t p = f.prime();
  const std::size_t size = f.domain_size();
  std::size_t stride = 1;
  for (std::size_t j = f.arity(); j-- > 0;) {
    // Coordinate j has stride size^(n-1-j) in row-major order.
    const std::size_t block = stride * size;
    for (std::size_t base = 0; base < g.size(); base += block) {
      for (std::size_t digit = 1; digit < size; ++digit) {
        for (std::size_t off = 0; off < stride; ++off) {
          auto& v = g[base + digit * stride + off];
          v = (v + p - g[base + off]) % p;
        }
      }
    }
    stride = block;
  }
  return g;
}

/// Extracts the component f_I from an absorbing transform.
inline TabulatedFunction component_from_transform(const TabulatedFunction& f,
                                                  std::span<const std::uint32_t> transform,
                                                  Subset I) {
  const std::size_t size = f.domain_size(), n = f.arity();
  return TabulatedFunction::from(size, n, f.prime(), [&](std::span<const Element> a) {
    Subset support = 0;
    std::size_t index = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Element x = (I & (Subset{1} << j)) ? a[j] : 0;
      if (x != 0) support |= Subset{1} << j;
      index = index * size + x;
    }
    return support == I ? transform[index] : 0u;
  });
}

/// max({-1} or |J| with f_J nonzero).
inline int absorbing_degree(const TabulatedFunction& f) {
  const auto g = absorbing_transform(f);
  int degree = -1;
  for (std::size_t index = 0; index < g.size(); ++index) {
    if (g[index] != 0) {
      degree = std::max(degree, static_cast<int>(subset_size(
                                    detail::support_of_index(index, f.domain_size(), f.arity()))));
    }
  }
  return degree;
}

/// True iff f depends only on the coordinates in I and vanishes whenever some
/// coordinate in I is 0.
inline bool is_absorbing_in(const TabulatedFunction& f, Subset I) {
  if (!is_subset(I, full_subset(f.arity()))) return false;
  for (std::size_t index = 0; index < f.table_size(); ++index) {
    const std::uint32_t v = f.at_index(index);
    if (v != f.at_index(detail::restrict_index(index, f.domain_size(), f.arity(), I))) return false;
    const Subset support = detail::support_of_index(index, f.domain_size(), f.arity());
    if (v != 0 && !is_subset(I, support)) return false;
  }
  return true;
}

struct AbsorbingDecomposition {
  std::map<Subset, TabulatedFunction> components;

  int degree() const {
    int d = -1;
    for (const auto& [I, fi] : components) {
      if (!fi.is_zero()) d = std::max(d, static_cast<int>(subset_size(I)));
    }
    return d;
  }
};

/// All 2^n components via the subset recursion.
inline AbsorbingDecomposition decompose(const TabulatedFunction& f) {
  AbsorbingDecomposer decomposer(f);
  AbsorbingDecomposition out;
  const Subset full = full_subset(f.arity());
  for (std::uint64_t I = 0; I <= full; ++I) {
    out.components.emplace(static_cast<Subset>(I), decomposer.component(static_cast<Subset>(I)));
  }
  return out;
}

// JSON ----------------------------------------------------------------------

inline nlohmann::json function_to_json(const TabulatedFunction& f) {
  return {{"domain_size", f.domain_size()},
          {"arity", f.arity()},
          {"prime", f.prime()},
          {"table", std::vector<std::uint32_t>(f.values().begin(), f.values().end())}};
}

inline TabulatedFunction function_from_json(const nlohmann::json& doc,
                                            const std::string& where = "function") {
  if (!doc.is_object()) throw ValidationError(where + ": expected a JSON object");
  const std::size_t size =
      detail::json_uint(detail::json_field(doc, "domain_size", where), where + ".domain_size");
  const std::size_t arity =
      detail::json_uint(detail::json_field(doc, "arity", where), where + ".arity");
  const std::size_t prime =
      detail::json_uint(detail::json_field(doc, "prime", where), where + ".prime");
  if (prime > UINT32_MAX) throw ValidationError(where + ".prime: too large");
  const auto& table = detail::json_field(doc, "table", where);
  if (!table.is_array()) throw ValidationError(where + ".table: expected an array");
  std::vector<std::uint32_t> values;
  values.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::size_t v =
        detail::json_uint(table[i], where + ".table[" + std::to_string(i) + "]");
    if (v > UINT32_MAX) throw ValidationError(where + ".table: value too large");
    values.push_back(static_cast<std::uint32_t>(v));
  }
  return TabulatedFunction(size, arity, static_cast<std::uint32_t>(prime), std::move(values));
}

/// Debug dump: subset bitmask (decimal string) -> component table.
inline nlohmann::json decomposition_to_json(const TabulatedFunction& f,
                                            const AbsorbingDecomposition& d) {
  nlohmann::json components = nlohmann::json::object();
  for (const auto& [I, fi] : d.components) {
    components[std::to_string(I)] =
        std::vector<std::uint32_t>(fi.values().begin(), fi.values().end());
  }
  return {{"function", function_to_json(f)},
          {"absorbing_degree", d.degree()},
          {"components", std::move(components)}};
}

}  // namespace supersolve
