#pragma once

// Ternary clone closure and Mal'cev term discovery.
//
// The closure is built breadth-first over function tables (not terms): start
// from the projections (plus all constants for polynomial operations, plus the
// algebra's nullary operations) and apply every fundamental operation
// pointwise. Each table keeps the derivation that first produced it, so the
// witness term attached to a table is minimal in BFS layers.

#include <cstdint>
#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "supersolve/algebra.hpp"
#include "supersolve/term.hpp"

namespace supersolve {

inline constexpr std::size_t kDefaultCloneCap = 1'000'000;

struct TernaryFunctionTable {
  std::size_t size = 0;
  std::vector<Element> table;  // row-major, length size^3
  Term witness;                // over x1, x2, x3
};

/// d(x,y,y) = x and d(x,x,y) = y for all x, y.
inline bool is_malcev(std::size_t size, std::span<const Element> table) {
  if (table.size() != size * size * size) return false;
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return table[(x * size + y) * size + z]; };
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t y = 0; y < size; ++y) {
      if (at(x, y, y) != x || at(x, x, y) != y) return false;
    }
  }
  return true;
}

inline bool is_malcev(const TernaryFunctionTable& t) { return is_malcev(t.size, t.table); }

/// Tabulates a term over x1, x2, x3 (any other variable is an error).
inline std::vector<Element> ternary_table(const FiniteAlgebra& alg, const Term& t) {
  if (max_variable(t) > 3) throw EvalError("ternary term uses a variable beyond x3");
  const std::size_t size = alg.size();
  std::vector<Element> out(size * size * size);
  for (Element x = 0; x < size; ++x) {
    for (Element y = 0; y < size; ++y) {
      for (Element z = 0; z < size; ++z) {
        const Element a[3] = {x, y, z};
        out[(x * size + y) * size + z] = eval_term(alg, t, a);
      }
    }
  }
  return out;
}

/// The (possibly truncated) ternary clone of an algebra.
class TermClone {
 public:
  std::size_t size() const noexcept { return derivations_.size(); }
  std::size_t carrier_size() const noexcept { return carrier_; }
  bool complete() const noexcept { return complete_; }
  std::size_t layers() const noexcept { return layers_; }

  std::span<const Element> table(std::size_t i) const {
    return std::span<const Element>(data_).subspan(i * points_, points_);
  }

  Term witness(std::size_t i) const {
    const auto& d = derivations_.at(i);
    switch (d.kind) {
      case Derivation::Kind::projection:
        return Term::var(d.value + 1);
      case Derivation::Kind::constant:
        return Term::constant(d.value);
      case Derivation::Kind::apply: {
        std::vector<Term> children;
        children.reserve(d.children.size());
        for (std::size_t c : d.children) children.push_back(witness(c));
        return Term::apply(op_names_[d.value], std::move(children));
      }
    }
    return {};
  }

  TernaryFunctionTable function(std::size_t i) const {
    auto t = table(i);
    return {carrier_, std::vector<Element>(t.begin(), t.end()), witness(i)};
  }

  std::optional<std::size_t> find(std::span<const Element> table) const {
    for (std::size_t i = 0; i < size(); ++i) {
      auto t = this->table(i);
      if (std::equal(t.begin(), t.end(), table.begin(), table.end())) return i;
    }
    return std::nullopt;
  }

  bool contains(std::span<const Element> table) const { return find(table).has_value(); }

 private:
  friend class CloneBuilder;

  struct Derivation {
    enum class Kind { projection, constant, apply };
    Kind kind;
    std::size_t value;  // coordinate, element, or operation index
    std::vector<std::size_t> children;
  };

  std::size_t carrier_ = 0;
  std::size_t points_ = 0;
  std::vector<Element> data_;
  std::vector<Derivation> derivations_;
  std::vector<std::string> op_names_;
  bool complete_ = false;
  std::size_t layers_ = 0;
};

/// Breadth-first clone closure. `stop` is consulted for every new table and
/// ends the search early when it returns true.
class CloneBuilder {
 public:
  using StopPredicate = std::function<bool(std::span<const Element>)>;

  CloneBuilder(const FiniteAlgebra& alg, bool include_constants, std::size_t cap)
      : alg_(alg), include_constants_(include_constants), cap_(cap) {
    if (cap_ < 3) throw InputError("clone cap must be at least 3");
    const std::size_t n = alg.size();
    if (n > 256) throw InputError("clone closure supports carriers of size at most 256");
    clone_.carrier_ = n;
    clone_.points_ = n * n * n;
    for (const auto& op : alg.operations()) clone_.op_names_.push_back(op.name);
  }

  // seen_ refers to clone_ by address.
  CloneBuilder(const CloneBuilder&) = delete;
  CloneBuilder& operator=(const CloneBuilder&) = delete;

  /// Runs the closure. Returns the index of the table that triggered `stop`,
  /// if any.
  std::optional<std::size_t> run(const StopPredicate& stop = {}) {
    const std::size_t n = clone_.carrier_, points = clone_.points_;
    std::vector<Element> scratch(points);
    using Kind = TermClone::Derivation::Kind;

    // Layer 0: projections, constants, nullary operations.
    for (std::size_t coord = 0; coord < 3; ++coord) {
      for (std::size_t p = 0; p < points; ++p) {
        const std::size_t digits[3] = {p / (n * n), (p / n) % n, p % n};
        scratch[p] = static_cast<Element>(digits[coord]);
      }
      if (auto hit = offer(scratch, {Kind::projection, coord, {}}, stop)) return hit;
      if (truncated_) return std::nullopt;
    }
    if (include_constants_) {
      for (std::size_t c = 0; c < n; ++c) {
        std::fill(scratch.begin(), scratch.end(), static_cast<Element>(c));
        if (auto hit = offer(scratch, {Kind::constant, c, {}}, stop)) return hit;
        if (truncated_) return std::nullopt;
      }
    }
    for (std::size_t op = 0; op < alg_.operations().size(); ++op) {
      if (alg_.operations()[op].arity != 0) continue;
      std::fill(scratch.begin(), scratch.end(), alg_.operations()[op].table[0]);
      if (auto hit = offer(scratch, {Kind::apply, op, {}}, stop)) return hit;
      if (truncated_) return std::nullopt;
    }

    std::size_t frontier_begin = 0;
    std::size_t layer_end = clone_.size();
    clone_.layers_ = 1;
    std::vector<Element> args;
    while (true) {
      for (std::size_t op = 0; op < alg_.operations().size(); ++op) {
        const std::size_t r = alg_.operations()[op].arity;
        if (r == 0) continue;
        args.resize(r);
        // Tuples with at least one frontier entry: the first frontier entry
        // sits at `lead`; earlier slots are old, later slots are unrestricted.
        for (std::size_t lead = 0; lead < r; ++lead) {
          if (lead > 0 && frontier_begin == 0) break;
          std::vector<std::size_t> tuple(r, 0);
          tuple[lead] = frontier_begin;
          auto low = [&](std::size_t slot) { return slot == lead ? frontier_begin : 0; };
          auto high = [&](std::size_t slot) { return slot < lead ? frontier_begin : layer_end; };
          bool done = false;
          while (!done) {
            for (std::size_t p = 0; p < points; ++p) {
              for (std::size_t j = 0; j < r; ++j) args[j] = clone_.data_[tuple[j] * points + p];
              scratch[p] = alg_.apply_unchecked(op, args);
            }
            if (auto hit = offer(scratch, {Kind::apply, op, tuple}, stop)) return hit;
            if (truncated_) return std::nullopt;
            // Odometer, last slot fastest.
            std::size_t j = r;
            while (true) {
              if (j == 0) {
                done = true;
                break;
              }
              --j;
              if (++tuple[j] < high(j)) break;
              tuple[j] = low(j);
            }
          }
        }
      }
      if (clone_.size() == layer_end) {
        clone_.complete_ = true;
        return std::nullopt;
      }
      frontier_begin = layer_end;
      layer_end = clone_.size();
      ++clone_.layers_;
    }
  }

  TermClone take() && { return std::move(clone_); }

 private:
  struct TableHash {
    const TermClone* clone;
    std::size_t operator()(std::size_t i) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (Element e : clone->table(i)) h = (h ^ e) * 1099511628211ull;
      return h;
    }
  };
  struct TableEq {
    const TermClone* clone;
    bool operator()(std::size_t a, std::size_t b) const noexcept {
      auto x = clone->table(a), y = clone->table(b);
      return std::equal(x.begin(), x.end(), y.begin());
    }
  };

  std::optional<std::size_t> offer(const std::vector<Element>& table,
                                   TermClone::Derivation derivation, const StopPredicate& stop) {
    // Tentatively append, then look the new slot up by content.
    const std::size_t candidate = clone_.derivations_.size();
    clone_.data_.insert(clone_.data_.end(), table.begin(), table.end());
    if (seen_.find(candidate) != seen_.end()) {
      clone_.data_.resize(candidate * clone_.points_);
      return std::nullopt;
    }
    if (candidate >= cap_) {
      clone_.data_.resize(candidate * clone_.points_);
      truncated_ = true;
      return std::nullopt;
    }
    clone_.derivations_.push_back(std::move(derivation));
    seen_.insert(candidate);
    if (stop && stop(clone_.table(candidate))) return candidate;
    return std::nullopt;
  }

  const FiniteAlgebra& alg_;
  bool include_constants_;
  std::size_t cap_;
  TermClone clone_;
  std::unordered_set<std::size_t, TableHash, TableEq> seen_{16, TableHash{&clone_}, TableEq{&clone_}};
  bool truncated_ = false;
};

inline TermClone ternary_term_clone(const FiniteAlgebra& alg, bool include_constants = false,
                                    std::size_t cap = kDefaultCloneCap) {
  CloneBuilder builder(alg, include_constants, cap);
  builder.run();
  return std::move(builder).take();
}

struct MalcevNotFound {
  // True when the closure was exhausted, which proves no Mal'cev operation
  // exists; false when the cap was hit first.
  bool complete = false;
  std::size_t explored = 0;
};

using MalcevResult = std::variant<TernaryFunctionTable, MalcevNotFound>;

/// First Mal'cev table in BFS order, with its witness term.
inline MalcevResult find_malcev(const FiniteAlgebra& alg, bool include_constants = false,
                                std::size_t cap = kDefaultCloneCap) {
  CloneBuilder builder(alg, include_constants, cap);
  const std::size_t size = alg.size();
  auto hit = builder.run([size](std::span<const Element> t) { return is_malcev(size, t); });
  TermClone clone = std::move(builder).take();
  if (hit) return clone.function(*hit);
  return MalcevNotFound{clone.complete(), clone.size()};
}

}  // namespace supersolve
