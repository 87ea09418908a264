#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "supersolve/error.hpp"

namespace supersolve {

// Elements of a finite algebra are the dense indices 0..size-1.
using Element = std::uint32_t;

// Largest table we are willing to materialize for a single operation.
inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

namespace detail {

// size^exp, or nullopt once the result exceeds `limit`.
inline std::optional<std::size_t> checked_pow(std::size_t base, std::size_t exp,
                                              std::size_t limit = kMaxTableEntries) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
  }
  if (result > limit) return std::nullopt;
  return result;
}

}  // namespace detail

struct OperationTable {
  std::string name;
  std::size_t arity = 0;
  // Row-major: args (a_1..a_r) live at sum a_i * size^(r-i).
  std::vector<Element> table;

  bool operator==(const OperationTable&) const = default;
};

/// A finite algebra given by operation tables over {0, ..., size-1}.
///
/// Construction validates every invariant; an instance is immutable afterwards
/// and can be shared freely between threads.
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, std::size_t size, std::vector<OperationTable> operations)
      : name_(std::move(name)), size_(size), operations_(std::move(operations)) {
    validate();
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const OperationTable> operations() const noexcept { return operations_; }

  std::optional<std::size_t> find(std::string_view op) const {
    for (std::size_t i = 0; i < operations_.size(); ++i) {
      if (operations_[i].name == op) return i;
    }
    return std::nullopt;
  }

  /// Table lookup without range checks; callers guarantee arity and ranges.
  Element apply_unchecked(std::size_t op_index, std::span<const Element> args) const noexcept {
    std::size_t index = 0;
    for (Element a : args) index = index * size_ + a;
    return operations_[op_index].table[index];
  }

  Element apply(std::size_t op_index, std::span<const Element> args) const {
    if (op_index >= operations_.size()) {
      throw EvalError("operation index " + std::to_string(op_index) + " out of range");
    }
    const auto& op = operations_[op_index];
    if (args.size() != op.arity) {
      throw EvalError("operation '" + op.name + "' expects " + std::to_string(op.arity) +
                      " arguments, got " + std::to_string(args.size()));
    }
    for (Element a : args) {
      if (a >= size_) {
        throw EvalError("argument " + std::to_string(a) + " to '" + op.name +
                        "' is outside the carrier of size " + std::to_string(size_));
      }
    }
    return apply_unchecked(op_index, args);
  }

  Element apply(std::string_view op, std::span<const Element> args) const {
    auto index = find(op);
    if (!index) throw EvalError("unknown operation '" + std::string(op) + "'");
    return apply(*index, args);
  }

  Element apply(std::string_view op, std::initializer_list<Element> args) const {
    return apply(op, std::span<const Element>(args.begin(), args.size()));
  }

  bool operator==(const FiniteAlgebra&) const = default;

 private:
  void validate() const {
    if (size_ < 1) throw ValidationError("size: must be at least 1");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < operations_.size(); ++i) {
      const auto& op = operations_[i];
      const std::string where = "operations[" + std::to_string(i) + "]";
      if (op.name.empty()) throw ValidationError(where + ".name: empty operation name");
      if (!seen.insert(op.name).second) {
        throw ValidationError(where + ".name: duplicate operation name '" + op.name + "'");
      }
      auto expected = detail::checked_pow(size_, op.arity);
      if (!expected) {
        throw ValidationError(where + ": table for arity " + std::to_string(op.arity) +
                              " exceeds the supported size");
      }
      if (op.table.size() != *expected) {
        throw ValidationError(where + ".table: table length " + std::to_string(op.table.size()) +
                              " does not match size^arity = " + std::to_string(*expected));
      }
      for (std::size_t j = 0; j < op.table.size(); ++j) {
        if (op.table[j] >= size_) {
          throw ValidationError(where + ".table[" + std::to_string(j) + "]: entry out of range (" +
                                std::to_string(op.table[j]) + " >= " + std::to_string(size_) +
                                ")");
        }
      }
    }
  }

  std::string name_;
  std::size_t size_;
  std::vector<OperationTable> operations_;
};

inline Element apply_op(const FiniteAlgebra& alg, std::string_view op,
                        std::span<const Element> args) {
  return alg.apply(op, args);
}

// Maximal arity of the fundamental operations; 0 for an algebra without operations.
inline std::size_t max_arity(const FiniteAlgebra& alg) {
  std::size_t mu = 0;
  for (const auto& op : alg.operations()) mu = std::max(mu, op.arity);
  return mu;
}

inline bool same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.operations().size() != b.operations().size()) return false;
  for (std::size_t i = 0; i < a.operations().size(); ++i) {
    if (a.operations()[i].name != b.operations()[i].name ||
        a.operations()[i].arity != b.operations()[i].arity) {
      return false;
    }
  }
  return true;
}

/// Coordinatewise product; the pair (x, y) is encoded as x * b.size() + y.
inline FiniteAlgebra direct_product(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (!same_signature(a, b)) {
    throw ValidationError("direct product: signatures of '" + a.name() + "' and '" + b.name() +
                          "' differ");
  }
  const std::size_t size = a.size() * b.size();
  std::vector<OperationTable> ops;
  ops.reserve(a.operations().size());
  for (std::size_t i = 0; i < a.operations().size(); ++i) {
    const auto& op = a.operations()[i];
    auto entries = detail::checked_pow(size, op.arity);
    if (!entries) throw ValidationError("direct product: table for '" + op.name + "' too large");
    OperationTable out{op.name, op.arity, std::vector<Element>(*entries)};
    std::vector<Element> args(op.arity), left(op.arity), right(op.arity);
    for (std::size_t index = 0; index < *entries; ++index) {
      std::size_t rest = index;
      for (std::size_t j = op.arity; j-- > 0;) {
        args[j] = static_cast<Element>(rest % size);
        rest /= size;
        left[j] = static_cast<Element>(args[j] / b.size());
        right[j] = static_cast<Element>(args[j] % b.size());
      }
      out.table[index] = static_cast<Element>(a.apply_unchecked(i, left) * b.size() +
                                              b.apply_unchecked(i, right));
    }
    ops.push_back(std::move(out));
  }
  return FiniteAlgebra(a.name() + "x" + b.name(), size, std::move(ops));
}

// JSON algebra files --------------------------------------------------------

inline nlohmann::json algebra_to_json(const FiniteAlgebra& alg) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : alg.operations()) {
    ops.push_back({{"name", op.name}, {"arity", op.arity}, {"table", op.table}});
  }
  return {{"name", alg.name()}, {"size", alg.size()}, {"operations", std::move(ops)}};
}

/// Canonical text form, accepted by load_algebra.
inline std::string render_algebra(const FiniteAlgebra& alg) {
  return algebra_to_json(alg).dump(2) + "\n";
}

namespace detail {

inline std::size_t json_uint(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw ValidationError(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline const nlohmann::json& json_field(const nlohmann::json& obj, const char* key,
                                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return *it;
}

// Converts a byte offset into a 1-based line/column pair.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed JSON: " + std::string(e.what()), line, column);
  }
}

}  // namespace detail

inline FiniteAlgebra algebra_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("algebra: expected a JSON object");
  const auto& name = detail::json_field(doc, "name", "algebra");
  if (!name.is_string()) throw ValidationError("name: expected a string");
  const std::size_t size = detail::json_uint(detail::json_field(doc, "size", "algebra"), "size");
  const auto& ops_json = detail::json_field(doc, "operations", "algebra");
  if (!ops_json.is_array()) throw ValidationError("operations: expected an array");

  std::vector<OperationTable> ops;
  for (std::size_t i = 0; i < ops_json.size(); ++i) {
    const std::string where = "operations[" + std::to_string(i) + "]";
    const auto& op = ops_json[i];
    if (!op.is_object()) throw ValidationError(where + ": expected an object");
    const auto& op_name = detail::json_field(op, "name", where);
    if (!op_name.is_string()) throw ValidationError(where + ".name: expected a string");
    OperationTable table{op_name.get<std::string>(),
                         detail::json_uint(detail::json_field(op, "arity", where), where + ".arity"),
                         {}};
    const auto& entries = detail::json_field(op, "table", where);
    if (!entries.is_array()) throw ValidationError(where + ".table: expected an array");
    table.table.reserve(entries.size());
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const std::string at = where + ".table[" + std::to_string(j) + "]";
      std::size_t value = detail::json_uint(entries[j], at);
      if (value >= size) {
        throw ValidationError(at + ": entry out of range (" + std::to_string(value) +
                              " >= " + std::to_string(size) + ")");
      }
      table.table.push_back(static_cast<Element>(value));
    }
    ops.push_back(std::move(table));
  }
  return FiniteAlgebra(name.get<std::string>(), size, std::move(ops));
}

/// Parses and validates an algebra file.
inline FiniteAlgebra load_algebra(std::string_view text) {
  return algebra_from_json(detail::parse_json(text));
}

}  // namespace supersolve
