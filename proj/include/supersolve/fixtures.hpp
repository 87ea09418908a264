#pragma once

// Small algebras used throughout the tests and the sample data files.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "supersolve/algebra.hpp"

namespace supersolve::fixtures {

/// Group with signature (op, inverse, identity) from a multiplication rule.
/// The identity must be element 0.
inline FiniteAlgebra group_from_rule(std::string name, std::size_t order,
                                     const std::function<Element(Element, Element)>& mul,
                                     const std::array<std::string, 3>& names = {"add", "neg",
                                                                                "zero"}) {
  OperationTable op{names[0], 2, std::vector<Element>(order * order)};
  OperationTable inv{names[1], 1, std::vector<Element>(order)};
  for (Element x = 0; x < order; ++x) {
    for (Element y = 0; y < order; ++y) {
      Element product = mul(x, y);
      op.table[x * order + y] = product;
      if (product == 0) inv.table[x] = y;
    }
  }
  return FiniteAlgebra(std::move(name), order, {op, inv, OperationTable{names[2], 0, {0}}});
}

inline FiniteAlgebra cyclic_group(std::size_t n) {
  return group_from_rule("Z" + std::to_string(n), n, [n](Element x, Element y) {
    return static_cast<Element>((x + y) % n);
  });
}

// Dihedral group of order 8: r^i s^j is encoded as i + 4j.
inline FiniteAlgebra dihedral_d4() {
  return group_from_rule(
      "D4", 8,
      [](Element x, Element y) {
        const Element a = x % 4, b = x / 4, c = y % 4, d = y / 4;
        const Element rot = b == 0 ? (a + c) % 4 : (a + 4 - c) % 4;
        return static_cast<Element>(rot + 4 * ((b + d) % 2));
      },
      {"mul", "inv", "one"});
}

// Quaternion group: unit u in {1, i, j, k} (0..3) with sign bit s is u + 4s.
inline FiniteAlgebra quaternion_q8() {
  // unit_table[u][v] = {unit, negate} for u*v.
  static constexpr int unit_table[4][4][2] = {
      {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
      {{1, 0}, {0, 1}, {3, 0}, {2, 1}},
      {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
      {{3, 0}, {2, 0}, {1, 1}, {0, 1}},
  };
  return group_from_rule(
      "Q8", 8,
      [](Element x, Element y) {
        const auto& entry = unit_table[x % 4][y % 4];
        const Element sign = (x / 4 + y / 4 + static_cast<Element>(entry[1])) % 2;
        return static_cast<Element>(entry[0]) + 4 * sign;
      },
      {"mul", "inv", "one"});
}

inline FiniteAlgebra two_element_lattice() {
  return FiniteAlgebra("L2", 2,
                       {OperationTable{"meet", 2, {0, 0, 0, 1}},
                        OperationTable{"join", 2, {0, 1, 1, 1}}});
}

}  // namespace supersolve::fixtures
