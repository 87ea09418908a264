#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "supersolve/error.hpp"

namespace supersolve {

// Subset of [n] = {1..n}; coordinate i is bit i-1.
using Subset = std::uint32_t;

inline constexpr std::size_t kMaxSubsetUniverse = 30;

inline std::size_t subset_size(Subset s) noexcept { return static_cast<std::size_t>(std::popcount(s)); }

inline Subset full_subset(std::size_t n) {
  if (n > kMaxSubsetUniverse) {
    throw InputError("subset universe of size " + std::to_string(n) + " is not supported");
  }
  return n == 0 ? 0 : static_cast<Subset>((std::uint64_t{1} << n) - 1);
}

inline bool is_subset(Subset inner, Subset outer) noexcept { return (inner & ~outer) == 0; }

/// All subsets of [n] with at most `max_size` elements, ordered by size and
/// then by bitmask value. This is the canonical search order for witnesses.
inline std::vector<Subset> subsets_by_size(std::size_t n, std::size_t max_size) {
  const std::uint64_t full = full_subset(n);
  std::vector<Subset> out;
  out.push_back(0);
  for (std::size_t size = 1; size <= std::min(n, max_size); ++size) {
    // Gosper's hack walks the size-element masks in increasing order.
    std::uint64_t s = (std::uint64_t{1} << size) - 1;
    while (s <= full) {
      out.push_back(static_cast<Subset>(s));
      const std::uint64_t low = s & (~s + 1);
      const std::uint64_t ripple = s + low;
      s = (((ripple ^ s) >> 2) / low) | ripple;
    }
  }
  return out;
}

/// 1-based coordinate list, e.g. 0b101 -> {1, 3}.
inline std::vector<std::size_t> subset_elements(Subset s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s != 0; ++i, s >>= 1) {
    if (s & 1u) out.push_back(i + 1);
  }
  return out;
}

inline Subset subset_from_elements(const std::vector<std::size_t>& elems, std::size_t n) {
  Subset s = 0;
  for (std::size_t e : elems) {
    if (e < 1 || e > n) {
      throw InputError("subset element " + std::to_string(e) + " outside [1, " +
                       std::to_string(n) + "]");
    }
    s |= Subset{1} << (e - 1);
  }
  return s;
}

inline std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t e : subset_elements(s)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

}  // namespace supersolve
