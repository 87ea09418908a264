#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "supersolve/error.hpp"

namespace supersolve {

inline bool is_prime(std::uint64_t p) noexcept {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

class OverflowError : public InputError {
 public:
  using InputError::InputError;
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw OverflowError(std::string(what) + ": result exceeds 64 bits");
  }
  return a * b;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    throw OverflowError(std::string(what) + ": result exceeds 64 bits");
  }
  return a + b;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, const char* what) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) result = checked_mul(result, base, what);
  return result;
}

// a * b, clamped to the largest uint64 value.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

}  // namespace supersolve
