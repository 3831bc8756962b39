#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace rigidity {

// Degrees, witnesses and transfer values. Arithmetic is overflow-checked; an
// overflow throws instead of wrapping.
using Int = std::int64_t;
using PointId = std::size_t;

[[noreturn]] void overflow(const char* op);

inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) overflow("addition");
  return r;
}

inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) overflow("subtraction");
  return r;
}

inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) overflow("multiplication");
  return r;
}

inline Int neg(Int a) { return sub(0, a); }

inline Int abs_int(Int a) { return a < 0 ? neg(a) : a; }

inline Int gcd_int(Int a, Int b) { return std::gcd(abs_int(a), abs_int(b)); }

// Floor division and nonnegative remainder.
Int floor_div(Int a, Int b);
Int mod_pos(Int a, Int b);

// a / b when b divides a; nullopt otherwise (b == 0 divides only 0, giving 0).
std::optional<Int> exact_div(Int a, Int b);

}  // namespace rigidity
