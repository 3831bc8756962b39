#include "rigidity/int.hpp"

#include <string>

namespace rigidity {

void overflow(const char* op) { throw std::overflow_error(std::string("integer overflow in ") + op); }

Int floor_div(Int a, Int b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int mod_pos(Int a, Int b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int r = a % b;
  if (r < 0) r += abs_int(b);
  return r;
}

std::optional<Int> exact_div(Int a, Int b) {
  if (b == 0) {
    if (a == 0) return Int{0};
    return std::nullopt;
  }
  if (a % b != 0) return std::nullopt;
  return a / b;
}

}  // namespace rigidity
