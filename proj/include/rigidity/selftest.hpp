#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rigidity/certificate.hpp"

namespace rigidity {

struct SelfCheck {
  std::string name;
  bool pass = false;
  json detail = nullptr;
};

struct SelftestReport {
  std::vector<SelfCheck> checks;
  bool pass() const;
  json to_json() const;
};

// Known small cases across all modules, each recomputed and compared with its
// expected value. Randomised checks draw from `seed`.
SelftestReport run_selftest(std::uint64_t seed = 20240611);

}  // namespace rigidity
