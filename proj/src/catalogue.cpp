#include "rigidity/catalogue.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rigidity {

DRSystemPtr make_system(const std::vector<std::optional<PointId>>& sigma) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sigma.size(); ++i) names.push_back(std::to_string(i));
  return std::make_shared<DRSystem>(std::move(names), sigma);
}

DRSystemPtr make_permutation(const std::vector<PointId>& perm) {
  return make_system(std::vector<std::optional<PointId>>(perm.begin(), perm.end()));
}

DRSystemPtr cycles(const std::vector<std::size_t>& lengths) {
  std::vector<PointId> perm;
  PointId start = 0;
  for (std::size_t len : lengths) {
    for (std::size_t i = 0; i < len; ++i) perm.push_back(start + (i + 1) % len);
    start += len;
  }
  return make_permutation(perm);
}

DRSystemPtr cycle(std::size_t n) { return cycles({n}); }

DRSystemPtr three_cycle() { return cycle(3); }

DRSystemPtr reverse_three_cycle() { return make_permutation({2, 0, 1}); }

DRSystemPtr funnel() {
  return std::make_shared<DRSystem>(std::vector<std::string>{"a", "b", "c"},
                                    std::vector<std::optional<PointId>>{2, 2, 2});
}

DRSystemPtr six_cycle() { return cycle(6); }

DRSystemPtr partial_system() { return make_system({1, std::nullopt}); }

DRSystemPtr two_orbit_system() { return cycles({2, 2}); }

std::vector<NamedSystem> builtin_systems() {
  return {{"three-cycle", three_cycle()}, {"reverse-three-cycle", reverse_three_cycle()},
          {"funnel", funnel()},           {"six-cycle", six_cycle()},
          {"partial", partial_system()},  {"two-orbit", two_orbit_system()}};
}

DRSystemPtr builtin_system(const std::string& name) {
  for (auto& s : builtin_systems())
    if (s.name == name) return s.system;
  throw std::invalid_argument("unknown built-in system: " + name);
}

std::vector<std::vector<PointId>> all_permutations(std::size_t n) {
  std::vector<PointId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<PointId>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace {
void partitions_rec(std::size_t n, std::size_t max_part, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = std::min(n, max_part); k >= 1; --k) {
    cur.push_back(k);
    partitions_rec(n - k, k, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<std::vector<std::size_t>> partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

}  // namespace rigidity
