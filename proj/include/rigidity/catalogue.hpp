#pragma once

#include <string>
#include <vector>

#include "rigidity/dr.hpp"

namespace rigidity {

// Points named "0".."n-1"; sigma given as targets (nullopt = outside the domain).
DRSystemPtr make_system(const std::vector<std::optional<PointId>>& sigma);
DRSystemPtr make_permutation(const std::vector<PointId>& perm);
// Disjoint cycles of the given lengths, numbered consecutively.
DRSystemPtr cycles(const std::vector<std::size_t>& lengths);
DRSystemPtr cycle(std::size_t n);

DRSystemPtr three_cycle();
DRSystemPtr reverse_three_cycle();
DRSystemPtr funnel();
DRSystemPtr six_cycle();
DRSystemPtr partial_system();
DRSystemPtr two_orbit_system();

struct NamedSystem {
  std::string name;
  DRSystemPtr system;
};

// The six built-in systems, in a fixed order.
std::vector<NamedSystem> builtin_systems();
DRSystemPtr builtin_system(const std::string& name);

// All permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<PointId>> all_permutations(std::size_t n);
// All partitions of n into parts, largest part first.
std::vector<std::vector<std::size_t>> partitions(std::size_t n);

}  // namespace rigidity
