#pragma once

#include <optional>
#include <set>
#include <vector>

#include "rigidity/dr.hpp"

namespace rigidity {

struct KakutaniResult {
  bool equivalent = false;
  std::set<PointId> u1, u2;
  // Unit bijection U1 -> U2 of the witness, sorted by the U1 point.
  std::vector<std::pair<PointId, PointId>> unit_map;
  // Isomorphism U1 G1 U1 -> U2 G2 U2 with exact inverse; set when equivalent.
  std::optional<ArrowMap> kappa;
  Certificate certificate;
};

// Decides whether the restrictions of G(S1) to U1 and of G(S2) to U2 are
// isomorphic (preserving c_X when graded). Non-full subsets fail the
// corresponding sub-check. The witness is checked with verify_iso at `bound`.
KakutaniResult kakutani(DRSystemPtr s1, std::set<PointId> u1, DRSystemPtr s2, std::set<PointId> u2, bool graded,
                        Int bound = 6);

// One point per orbit (the least point on the eventual cycle, else the least
// point); this subset is full.
std::set<PointId> orbit_representatives(const DRSystem& s);

// Groupoid equivalence of G(S1) and G(S2) via kakutani on orbit representatives.
KakutaniResult equiv_decide(DRSystemPtr s1, DRSystemPtr s2, bool graded, Int bound = 6);

json kakutani_json(const DRSystem& s1, const DRSystem& s2, const KakutaniResult& r);

}  // namespace rigidity
