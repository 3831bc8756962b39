#pragma once

#include <optional>
#include <vector>

#include "rigidity/dr.hpp"

namespace rigidity {

// Transfer function on the points of a system; set exactly on dom(sigma).
using Transfer = std::vector<std::optional<Int>>;

// (h, l, k, l', k'): tau^l(x)(h(x)) = tau^k(x)(h(sigma(x))) on dom(sigma) and
// sigma^l'(y)(h^-1(y)) = sigma^k'(y)(h^-1(tau(y))) on dom(tau).
struct COEData {
  std::vector<PointId> h;
  Transfer l, k;
  Transfer lp, kp;

  std::vector<PointId> h_inverse() const;
  // (h^-1, l', k', l, k), an orbit equivalence from T to S.
  COEData reversed() const;
  bool operator==(const COEData&) const = default;
};

// sum_{i<m} f(sigma^i(x)); throws std::domain_error if x is not in dom(sigma^m).
Int iterate_sum(const DRSystem& s, const Transfer& f, Int m, PointId x);

Certificate verify_coe(const DRSystem& S, const DRSystem& T, const COEData& d);
// With `essential`, the same check runs on the separately computed essential stabilisers.
Certificate preserves_stab(const DRSystem& S, const DRSystem& T, const COEData& d, bool essential = false);

// l_m(x) - k_m(x) - l_n(x') + k_n(x') for the minimal witness (m, n) of a.
Int cocycle_value(const DRSystem& S, const COEData& d, const Arrow& a);
Int cocycle_value_at(const DRSystem& S, const COEData& d, const Arrow& a, Witness w);

struct CocycleResult {
  Grading grading;
  // Witness independence (minimal vs shifted witnesses) and the cocycle identity.
  Certificate certificate;
};
CocycleResult cocycle_of(DRSystemPtr S, const COEData& d, Int bound);

// Theta(x, m-n, x') = (h(x), c(x, m-n, x'), h(x')). The inverse rule solves for
// a preimage exactly on the coset of Stab(h^-1(y)) and returns nullopt when
// there is none.
ArrowMap theta(DRSystemPtr S, DRSystemPtr T, const COEData& d);

struct PiX {
  PointId representative = 0;
  Int generator = 0;  // 0: trivial stabiliser
  Int image = 0;
};
struct PiResult {
  std::vector<PiX> orbits;
  Certificate certificate;  // constancy along each orbit
};
PiResult pi_x(const DRSystem& S, const COEData& d);

// Recovers (h, l, k, l', k') from an isomorphism m: G(X) -> G(Y). Throws
// std::invalid_argument if m does not pass verify_iso at `bound`.
COEData extract_coe(DRSystemPtr S, DRSystemPtr T, const ArrowMap& m, Int bound);

bool is_eventual_conjugacy(const DRSystem& S, const DRSystem& T, const COEData& d);

enum class Require { None, Stab, Eventual };

// Exhaustive over bijections h (lexicographic) and transfer values <= value_bound
// (default 2|X||Y|); returns the least witness in the order
// (h, (l(x), k(x)) for x in dom sigma, (l'(y), k'(y)) for y in dom tau).
std::optional<COEData> search_coe(const DRSystem& S, const DRSystem& T, std::optional<Int> value_bound,
                                  Require require);

// As search_coe, for one fixed bijection h.
std::optional<COEData> search_coe_for(const DRSystem& S, const DRSystem& T, const std::vector<PointId>& h,
                                      Int value_bound, Require require);

json coe_json(const DRSystem& S, const DRSystem& T, const COEData& d);

}  // namespace rigidity
