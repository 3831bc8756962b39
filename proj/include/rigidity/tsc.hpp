#pragma once

#include <vector>

#include "rigidity/coe.hpp"

namespace rigidity {

// (f, f', a, a', k, k') with
//   sigma^a(x)(f'(f(x))) = sigma^a(x)(x),  tau^k(x)(f(sigma(x))) = tau^(k(x)+1)(f(x)),
//   tau^a'(y)(f(f'(y))) = tau^a'(y)(y),    sigma^k'(y)(f'(tau(y))) = sigma^(k'(y)+1)(f'(y)).
struct TSCData {
  std::vector<PointId> f;
  std::vector<PointId> fp;
  std::vector<Int> a;
  std::vector<Int> ap;
  Transfer k;
  Transfer kp;
};

Certificate verify_tsc(const DRSystem& S, const DRSystem& T, const TSCData& d);

// A point of the natural extension whose backward orbit is eventually
// periodic: ... c, c, p with c = back_cycle repeated and p = back_path; the
// last entry is coordinate 0 and later coordinates are forward iterates.
struct NatExtPoint {
  std::vector<PointId> back_cycle;
  std::vector<PointId> back_path;
  std::size_t size() const { return back_cycle.size() + back_path.size(); }
  bool operator==(const NatExtPoint&) const = default;
  auto operator<=>(const NatExtPoint&) const = default;
};

bool is_valid(const DRSystem& S, const NatExtPoint& xi);
// Coordinate xi_n for any integer n.
PointId coordinate(const DRSystem& S, const NatExtPoint& xi, Int n);
// The representation with a minimal cycle ending at coordinate 0 and an empty
// path; two representations denote the same point iff these agree.
NatExtPoint canonical(const DRSystem& S, const NatExtPoint& xi);
// The shift (sigma applied coordinatewise).
NatExtPoint shift(const DRSystem& S, const NatExtPoint& xi);
// Every valid representation of size <= max_size.
std::vector<NatExtPoint> nat_ext_points(const DRSystem& S, std::size_t max_size);

// phi = tau^m o f with m = max k, applied coordinatewise. Throws
// std::invalid_argument on an invalid xi or a system that is not total and surjective.
NatExtPoint nat_ext_map(const DRSystem& S, const DRSystem& T, const TSCData& d, const NatExtPoint& xi);

// TSC data built from a pair of mutually inverse conjugacies, with k and k' constant.
TSCData tsc_from_conjugacy(const DRSystem& S, const DRSystem& T, const std::vector<PointId>& f, Int k);

// Maps f with f o sigma = tau o f between permutations, in lexicographic order.
std::vector<std::vector<PointId>> equivariant_maps(const DRSystem& S, const DRSystem& T);

json tsc_json(const DRSystem& S, const DRSystem& T, const TSCData& d);
json nat_ext_json(const DRSystem& S, const NatExtPoint& xi);

}  // namespace rigidity
