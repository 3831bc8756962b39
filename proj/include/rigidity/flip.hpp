#pragma once

#include <optional>
#include <vector>

#include "rigidity/coe.hpp"

namespace rigidity {

// An isomorphism theta: G(X, sigma) -> G(Y, tau) between permutations, with its unit map h.
struct FlipInput {
  DRSystemPtr S, T;
  ArrowMap theta;
  std::vector<PointId> h;
};

// Reads h off theta's units; throws std::invalid_argument unless both systems are permutations.
FlipInput make_flip_input(DRSystemPtr S, DRSystemPtr T, ArrowMap theta);

// f(n, x) = c_Y(theta(x, n, sigma^n(x))).
Int f_of(const FlipInput& in, Int n, PointId x);

// f(., x) restricted to one period: f(n + jP, x) = f(n, x) + jD.
struct FlipOrbit {
  Int period = 0;           // P
  Int drift = 0;            // D = f(P, x)
  std::vector<Int> window;  // f(r, x) for r in [0, P)
  Int at(Int n) const;
};
FlipOrbit flip_orbit(const FlipInput& in, PointId x);

// The least N >= 1 such that every value of [-M, M] hit by f(., x) is hit at
// some |n| <= N, for every x, where M = max |f(1, x)|.
Int threshold_N(const FlipInput& in);

struct FlipDecomposition {
  Int N = 0;
  std::vector<PointId> X1, X2, Y1, Y2;
  std::vector<std::optional<Int>> a, b;        // on X1, X2
  std::vector<std::optional<PointId>> h1, h2;  // on X1, X2
  // Partition and invariance, the transfer identities for a and b, and both conjugacies.
  Certificate certificate;
};

// Throws std::domain_error if some point is in neither sign class (theta is
// then not an isomorphism). A larger `N` than the least one may be supplied;
// the result does not depend on it.
FlipDecomposition decompose(const FlipInput& in, std::optional<Int> N = std::nullopt);

// (h1(x), n, h1(y)) on X1 and (h2(x), -n, h2(y)) on X2, with the exact inverse.
// Throws std::invalid_argument if the decomposition's invariants fail.
ArrowMap rebuild_theta(DRSystemPtr S, DRSystemPtr T, const FlipDecomposition& dec);

// Least lexicographic conjugacy h with h o sigma = tau o h, if any.
std::optional<std::vector<PointId>> least_conjugacy(const DRSystem& S, const DRSystem& T);

// Returns the decomposition with X2 empty and h1 the least conjugacy, or
// nothing when no splitting exists (equivalently, the cycle types differ).
std::optional<FlipDecomposition> flip_decide(DRSystemPtr S, DRSystemPtr T);

json flip_json(const DRSystem& S, const DRSystem& T, const FlipDecomposition& dec);

}  // namespace rigidity
