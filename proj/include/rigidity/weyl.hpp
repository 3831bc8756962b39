#pragma once

#include <boost/rational.hpp>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidity/dr.hpp"

namespace rigidity {

using Rational = boost::rational<Int>;

// re + i im with exact rational parts.
struct Coeff {
  Rational re{0};
  Rational im{0};

  Coeff() = default;
  Coeff(Rational r, Rational i = Rational(0)) : re(r), im(i) {}
  bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
  Coeff conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }
  Coeff operator*(const Coeff& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Coeff operator+(const Coeff& o) const { return {re + o.re, im + o.im}; }
  bool operator==(const Coeff&) const = default;
};

json coeff_json(const Coeff& c);

// Trivial: one grade for everything. Canonical: graded by the degree in Z.
enum class WeylMode { Trivial, Canonical };

std::string mode_name(WeylMode m);
WeylMode parse_mode(const std::string& s);  // "trivial" or "z"

// A function on G(X, sigma) supported on finitely many arrows forming a
// bisection; homogeneous in canonical mode.
class Normaliser {
 public:
  // Throws std::invalid_argument for a zero coefficient, an arrow outside the
  // groupoid, a support that is not a bisection, or an inhomogeneous support
  // in canonical mode.
  Normaliser(DRSystemPtr s, WeylMode mode, std::map<Arrow, Coeff> support);
  static Normaliser delta(DRSystemPtr s, WeylMode mode, const Arrow& a, Coeff c = Coeff(1));

  const DRSystemPtr& system() const { return sys_; }
  WeylMode mode() const { return mode_; }
  const std::map<Arrow, Coeff>& support() const { return support_; }
  // The common degree in canonical mode; nullopt in trivial mode or for n = 0.
  std::optional<Int> degree() const;
  // Points s(gamma) over the support, i.e. the support of n* n.
  std::set<PointId> domain() const;
  std::optional<Arrow> arrow_at(PointId source) const;
  bool operator==(const Normaliser& o) const { return mode_ == o.mode_ && support_ == o.support_; }

 private:
  DRSystemPtr sys_;
  WeylMode mode_;
  std::map<Arrow, Coeff> support_;
};

// s(gamma) -> r(gamma) over the support.
std::map<PointId, PointId> alpha(const Normaliser& n);
// Convolution product n m and adjoint n*.
Normaliser nproduct(const Normaliser& n, const Normaliser& m);
Normaliser nadjoint(const Normaliser& n);

class RelationError : public std::invalid_argument {
 public:
  // "domain": the point is outside supp(n* n) or supp(m* m).
  enum class Code { Domain, R1, R2, R3 };
  RelationError(Code c, const std::string& what) : std::invalid_argument(what), code_(c) {}
  Code code() const { return code_; }
  std::string code_name() const;

 private:
  Code code_;
};

// A class in Stab(x), the image of the unitary of n* m at x.
struct WindingClass {
  Int value = 0;
  ZSubgroup modulus;
  bool operator==(const WindingClass&) const = default;
};

// Degree of gamma_n^-1 gamma_m for the support arrows with source x.
// Throws RelationError (Domain, R2 or R3) when the class is undefined.
WindingClass u_class(const Normaliser& n, const Normaliser& m, PointId x);

struct WeylClass {
  GroupElem grade;
  PointId char_point = 0;
  Arrow canonical_arrow;
  auto operator<=>(const WeylClass&) const = default;
};

// [n, x] in normal form. Throws std::invalid_argument if x is outside supp(n* n).
WeylClass weyl_class(const Normaliser& n, PointId x);

// The relation on pairs (n, x), (m, y) decided clause by clause.
struct RelationResult {
  bool r1 = false, r2 = false, r3 = false, r4 = false;
  std::optional<WindingClass> winding;
  bool holds() const { return r1 && r2 && r3 && r4; }
};
RelationResult equivalent(const Normaliser& n, PointId x, const Normaliser& m, PointId y);

// [n, x][m, y] = [nm, y]; throws NotComposable unless x = alpha_m(y).
WeylClass weyl_compose(const DRSystemPtr& s, WeylMode mode, const WeylClass& a, const WeylClass& b);
// [n, x]^-1 = [n*, alpha_n(x)].
WeylClass weyl_inverse(const DRSystemPtr& s, WeylMode mode, const WeylClass& a);

// Z(n, U) = {[n, x] : x in U}; throws std::invalid_argument if U is not inside supp(n* n).
std::set<WeylClass> basic_open(const Normaliser& n, const std::set<PointId>& u);

// Classes of single-arrow normalisers as a groupoid. A class is encoded by its
// canonical arrow; products and inverses go through normaliser convolution
// and adjoints.
class WeylGroupoid : public Groupoid {
 public:
  WeylGroupoid(DRSystemPtr s, WeylMode mode);

  WeylClass decode(const Arrow& a) const;
  Arrow encode(const WeylClass& c) const;
  WeylMode mode() const { return mode_; }

  std::string kind() const override { return "weyl(" + mode_name(mode_) + ")"; }
  bool leveled() const override { return false; }
  std::vector<Unit> units(Int bound) const override { return dr_->units(bound); }
  bool has_unit(const Unit& u) const override { return dr_->has_unit(u); }
  bool contains(const Arrow& a) const override { return dr_->contains(a); }
  Int complexity(const Arrow& a) const override { return dr_->complexity(a); }
  std::vector<Arrow> elements(Int bound) const override;
  Arrow inverse(const Arrow& a) const override;
  Arrow unit_arrow(const Unit& u) const override;
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override;
  std::size_t component(const Unit& u) const override { return dr_->component(u); }
  std::vector<std::size_t> component_ids() const override { return dr_->component_ids(); }
  json unit_json(const Unit& u) const override { return dr_->unit_json(u); }
  json arrow_json(const Arrow& a) const override;

  // c_delta([n, x]) = grade of n.
  Grading grading() const;

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override;

 private:
  DRSystemPtr sys_;
  WeylMode mode_;
  std::shared_ptr<DRGroupoid> dr_;
};

// gamma -> [delta_gamma, s(gamma)], defined on arrows of complexity <= bound,
// with the inverse reading off the canonical arrow.
ArrowMap theta_reconstruct(std::shared_ptr<const WeylGroupoid> w, Int bound);

json weyl_class_json(const DRSystem& s, const WeylClass& c);
json normaliser_json(const Normaliser& n);

}  // namespace rigidity
