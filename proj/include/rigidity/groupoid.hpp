#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rigidity/certificate.hpp"
#include "rigidity/group.hpp"

namespace rigidity {

// A unit of a discrete groupoid. `level` is the stabilisation depth for X x N
// and the R-coordinate for G x R; it is 0 everywhere else.
struct Unit {
  PointId point = 0;
  Int level = 0;
  auto operator<=>(const Unit&) const = default;
};

// An arrow with range `range` and source `source`. `tag` is the degree of a
// Deaconu-Renault arrow or the group element index of an action arrow.
struct Arrow {
  Unit range;
  Int tag = 0;
  Unit source;
  auto operator<=>(const Arrow&) const = default;
};

class NotComposable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Groupoid {
 public:
  virtual ~Groupoid() = default;

  virtual std::string kind() const = 0;
  // Units carry a nonzero level (the unit set is then infinite).
  virtual bool leveled() const = 0;
  virtual std::vector<Unit> units(Int bound) const = 0;
  virtual bool has_unit(const Unit& u) const = 0;
  virtual bool contains(const Arrow& a) const = 0;
  // Enumeration complexity; requires contains(a).
  virtual Int complexity(const Arrow& a) const = 0;
  // All arrows of complexity <= bound, ordered by (complexity, arrow).
  virtual std::vector<Arrow> elements(Int bound) const = 0;
  virtual Arrow inverse(const Arrow& a) const = 0;
  virtual Arrow unit_arrow(const Unit& u) const = 0;
  // Some arrow with the given range and source, of least complexity, if any.
  virtual std::optional<Arrow> connect(const Unit& range, const Unit& source) const = 0;
  // Orbit (connected component) label of a unit, and the set of all labels.
  virtual std::size_t component(const Unit& u) const = 0;
  virtual std::vector<std::size_t> component_ids() const = 0;
  virtual json unit_json(const Unit& u) const = 0;
  virtual json arrow_json(const Arrow& a) const = 0;

  // Throws NotComposable unless a.source == b.range.
  Arrow compose(const Arrow& a, const Arrow& b) const;
  bool is_unit(const Arrow& a) const { return a == unit_arrow(a.range); }

 protected:
  virtual Arrow compose_unchecked(const Arrow& a, const Arrow& b) const = 0;
  static void sort_elements(const Groupoid& g, std::vector<Arrow>& arrows);
  // Result of make() for this bound, computed once.
  std::vector<Arrow> memoized(Int bound, const std::function<std::vector<Arrow>()>& make) const;

 private:
  mutable std::mutex memo_mutex_;
  mutable std::map<Int, std::vector<Arrow>> memo_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

// A cocycle into a discrete group.
struct Grading {
  std::string name;
  Group target;
  std::function<GroupElem(const Arrow&)> value;
};

Grading trivial_grading();
// The degree cocycle of a Deaconu-Renault groupoid (valued in Z).
Grading degree_grading();
// c-bar(g, (m, n)) = c(g) on a product with R.
Grading product_grading(const Grading& base);

Certificate check_cocycle(const Groupoid& g, const Grading& c, Int bound);
// Associativity, unit laws and inverse laws on elements(bound).
Certificate check_groupoid_axioms(const Groupoid& g, Int bound);

// A map between groupoids, given by a forward rule and optionally an exact
// inverse rule. Unit bijection = the restriction of `forward` to unit arrows.
struct ArrowMap {
  using Fn = std::function<std::optional<Arrow>(const Arrow&)>;
  std::string name;
  Fn forward;
  Fn inverse;

  std::optional<Arrow> operator()(const Arrow& a) const { return forward(a); }
  std::vector<std::pair<Arrow, Arrow>> tabulate(const Groupoid& g, Int bound) const;
  static ArrowMap from_table(std::map<Arrow, Arrow> table, std::string name = "table");
};

// Bounded isomorphism check. Records unit bijection, injectivity,
// surjectivity onto elements(g2, bound), homomorphism on composable pairs and,
// if both gradings are given, c2 o m = c1. Surjectivity uses m.inverse when
// present and otherwise looks for preimages among elements(g1, preimage_bound)
// (default: bound). Sub-checks run in that order and stop at the first failure.
Certificate verify_iso(const Groupoid& g1, const Groupoid& g2, const ArrowMap& m, Int bound,
                       const Grading* c1 = nullptr, const Grading* c2 = nullptr,
                       std::optional<Int> preimage_bound = std::nullopt);

// Every unit is the range of an arrow with source in u (decided on components).
bool is_full(const Groupoid& g, const std::set<Unit>& u);

class RestrictedGroupoid : public Groupoid {
 public:
  RestrictedGroupoid(GroupoidPtr parent, std::set<Unit> units);
  std::string kind() const override { return "restricted(" + parent_->kind() + ")"; }
  bool leveled() const override { return parent_->leveled(); }
  std::vector<Unit> units(Int bound) const override;
  bool has_unit(const Unit& u) const override { return units_.count(u) > 0; }
  bool contains(const Arrow& a) const override;
  Int complexity(const Arrow& a) const override { return parent_->complexity(a); }
  std::vector<Arrow> elements(Int bound) const override;
  Arrow inverse(const Arrow& a) const override { return parent_->inverse(a); }
  Arrow unit_arrow(const Unit& u) const override { return parent_->unit_arrow(u); }
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override;
  std::size_t component(const Unit& u) const override { return parent_->component(u); }
  std::vector<std::size_t> component_ids() const override;
  json unit_json(const Unit& u) const override { return parent_->unit_json(u); }
  json arrow_json(const Arrow& a) const override { return parent_->arrow_json(a); }
  const std::set<Unit>& unit_set() const { return units_; }
  const GroupoidPtr& parent() const { return parent_; }

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override { return parent_->compose(a, b); }

 private:
  GroupoidPtr parent_;
  std::set<Unit> units_;
};

std::shared_ptr<RestrictedGroupoid> restrict(GroupoidPtr g, std::set<Unit> u);

// G x R with R = N x N the pair groupoid. Arrow (g, (m, n)) is encoded as
// {(r(g), m), tag(g), (s(g), n)}; the parent must have unleveled units.
class ProductWithR : public Groupoid {
 public:
  explicit ProductWithR(GroupoidPtr parent);
  std::string kind() const override { return parent_->kind() + " x R"; }
  bool leveled() const override { return true; }
  std::vector<Unit> units(Int bound) const override;
  bool has_unit(const Unit& u) const override;
  bool contains(const Arrow& a) const override;
  Int complexity(const Arrow& a) const override;
  std::vector<Arrow> elements(Int bound) const override;
  Arrow inverse(const Arrow& a) const override;
  Arrow unit_arrow(const Unit& u) const override;
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override;
  std::size_t component(const Unit& u) const override { return parent_->component(Unit{u.point, 0}); }
  std::vector<std::size_t> component_ids() const override { return parent_->component_ids(); }
  json unit_json(const Unit& u) const override;
  json arrow_json(const Arrow& a) const override;

  static Arrow base(const Arrow& a) { return Arrow{{a.range.point, 0}, a.tag, {a.source.point, 0}}; }
  static Arrow lift(const Arrow& g, Int m, Int n) { return Arrow{{g.range.point, m}, g.tag, {g.source.point, n}}; }
  const GroupoidPtr& parent() const { return parent_; }

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override;

 private:
  GroupoidPtr parent_;
};

std::shared_ptr<ProductWithR> product_with_R(GroupoidPtr g);

// The ambient groupoid G viewed with a splitting of its (finite) unit space
// into complementary full pieces K1, K2. Block (i, j) is K_i G K_j; the
// (1, 2) block is the equivalence bibundle Z and Z^op is its image under
// inversion, which is the (2, 1) block.
class LinkingGroupoid : public Groupoid {
 public:
  LinkingGroupoid(GroupoidPtr parent, std::set<Unit> k1, std::set<Unit> k2);
  std::string kind() const override { return "linking(" + parent_->kind() + ")"; }
  bool leveled() const override { return parent_->leveled(); }
  std::vector<Unit> units(Int bound) const override { return parent_->units(bound); }
  bool has_unit(const Unit& u) const override { return parent_->has_unit(u); }
  bool contains(const Arrow& a) const override { return parent_->contains(a); }
  Int complexity(const Arrow& a) const override { return parent_->complexity(a); }
  std::vector<Arrow> elements(Int bound) const override { return parent_->elements(bound); }
  Arrow inverse(const Arrow& a) const override { return parent_->inverse(a); }
  Arrow unit_arrow(const Unit& u) const override { return parent_->unit_arrow(u); }
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override { return parent_->connect(r, s); }
  std::size_t component(const Unit& u) const override { return parent_->component(u); }
  std::vector<std::size_t> component_ids() const override { return parent_->component_ids(); }
  json unit_json(const Unit& u) const override { return parent_->unit_json(u); }
  json arrow_json(const Arrow& a) const override;

  // 1 or 2.
  int side(const Unit& u) const { return k1_.count(u) ? 1 : 2; }
  std::pair<int, int> block_of(const Arrow& a) const { return {side(a.range), side(a.source)}; }
  std::vector<Arrow> block(int i, int j, Int bound) const;
  std::vector<Arrow> bibundle(Int bound) const { return block(1, 2, bound); }
  Arrow op(const Arrow& z) const { return inverse(z); }
  const std::set<Unit>& k1() const { return k1_; }
  const std::set<Unit>& k2() const { return k2_; }

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override { return parent_->compose(a, b); }

 private:
  GroupoidPtr parent_;
  std::set<Unit> k1_, k2_;
};

std::shared_ptr<LinkingGroupoid> linking(GroupoidPtr g, std::set<Unit> k1, std::set<Unit> k2);

struct EquivalenceComposition {
  std::vector<Arrow> block13;
  // (w, z1, z2) with w = z1 z2, z1 in K1 G K2, z2 in K2 G K3.
  std::vector<std::array<Arrow, 3>> factorizations;
  Certificate certificate;
};

// Composes the bibundles K1 G K2 and K2 G K3 inside a common ambient groupoid.
// Throws std::invalid_argument if some K_i is not full.
EquivalenceComposition compose_equivalences(const Groupoid& g, const std::set<Unit>& k1, const std::set<Unit>& k2,
                                            const std::set<Unit>& k3, Int bound, const Grading* c = nullptr);

json arrow_pair_json(const Groupoid& g, const Arrow& a, const Arrow& b);

}  // namespace rigidity

template <>
struct std::hash<rigidity::Unit> {
  std::size_t operator()(const rigidity::Unit& u) const noexcept {
    return std::hash<std::size_t>()(u.point * 1000003u ^ static_cast<std::size_t>(u.level));
  }
};

template <>
struct std::hash<rigidity::Arrow> {
  std::size_t operator()(const rigidity::Arrow& a) const noexcept {
    std::size_t h = std::hash<rigidity::Unit>()(a.range);
    h = h * 31 + std::hash<rigidity::Int>()(a.tag);
    return h * 31 + std::hash<rigidity::Unit>()(a.source);
  }
};
