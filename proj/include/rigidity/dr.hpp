#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/groupoid.hpp"

namespace rigidity {

struct Witness {
  Int m = 0;
  Int n = 0;
  auto operator<=>(const Witness&) const = default;
};

struct StabInfo {
  ZSubgroup stab;
  ZSubgroup stab_ess;
  std::optional<Int> stab_min;  // nullopt encodes infinity
  bool on_cycle = false;
};

// A space with a partial self-map, seen through units. Shared by finite
// systems and their stabilisations.
class DRLike {
 public:
  virtual ~DRLike() = default;
  virtual std::optional<Unit> step(const Unit& u) const = 0;
  virtual bool has_point(const Unit& u) const = 0;
  // All points of level <= bound.
  virtual std::vector<Unit> points(Int bound) const = 0;
  virtual bool leveled() const = 0;
  virtual std::size_t component(const Unit& u) const = 0;
  virtual std::vector<std::size_t> component_ids() const = 0;
  virtual json point_json(const Unit& u) const = 0;

  virtual std::optional<Unit> iterate(const Unit& u, Int m) const;
  // Minimal witness (m, m - p), m >= max(p, 0), of sigma^m(x) = sigma^(m-p)(y).
  virtual std::optional<Witness> member(const Unit& x, Int p, const Unit& y) const;
  // Eventual cycle length of the forward orbit (0 if the orbit leaves the
  // domain) and whether u lies on its cycle.
  std::pair<Int, bool> eventual_cycle(const Unit& u) const;
};

class DRSystem : public DRLike {
 public:
  DRSystem(std::vector<std::string> names, std::vector<std::optional<PointId>> sigma);

  std::size_t size() const { return sigma_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(PointId x) const { return names_.at(x); }
  std::optional<PointId> find(const std::string& name) const;
  std::optional<PointId> sigma(PointId x) const { return sigma_.at(x); }
  const std::vector<std::optional<PointId>>& sigma_map() const { return sigma_; }

  std::optional<PointId> iterate(PointId x, Int m) const;
  bool in_domain(PointId x, Int m) const { return iterate(x, m).has_value(); }
  std::optional<Witness> member(PointId x, Int p, PointId y) const;
  const StabInfo& stab(PointId x) const { return stab_.at(x); }
  // Computed from the definition with the singleton neighbourhood {x}.
  ZSubgroup stab_ess(PointId x) const;
  std::size_t component(PointId x) const { return comp_.at(x); }

  bool is_total() const;
  bool is_surjective() const;
  bool is_permutation() const { return is_total() && is_surjective(); }
  // sigma^n for n in Z; requires a permutation.
  PointId perm_power(PointId x, Int n) const;

  std::optional<Unit> step(const Unit& u) const override;
  std::optional<Unit> iterate(const Unit& u, Int m) const override;
  std::optional<Witness> member(const Unit& x, Int p, const Unit& y) const override;
  bool has_point(const Unit& u) const override { return u.level == 0 && u.point < size(); }
  std::vector<Unit> points(Int bound) const override;
  bool leveled() const override { return false; }
  std::size_t component(const Unit& u) const override { return comp_.at(u.point); }
  std::vector<std::size_t> component_ids() const override;
  json point_json(const Unit& u) const override { return name(u.point); }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<PointId>> sigma_;
  std::vector<StabInfo> stab_;
  std::vector<std::size_t> comp_;
  // Forward orbit of each point up to its first repeat, the index where the
  // cycle starts and the cycle length (0 when the orbit leaves the domain).
  std::vector<std::vector<PointId>> orbit_;
  std::vector<std::size_t> tail_;
  std::vector<std::size_t> cycle_;
};

using DRSystemPtr = std::shared_ptr<const DRSystem>;

// X x N with sigma~(x, 0) = (sigma(x), 0) and sigma~(x, n+1) = (x, n).
class StabilizedSystem : public DRLike {
 public:
  explicit StabilizedSystem(DRSystemPtr base) : base_(std::move(base)) {}
  const DRSystemPtr& base() const { return base_; }

  std::optional<Unit> step(const Unit& u) const override;
  bool has_point(const Unit& u) const override { return u.level >= 0 && u.point < base_->size(); }
  std::vector<Unit> points(Int bound) const override;
  bool leveled() const override { return true; }
  std::size_t component(const Unit& u) const override { return base_->component(u.point); }
  std::vector<std::size_t> component_ids() const override { return base_->component_ids(); }
  json point_json(const Unit& u) const override { return json::array({base_->name(u.point), u.level}); }

  StabInfo stab(const Unit& u) const;

 private:
  DRSystemPtr base_;
};

std::shared_ptr<StabilizedSystem> stabilize(DRSystemPtr s);

// The Deaconu-Renault groupoid of a finite system or of a stabilisation.
// Complexity of (x, p, y) is max(m, n) for the minimal witness (m, n)
// (equivalently |p| + min(m, n)), raised to the unit levels when present.
class DRGroupoid : public Groupoid {
 public:
  explicit DRGroupoid(std::shared_ptr<const DRLike> sys);
  const DRLike& system() const { return *sys_; }

  std::string kind() const override { return sys_->leveled() ? "DR(stabilised)" : "DR"; }
  bool leveled() const override { return sys_->leveled(); }
  std::vector<Unit> units(Int bound) const override { return sys_->points(bound); }
  bool has_unit(const Unit& u) const override { return sys_->has_point(u); }
  bool contains(const Arrow& a) const override;
  Int complexity(const Arrow& a) const override;
  std::vector<Arrow> elements(Int bound) const override;
  Arrow inverse(const Arrow& a) const override { return Arrow{a.source, neg(a.tag), a.range}; }
  Arrow unit_arrow(const Unit& u) const override { return Arrow{u, 0, u}; }
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override;
  std::size_t component(const Unit& u) const override { return sys_->component(u); }
  std::vector<std::size_t> component_ids() const override { return sys_->component_ids(); }
  json unit_json(const Unit& u) const override { return sys_->point_json(u); }
  json arrow_json(const Arrow& a) const override;

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override {
    return Arrow{a.range, add(a.tag, b.tag), b.source};
  }

 private:
  std::shared_ptr<const DRLike> sys_;
};

std::shared_ptr<DRGroupoid> dr_groupoid(DRSystemPtr s);
std::shared_ptr<DRGroupoid> dr_groupoid(std::shared_ptr<const StabilizedSystem> s);

inline Arrow dr_arrow(PointId x, Int p, PointId y) { return Arrow{{x, 0}, p, {y, 0}}; }

// The degree of a Deaconu-Renault arrow.
inline Int c_X(const Arrow& a) { return a.tag; }

// Least l >= max(p, 0) with sigma^l(x) = sigma^(l-p)(y). Throws on an invalid arrow.
Int l_X(const DRSystem& s, const Arrow& a);

// ((x,m), p, (y,n)) -> ((x, p-m+n, y), (m, n)) from G(X~) to G(X) x R, with its inverse.
ArrowMap iso_stabilized(DRSystemPtr s);

// The cocycle on G(X) x R transported from the degree cocycle of G(X~):
// (g, (m, n)) -> c_X(g) + m - n.
Grading stabilized_degree_grading();

}  // namespace rigidity
