#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/groupoid.hpp"

namespace rigidity {

// A right action of a finite group on a finite set: act(x, g) = xg.
class GroupAction {
 public:
  // Throws std::invalid_argument unless x e = x and (x g) g' = x (g g') for all
  // entries; a table satisfying the left-action law instead is rejected as such.
  GroupAction(Group group, std::vector<std::string> names, std::vector<std::vector<PointId>> table);

  const Group& group() const { return group_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(PointId x) const { return names_.at(x); }
  std::optional<PointId> find(const std::string& name) const;
  PointId act(PointId x, std::size_t g) const { return table_.at(x).at(g); }
  const std::vector<std::vector<PointId>>& table() const { return table_; }

 private:
  Group group_;
  std::vector<std::string> names_;
  std::vector<std::vector<PointId>> table_;
};

using GroupActionPtr = std::shared_ptr<const GroupAction>;

// Stab(x) = {g : xg = x}, as sorted element indices.
std::vector<std::size_t> action_stab(const GroupAction& A, PointId x);
// Elements fixing every point of the neighbourhood {x}.
std::vector<std::size_t> action_stab_ess(const GroupAction& A, PointId x);

// X x| G with arrows (x, g) encoded as {x, g, xg}; composition
// (x, g)(xg, g') = (x, gg'). All arrows have complexity 0.
class TransformationGroupoid : public Groupoid {
 public:
  explicit TransformationGroupoid(GroupActionPtr action);
  const GroupAction& action() const { return *action_; }

  std::string kind() const override { return "transformation"; }
  bool leveled() const override { return false; }
  std::vector<Unit> units(Int bound) const override;
  bool has_unit(const Unit& u) const override { return u.level == 0 && u.point < action_->size(); }
  bool contains(const Arrow& a) const override;
  Int complexity(const Arrow&) const override { return 0; }
  std::vector<Arrow> elements(Int bound) const override;
  Arrow inverse(const Arrow& a) const override;
  Arrow unit_arrow(const Unit& u) const override;
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override;
  std::size_t component(const Unit& u) const override { return orbit_.at(u.point); }
  std::vector<std::size_t> component_ids() const override;
  json unit_json(const Unit& u) const override { return action_->name(u.point); }
  json arrow_json(const Arrow& a) const override;

  Arrow arrow(PointId x, std::size_t g) const;

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override;

 private:
  GroupActionPtr action_;
  std::vector<std::size_t> orbit_;
};

std::shared_ptr<TransformationGroupoid> transformation_groupoid(GroupActionPtr a);

// (h, phi, eta) with h(xg) = h(x) phi(x, g) and h^-1(yl) = h^-1(y) eta(y, l).
struct ActionCOE {
  std::vector<PointId> h;
  std::vector<std::vector<std::size_t>> phi;  // [x][g] -> element of the second group
  std::vector<std::vector<std::size_t>> eta;  // [y][l] -> element of the first group
  bool operator==(const ActionCOE&) const = default;
};

struct ActionChecks {
  bool cocycle = true;
  bool stabilisers = false;
  bool essential_stabilisers = false;
};

// Both intertwining identities, plus the requested conditions on phi.
Certificate verify_action_coe(const GroupAction& A, const GroupAction& B, const ActionCOE& d, ActionChecks checks = {});

// Individual conditions on (h, phi).
bool is_action_cocycle(const GroupAction& A, const GroupAction& B, const std::vector<std::vector<std::size_t>>& phi);
// phi(x, .) restricts to a bijection Stab(x) -> Stab(h(x)) (or the essential stabilisers).
bool preserves_action_stab(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h,
                           const std::vector<std::vector<std::size_t>>& phi, bool essential);
// Least eta with h^-1(yl) = h^-1(y) eta(y, l), if one exists.
std::optional<std::vector<std::vector<std::size_t>>> least_eta(const GroupAction& A, const GroupAction& B,
                                                               const std::vector<PointId>& h);

// Theta(x, g) = (h(x), phi(x, g)). Needs only h and phi.
ArrowMap theta_action(GroupActionPtr A, GroupActionPtr B, const ActionCOE& d);

// Least (h, phi) in lexicographic order with phi a cocycle preserving
// essential stabilisers and some eta completing a COE; eta is read off the
// inverse of Theta.
std::optional<ActionCOE> search_action_coe(GroupActionPtr A, GroupActionPtr B);

// Every phi with h(xg) = h(x) phi(x, g) pointwise, in lexicographic order.
// With cocycles_only, non-cocycles are pruned during the enumeration.
std::vector<std::vector<std::vector<std::size_t>>> intertwining_phis(const GroupAction& A, const GroupAction& B,
                                                                     const std::vector<PointId>& h, bool cocycles_only);
// Number of pointwise-intertwining phi for h, without enumerating them.
double count_intertwining_phis(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h);

// h(x)g = h(xg) for all x, g; false unless both groups are equal and h is a bijection.
bool is_conjugacy(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h);

struct NamedAction {
  std::string name;
  GroupActionPtr action;
};

Group builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();
std::vector<NamedAction> builtin_actions();
GroupActionPtr builtin_action(const std::string& name);
// The action x g = rule(x, g) on points "0".."n-1"; checked like the constructor.
GroupActionPtr action_from_rule(Group g, std::size_t points, const std::function<PointId(PointId, std::size_t)>& rule);

json action_coe_json(const GroupAction& A, const GroupAction& B, const ActionCOE& d);

}  // namespace rigidity
