#include "rigidity/actions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rigidity {

namespace {

bool right_law(const Group& g, const std::vector<std::vector<PointId>>& t) {
  for (const auto& row : t)
    for (std::size_t a = 0; a < g.order(); ++a)
      for (std::size_t b = 0; b < g.order(); ++b)
        if (t[row[a]][b] != row[g.mul_index(a, b)]) return false;
  return true;
}

bool left_law(const Group& g, const std::vector<std::vector<PointId>>& t) {
  for (const auto& row : t)
    for (std::size_t a = 0; a < g.order(); ++a)
      for (std::size_t b = 0; b < g.order(); ++b)
        if (t[row[a]][b] != row[g.mul_index(b, a)]) return false;
  return true;
}

std::string key(const std::string& a, const std::string& b) { return a + "," + b; }

std::optional<std::vector<PointId>> inverse_of(const std::vector<PointId>& h, std::size_t n) {
  if (h.size() != n) return std::nullopt;
  std::vector<PointId> inv(n, n);
  for (PointId x = 0; x < h.size(); ++x) {
    if (h[x] >= n || inv[h[x]] != n) return std::nullopt;
    inv[h[x]] = x;
  }
  return inv;
}

// Least g with x g = y.
std::optional<std::size_t> transporter(const GroupAction& A, PointId x, PointId y) {
  for (std::size_t g = 0; g < A.group().order(); ++g)
    if (A.act(x, g) == y) return g;
  return std::nullopt;
}

Certificate stab_bijection(const char* name, const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h,
                           const std::vector<std::vector<std::size_t>>& phi, bool essential) {
  Certificate c(name, 0);
  for (PointId x = 0; x < A.size() && c.pass; ++x) {
    auto sa = essential ? action_stab_ess(A, x) : action_stab(A, x);
    auto sb = essential ? action_stab_ess(B, h[x]) : action_stab(B, h[x]);
    std::set<std::size_t> img;
    for (std::size_t g : sa) img.insert(phi[x][g]);
    if (img != std::set<std::size_t>(sb.begin(), sb.end()) || img.size() != sa.size())
      c.fail_with([&] {
        return json{{"point", A.name(x)},
                    {"stab_size", sa.size()},
                    {"image_size", img.size()},
                    {"target_stab_size", sb.size()}};
      });
  }
  return c;
}

}  // namespace

GroupAction::GroupAction(Group group, std::vector<std::string> names, std::vector<std::vector<PointId>> table)
    : group_(std::move(group)), names_(std::move(names)), table_(std::move(table)) {
  if (!group_.is_finite()) throw std::invalid_argument("only finite groups act");
  if (table_.size() != names_.size()) throw std::invalid_argument("action table does not match the point set");
  for (const auto& row : table_) {
    if (row.size() != group_.order()) throw std::invalid_argument("action table does not match the group order");
    for (PointId y : row)
      if (y >= names_.size()) throw std::invalid_argument("action table value out of range");
  }
  for (PointId x = 0; x < table_.size(); ++x)
    if (table_[x][group_.identity_index()] != x)
      throw std::invalid_argument("identity does not fix point " + names_[x]);
  if (!right_law(group_, table_)) {
    if (left_law(group_, table_)) throw std::invalid_argument("table is a left action; right actions are expected");
    throw std::invalid_argument("table is not an action");
  }
}

std::optional<PointId> GroupAction::find(const std::string& name) const {
  for (PointId x = 0; x < names_.size(); ++x)
    if (names_[x] == name) return x;
  return std::nullopt;
}

std::vector<std::size_t> action_stab(const GroupAction& A, PointId x) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < A.group().order(); ++g)
    if (A.act(x, g) == x) out.push_back(g);
  return out;
}

std::vector<std::size_t> action_stab_ess(const GroupAction& A, PointId x) {
  // On a discrete space {x} is the least open neighbourhood of x.
  const std::vector<PointId> nbhd{x};
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < A.group().order(); ++g)
    if (std::all_of(nbhd.begin(), nbhd.end(), [&](PointId y) { return A.act(y, g) == y; })) out.push_back(g);
  return out;
}

TransformationGroupoid::TransformationGroupoid(GroupActionPtr action) : action_(std::move(action)) {
  orbit_.assign(action_->size(), action_->size());
  for (PointId x = 0; x < action_->size(); ++x) {
    if (orbit_[x] != action_->size()) continue;
    for (std::size_t g = 0; g < action_->group().order(); ++g) orbit_[action_->act(x, g)] = x;
  }
}

std::vector<Unit> TransformationGroupoid::units(Int) const {
  std::vector<Unit> out;
  for (PointId x = 0; x < action_->size(); ++x) out.push_back(Unit{x, 0});
  return out;
}

bool TransformationGroupoid::contains(const Arrow& a) const {
  return has_unit(a.range) && has_unit(a.source) && a.tag >= 0 &&
         static_cast<std::size_t>(a.tag) < action_->group().order() &&
         action_->act(a.range.point, static_cast<std::size_t>(a.tag)) == a.source.point;
}

Arrow TransformationGroupoid::arrow(PointId x, std::size_t g) const {
  return Arrow{{x, 0}, static_cast<Int>(g), {action_->act(x, g), 0}};
}

std::vector<Arrow> TransformationGroupoid::elements(Int bound) const {
  if (bound < 0) return {};
  return memoized(0, [&] {
    std::vector<Arrow> out;
    for (PointId x = 0; x < action_->size(); ++x)
      for (std::size_t g = 0; g < action_->group().order(); ++g) out.push_back(arrow(x, g));
    sort_elements(*this, out);
    return out;
  });
}

Arrow TransformationGroupoid::inverse(const Arrow& a) const {
  const std::size_t g = action_->group().inverse_index(static_cast<std::size_t>(a.tag));
  return Arrow{a.source, static_cast<Int>(g), a.range};
}

Arrow TransformationGroupoid::unit_arrow(const Unit& u) const {
  return Arrow{u, static_cast<Int>(action_->group().identity_index()), u};
}

std::optional<Arrow> TransformationGroupoid::connect(const Unit& r, const Unit& s) const {
  if (!has_unit(r) || !has_unit(s)) return std::nullopt;
  auto g = transporter(*action_, r.point, s.point);
  if (!g) return std::nullopt;
  return arrow(r.point, *g);
}

std::vector<std::size_t> TransformationGroupoid::component_ids() const {
  std::set<std::size_t> ids(orbit_.begin(), orbit_.end());
  return {ids.begin(), ids.end()};
}

json TransformationGroupoid::arrow_json(const Arrow& a) const {
  return json{{"x", action_->name(a.range.point)},
              {"g", action_->group().element_name(static_cast<std::size_t>(a.tag))}};
}

Arrow TransformationGroupoid::compose_unchecked(const Arrow& a, const Arrow& b) const {
  const std::size_t g = action_->group().mul_index(static_cast<std::size_t>(a.tag), static_cast<std::size_t>(b.tag));
  return Arrow{a.range, static_cast<Int>(g), b.source};
}

std::shared_ptr<TransformationGroupoid> transformation_groupoid(GroupActionPtr a) {
  return std::make_shared<TransformationGroupoid>(std::move(a));
}

bool is_action_cocycle(const GroupAction& A, const GroupAction& B, const std::vector<std::vector<std::size_t>>& phi) {
  const Group& G = A.group();
  for (PointId x = 0; x < A.size(); ++x)
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t gp = 0; gp < G.order(); ++gp)
        if (phi[x][G.mul_index(g, gp)] != B.group().mul_index(phi[x][g], phi[A.act(x, g)][gp])) return false;
  return true;
}

bool preserves_action_stab(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h,
                           const std::vector<std::vector<std::size_t>>& phi, bool essential) {
  return stab_bijection("stabilisers", A, B, h, phi, essential).pass;
}

std::optional<std::vector<std::vector<std::size_t>>> least_eta(const GroupAction& A, const GroupAction& B,
                                                               const std::vector<PointId>& h) {
  auto inv = inverse_of(h, B.size());
  if (!inv || h.size() != A.size()) return std::nullopt;
  std::vector<std::vector<std::size_t>> eta(B.size(), std::vector<std::size_t>(B.group().order()));
  for (PointId y = 0; y < B.size(); ++y)
    for (std::size_t l = 0; l < B.group().order(); ++l) {
      auto g = transporter(A, (*inv)[y], (*inv)[B.act(y, l)]);
      if (!g) return std::nullopt;
      eta[y][l] = *g;
    }
  return eta;
}

namespace {

// h is a bijection and phi, eta are tables of the right size with values in range.
Certificate shape_check(const GroupAction& A, const GroupAction& B, const ActionCOE& d) {
  const std::size_t nG = A.group().order(), nL = B.group().order();
  Certificate shape("shape", 0);
  auto inv = inverse_of(d.h, B.size());
  if (d.h.size() != A.size() || !inv)
    shape.fail_with([&] { return json{{"map", "h"}, {"reason", "not a bijection"}}; });
  auto table_ok = [](const auto& t, std::size_t rows, std::size_t cols, std::size_t range) {
    if (t.size() != rows) return false;
    for (const auto& r : t) {
      if (r.size() != cols) return false;
      for (auto v : r)
        if (v >= range) return false;
    }
    return true;
  };
  if (!table_ok(d.phi, A.size(), nG, nL))
    shape.fail_with([&] { return json{{"map", "phi"}, {"reason", "wrong shape or value out of range"}}; });
  if (!table_ok(d.eta, B.size(), nL, nG))
    shape.fail_with([&] { return json{{"map", "eta"}, {"reason", "wrong shape or value out of range"}}; });
  return shape;
}

}  // namespace

Certificate verify_action_coe(const GroupAction& A, const GroupAction& B, const ActionCOE& d, ActionChecks checks) {
  Certificate cert("verify_action_coe", 0);
  const std::size_t nG = A.group().order(), nL = B.group().order();
  Certificate shape = shape_check(A, B, d);
  const bool ok = shape.pass;
  cert.add(std::move(shape));
  if (!ok) return cert;
  const auto inv = inverse_of(d.h, B.size());

  Certificate fwd("intertwining_h", 0);
  for (PointId x = 0; x < A.size() && fwd.pass; ++x)
    for (std::size_t g = 0; g < nG; ++g)
      if (d.h[A.act(x, g)] != B.act(d.h[x], d.phi[x][g])) {
        fwd.fail_with([&] { return json{{"x", A.name(x)}, {"g", A.group().element_name(g)}}; });
        break;
      }
  cert.add(std::move(fwd));

  Certificate bwd("intertwining_hinv", 0);
  for (PointId y = 0; y < B.size() && bwd.pass; ++y)
    for (std::size_t l = 0; l < nL; ++l)
      if ((*inv)[B.act(y, l)] != A.act((*inv)[y], d.eta[y][l])) {
        bwd.fail_with([&] { return json{{"y", B.name(y)}, {"l", B.group().element_name(l)}}; });
        break;
      }
  cert.add(std::move(bwd));

  if (checks.cocycle) {
    Certificate coc("cocycle", 0);
    const Group& G = A.group();
    for (PointId x = 0; x < A.size() && coc.pass; ++x)
      for (std::size_t g = 0; g < nG && coc.pass; ++g)
        for (std::size_t gp = 0; gp < nG; ++gp)
          if (d.phi[x][G.mul_index(g, gp)] != B.group().mul_index(d.phi[x][g], d.phi[A.act(x, g)][gp])) {
            coc.fail_with(
                [&] { return json{{"x", A.name(x)}, {"g", G.element_name(g)}, {"gprime", G.element_name(gp)}}; });
            break;
          }
    cert.add(std::move(coc));
  }
  if (checks.stabilisers) cert.add(stab_bijection("stabilisers", A, B, d.h, d.phi, false));
  if (checks.essential_stabilisers) cert.add(stab_bijection("essential_stabilisers", A, B, d.h, d.phi, true));
  return cert;
}

ArrowMap theta_action(GroupActionPtr A, GroupActionPtr B, const ActionCOE& d) {
  if (!shape_check(*A, *B, d).pass) throw std::invalid_argument("theta_action: malformed data");
  ArrowMap m;
  m.name = "theta_action";
  m.forward = [A, B, h = d.h, phi = d.phi](const Arrow& a) -> std::optional<Arrow> {
    if (a.range.level || a.source.level || a.range.point >= A->size() || a.tag < 0 ||
        static_cast<std::size_t>(a.tag) >= A->group().order())
      return std::nullopt;
    const PointId y = h[a.range.point];
    const std::size_t l = phi[a.range.point][static_cast<std::size_t>(a.tag)];
    return Arrow{{y, 0}, static_cast<Int>(l), {B->act(y, l), 0}};
  };
  return m;
}

double count_intertwining_phis(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h) {
  double total = 1;
  for (PointId x = 0; x < A.size(); ++x)
    for (std::size_t g = 0; g < A.group().order(); ++g) {
      std::size_t n = 0;
      for (std::size_t l = 0; l < B.group().order(); ++l)
        if (B.act(h[x], l) == h[A.act(x, g)]) ++n;
      total *= static_cast<double>(n);
    }
  return total;
}

std::vector<std::vector<std::vector<std::size_t>>> intertwining_phis(const GroupAction& A, const GroupAction& B,
                                                                     const std::vector<PointId>& h,
                                                                     bool cocycles_only) {
  const Group& G = A.group();
  const std::size_t nG = G.order(), nX = A.size();
  std::vector<std::vector<std::vector<std::size_t>>> out;
  std::vector<std::vector<std::size_t>> phi(nX, std::vector<std::size_t>(nG, 0));
  std::vector<std::vector<bool>> set(nX, std::vector<bool>(nG, false));
  // Cocycle identities whose three entries are all assigned and which involve (x, g).
  auto consistent = [&](PointId x, std::size_t g) {
    auto holds = [&](PointId u, std::size_t a, std::size_t b) {
      const std::size_t ab = G.mul_index(a, b);
      const PointId ua = A.act(u, a);
      if (!set[u][ab] || !set[u][a] || !set[ua][b]) return true;
      return phi[u][ab] == B.group().mul_index(phi[u][a], phi[ua][b]);
    };
    for (PointId u = 0; u < nX; ++u)
      for (std::size_t a = 0; a < nG; ++a)
        for (std::size_t b = 0; b < nG; ++b) {
          const bool involved = (u == x && (G.mul_index(a, b) == g || a == g)) || (A.act(u, a) == x && b == g);
          if (involved && !holds(u, a, b)) return false;
        }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == nX * nG) {
      out.push_back(phi);
      return;
    }
    const PointId x = i / nG;
    const std::size_t g = i % nG;
    for (std::size_t l = 0; l < B.group().order(); ++l) {
      if (B.act(h[x], l) != h[A.act(x, g)]) continue;
      phi[x][g] = l;
      set[x][g] = true;
      if (!cocycles_only || consistent(x, g)) self(self, i + 1);
      set[x][g] = false;
    }
  };
  if (h.size() == nX) rec(rec, 0);
  return out;
}

std::optional<ActionCOE> search_action_coe(GroupActionPtr A, GroupActionPtr B) {
  if (A->size() != B->size()) return std::nullopt;
  std::vector<PointId> h(A->size());
  for (PointId x = 0; x < h.size(); ++x) h[x] = x;
  do {
    if (!least_eta(*A, *B, h)) continue;
    for (const auto& phi : intertwining_phis(*A, *B, h, true)) {
      if (!preserves_action_stab(*A, *B, h, phi, true)) continue;
      // Theta is a bijection here; eta(y, l) is the group coordinate of the
      // preimage of (y, l).
      ActionCOE d{h, phi, {}};
      d.eta.assign(B->size(), std::vector<std::size_t>(B->group().order(), 0));
      for (PointId x = 0; x < A->size(); ++x)
        for (std::size_t g = 0; g < A->group().order(); ++g) d.eta[h[x]][phi[x][g]] = g;
      return d;
    }
  } while (std::next_permutation(h.begin(), h.end()));
  return std::nullopt;
}

bool is_conjugacy(const GroupAction& A, const GroupAction& B, const std::vector<PointId>& h) {
  if (!(A.group() == B.group()) || h.size() != A.size() || !inverse_of(h, B.size())) return false;
  for (PointId x = 0; x < A.size(); ++x)
    for (std::size_t g = 0; g < A.group().order(); ++g)
      if (B.act(h[x], g) != h[A.act(x, g)]) return false;
  return true;
}

Group builtin_group(const std::string& name) {
  if (name == "trivial") return Group::trivial();
  if (name == "Z2") return Group::cyclic(2);
  if (name == "Z3") return Group::cyclic(3);
  if (name == "Z4") return Group::cyclic(4);
  if (name == "Klein") return Group::klein();
  throw std::invalid_argument("unknown group: " + name);
}

std::vector<std::string> builtin_group_names() { return {"trivial", "Z2", "Z3", "Z4", "Klein"}; }

GroupActionPtr action_from_rule(Group g, std::size_t points, const std::function<PointId(PointId, std::size_t)>& rule) {
  std::vector<std::string> names;
  std::vector<std::vector<PointId>> table(points, std::vector<PointId>(g.order()));
  for (PointId x = 0; x < points; ++x) {
    names.push_back(std::to_string(x));
    for (std::size_t e = 0; e < g.order(); ++e) table[x][e] = rule(x, e);
  }
  return std::make_shared<GroupAction>(std::move(g), std::move(names), std::move(table));
}

std::vector<NamedAction> builtin_actions() {
  auto Z = [](std::size_t n) { return Group::cyclic(n); };
  // Klein elements are bit masks: a = 1, b = 2.
  return {
      {"trivial-1", action_from_rule(Group::trivial(), 1, [](PointId x, std::size_t) { return x; })},
      {"trivial-2", action_from_rule(Group::trivial(), 2, [](PointId x, std::size_t) { return x; })},
      {"Z2-swap", action_from_rule(Z(2), 2, [](PointId x, std::size_t g) { return x ^ g; })},
      {"Z2-fixed-1", action_from_rule(Z(2), 1, [](PointId x, std::size_t) { return x; })},
      {"Z2-fixed-2", action_from_rule(Z(2), 2, [](PointId x, std::size_t) { return x; })},
      {"Z2-swap-fix", action_from_rule(Z(2), 3, [](PointId x, std::size_t g) { return x < 2 ? x ^ g : x; })},
      {"Z2-double-swap", action_from_rule(Z(2), 4, [](PointId x, std::size_t g) { return x ^ g; })},
      {"Z3-rotation", action_from_rule(Z(3), 3, [](PointId x, std::size_t g) { return (x + g) % 3; })},
      {"Z4-rotation", action_from_rule(Z(4), 4, [](PointId x, std::size_t g) { return (x + g) % 4; })},
      {"Z4-half-rotation", action_from_rule(Z(4), 4, [](PointId x, std::size_t g) { return (x + 2 * g) % 4; })},
      {"Z4-fixed-1", action_from_rule(Z(4), 1, [](PointId x, std::size_t) { return x; })},
      {"Z4-parity", action_from_rule(Z(4), 2, [](PointId x, std::size_t g) { return (x + g) % 2; })},
      {"Klein-regular", action_from_rule(Group::klein(), 4, [](PointId x, std::size_t g) { return x ^ g; })},
      {"Klein-on-2", action_from_rule(Group::klein(), 2, [](PointId x, std::size_t g) { return x ^ (g & 1); })},
      {"Klein-split", action_from_rule(Group::klein(), 4,
                                       [](PointId x, std::size_t g) {
                                         if (x < 2) return x ^ (g & 1);
                                         return 2 + ((x - 2) ^ (g >> 1));
                                       })},
  };
}

GroupActionPtr builtin_action(const std::string& name) {
  for (auto& a : builtin_actions())
    if (a.name == name) return a.action;
  throw std::invalid_argument("unknown action: " + name);
}

json action_coe_json(const GroupAction& A, const GroupAction& B, const ActionCOE& d) {
  json h = json::object(), phi = json::object(), eta = json::object();
  for (PointId x = 0; x < d.h.size(); ++x) h[A.name(x)] = B.name(d.h[x]);
  for (PointId x = 0; x < d.phi.size(); ++x)
    for (std::size_t g = 0; g < d.phi[x].size(); ++g)
      phi[key(A.name(x), A.group().element_name(g))] = B.group().element_name(d.phi[x][g]);
  for (PointId y = 0; y < d.eta.size(); ++y)
    for (std::size_t l = 0; l < d.eta[y].size(); ++l)
      eta[key(B.name(y), B.group().element_name(l))] = A.group().element_name(d.eta[y][l]);
  return json{{"h", h}, {"phi", phi}, {"eta", eta}};
}

}  // namespace rigidity
