#include "rigidity/dr.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rigidity {

std::optional<Unit> DRLike::iterate(const Unit& u, Int m) const {
  if (m < 0) throw std::invalid_argument("iterate: negative power");
  Unit cur = u;
  if (m <= 256) {
    for (Int i = 0; i < m; ++i) {
      auto nxt = step(cur);
      if (!nxt) return std::nullopt;
      cur = *nxt;
    }
    return cur;
  }
  std::map<Unit, Int> seen;
  for (Int i = 0; i < m; ++i) {
    auto [it, fresh] = seen.emplace(cur, i);
    if (!fresh) {
      Int period = i - it->second;
      Int rest = (m - i) % period;
      for (Int j = 0; j < rest; ++j) cur = *step(cur);
      return cur;
    }
    auto nxt = step(cur);
    if (!nxt) return std::nullopt;
    cur = *nxt;
  }
  return cur;
}

std::optional<Witness> DRLike::member(const Unit& x, Int p, const Unit& y) const {
  if (!has_point(x) || !has_point(y)) return std::nullopt;
  const Int m0 = std::max<Int>(p, 0);
  const Int n0 = sub(m0, p);
  auto u = iterate(x, m0);
  auto v = iterate(y, n0);
  if (!u || !v) return std::nullopt;
  // Once equal, the two orbits stay equal; a repeated pair means they never meet.
  std::set<std::pair<Unit, Unit>> seen;
  for (Int j = 0;; ++j) {
    if (*u == *v) return Witness{add(m0, j), add(n0, j)};
    if (j >= 64 && !seen.emplace(*u, *v).second) return std::nullopt;
    u = step(*u);
    v = step(*v);
    if (!u || !v) return std::nullopt;
  }
}

std::pair<Int, bool> DRLike::eventual_cycle(const Unit& u) const {
  std::map<Unit, Int> first;
  Unit cur = u;
  for (Int i = 0;; ++i) {
    auto [it, fresh] = first.emplace(cur, i);
    if (!fresh) return {i - it->second, it->second == 0};
    auto nxt = step(cur);
    if (!nxt) return {0, false};
    cur = *nxt;
  }
}

namespace {

// Orbit u, step(u), ... up to and including one full traversal of its cycle.
std::vector<Unit> orbit_list(const DRLike& s, const Unit& u) {
  std::vector<Unit> out;
  std::set<Unit> seen;
  std::optional<Unit> cur = u;
  while (cur && seen.insert(*cur).second) {
    out.push_back(*cur);
    cur = s.step(*cur);
  }
  if (cur) {
    // Walk the cycle once more so that every alignment is visible.
    std::size_t start = out.size();
    Unit c = *cur;
    do {
      out.push_back(c);
      c = *s.step(c);
    } while (c != out[start]);
  }
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

DRSystem::DRSystem(std::vector<std::string> names, std::vector<std::optional<PointId>> sigma)
    : names_(std::move(names)), sigma_(std::move(sigma)) {
  if (names_.size() != sigma_.size()) throw std::invalid_argument("system: names and map sizes differ");
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) throw std::invalid_argument("system: duplicate point names");
  for (const auto& t : sigma_)
    if (t && *t >= sigma_.size()) throw std::invalid_argument("system: map sends a point outside the point set");

  std::vector<std::size_t> parent(size());
  std::iota(parent.begin(), parent.end(), 0);
  for (PointId x = 0; x < size(); ++x)
    if (sigma_[x]) parent[find_root(parent, x)] = find_root(parent, *sigma_[x]);
  comp_.resize(size());
  for (PointId x = 0; x < size(); ++x) comp_[x] = find_root(parent, x);

  orbit_.resize(size());
  tail_.assign(size(), 0);
  cycle_.assign(size(), 0);
  for (PointId x = 0; x < size(); ++x) {
    std::vector<std::size_t> index(size(), size());
    std::optional<PointId> cur = x;
    while (cur && index[*cur] == size()) {
      index[*cur] = orbit_[x].size();
      orbit_[x].push_back(*cur);
      cur = sigma_[*cur];
    }
    if (cur) {
      tail_[x] = index[*cur];
      cycle_[x] = orbit_[x].size() - tail_[x];
    }
  }

  stab_.resize(size());
  for (PointId x = 0; x < size(); ++x) {
    auto [c, on] = eventual_cycle(Unit{x, 0});
    StabInfo& st = stab_[x];
    st.stab = ZSubgroup{c};
    st.stab_ess = stab_ess(x);
    st.stab_min = c > 0 ? std::optional<Int>(c) : std::nullopt;
    st.on_cycle = on;
  }
}

std::optional<PointId> DRSystem::find(const std::string& n) const {
  for (PointId x = 0; x < size(); ++x)
    if (names_[x] == n) return x;
  return std::nullopt;
}

std::optional<PointId> DRSystem::iterate(PointId x, Int m) const {
  if (m < 0) throw std::invalid_argument("iterate: negative power");
  const auto& o = orbit_.at(x);
  if (static_cast<std::size_t>(m) < o.size()) return o[m];
  if (cycle_[x] == 0) return std::nullopt;
  return o[tail_[x] + (static_cast<std::size_t>(m) - tail_[x]) % cycle_[x]];
}

std::optional<Witness> DRSystem::member(PointId x, Int p, PointId y) const {
  if (x >= size() || y >= size()) return std::nullopt;
  const Int m0 = std::max<Int>(p, 0);
  const Int n0 = sub(m0, p);
  // After |X| steps both orbits are on their cycles and move in lockstep, so
  // a first meeting happens before then or never.
  for (Int j = 0; j <= static_cast<Int>(size()); ++j) {
    auto u = iterate(x, add(m0, j)), v = iterate(y, add(n0, j));
    if (!u || !v) return std::nullopt;
    if (*u == *v) return Witness{add(m0, j), add(n0, j)};
  }
  return std::nullopt;
}

std::optional<Unit> DRSystem::iterate(const Unit& u, Int m) const {
  if (!has_point(u)) return DRLike::iterate(u, m);
  auto x = iterate(u.point, m);
  if (!x) return std::nullopt;
  return Unit{*x, 0};
}

std::optional<Witness> DRSystem::member(const Unit& x, Int p, const Unit& y) const {
  if (!has_point(x) || !has_point(y)) return std::nullopt;
  return member(x.point, p, y.point);
}

ZSubgroup DRSystem::stab_ess(PointId x) const {
  // {m - n : sigma^m = sigma^n on an open neighbourhood of x}. The singleton
  // {x} is open and contained in every neighbourhood, so it realises the union.
  // Tails and cycles are shorter than |X|, so m, n <= 2|X| reach the generator.
  const Int limit = 2 * static_cast<Int>(size());
  std::vector<std::optional<PointId>> orbit(limit + 1);
  orbit[0] = x;
  for (Int i = 1; i <= limit; ++i) orbit[i] = orbit[i - 1] ? sigma_[*orbit[i - 1]] : std::nullopt;
  std::vector<Int> diffs;
  for (Int m = 0; m <= limit; ++m)
    for (Int n = 0; n <= limit; ++n)
      if (orbit[m] && orbit[n] && *orbit[m] == *orbit[n]) diffs.push_back(m - n);
  return subgroup_of_Z(diffs);
}

bool DRSystem::is_total() const {
  return std::all_of(sigma_.begin(), sigma_.end(), [](const auto& t) { return t.has_value(); });
}

bool DRSystem::is_surjective() const {
  std::vector<bool> hit(size(), false);
  for (const auto& t : sigma_)
    if (t) hit[*t] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

PointId DRSystem::perm_power(PointId x, Int n) const {
  if (!is_permutation()) throw std::invalid_argument("perm_power: map is not a permutation");
  const Int c = *stab(x).stab_min;
  Int r = mod_pos(n, c);
  PointId cur = x;
  for (Int i = 0; i < r; ++i) cur = *sigma_[cur];
  return cur;
}

std::optional<Unit> DRSystem::step(const Unit& u) const {
  if (u.level != 0 || u.point >= size()) return std::nullopt;
  auto t = sigma_[u.point];
  if (!t) return std::nullopt;
  return Unit{*t, 0};
}

std::vector<Unit> DRSystem::points(Int) const {
  std::vector<Unit> out;
  for (PointId x = 0; x < size(); ++x) out.push_back(Unit{x, 0});
  return out;
}

std::vector<std::size_t> DRSystem::component_ids() const {
  std::set<std::size_t> c(comp_.begin(), comp_.end());
  return {c.begin(), c.end()};
}

std::optional<Unit> StabilizedSystem::step(const Unit& u) const {
  if (!has_point(u)) return std::nullopt;
  if (u.level > 0) return Unit{u.point, u.level - 1};
  return base_->step(u);
}

std::vector<Unit> StabilizedSystem::points(Int bound) const {
  std::vector<Unit> out;
  for (PointId x = 0; x < base_->size(); ++x)
    for (Int n = 0; n <= bound; ++n) out.push_back(Unit{x, n});
  return out;
}

StabInfo StabilizedSystem::stab(const Unit& u) const {
  auto [c, on] = eventual_cycle(u);
  StabInfo st;
  st.stab = ZSubgroup{c};
  st.stab_ess = st.stab;
  st.stab_min = c > 0 ? std::optional<Int>(c) : std::nullopt;
  st.on_cycle = on;
  return st;
}

std::shared_ptr<StabilizedSystem> stabilize(DRSystemPtr s) { return std::make_shared<StabilizedSystem>(std::move(s)); }

DRGroupoid::DRGroupoid(std::shared_ptr<const DRLike> sys) : sys_(std::move(sys)) {}

bool DRGroupoid::contains(const Arrow& a) const { return sys_->member(a.range, a.tag, a.source).has_value(); }

Int DRGroupoid::complexity(const Arrow& a) const {
  auto w = sys_->member(a.range, a.tag, a.source);
  if (!w) throw std::invalid_argument("complexity: not an arrow");
  return std::max({w->m, w->n, a.range.level, a.source.level});
}

std::vector<Arrow> DRGroupoid::elements(Int bound) const {
  return memoized(bound, [&] {
    std::map<Unit, std::vector<std::pair<Unit, Int>>> landing;
    for (const Unit& u : sys_->points(bound)) {
      std::optional<Unit> cur = u;
      for (Int m = 0; m <= bound && cur; ++m) {
        landing[*cur].emplace_back(u, m);
        cur = sys_->step(*cur);
      }
    }
    std::set<Arrow> arrows;
    for (const auto& [v, list] : landing)
      for (const auto& [u, m] : list)
        for (const auto& [w, n] : list) arrows.insert(Arrow{u, m - n, w});
    std::vector<Arrow> out(arrows.begin(), arrows.end());
    sort_elements(*this, out);
    return out;
  });
}

std::optional<Arrow> DRGroupoid::connect(const Unit& r, const Unit& s) const {
  if (!sys_->has_point(r) || !sys_->has_point(s) || sys_->component(r) != sys_->component(s)) return std::nullopt;
  auto orb_r = orbit_list(*sys_, r);
  auto orb_s = orbit_list(*sys_, s);
  // Pad both orbits so that every witness with max(m, n) below the padded
  // length is visible.
  std::size_t len = orb_r.size() + orb_s.size();
  auto extend = [&](std::vector<Unit>& orb) {
    while (orb.size() < len) {
      auto nxt = sys_->step(orb.back());
      if (!nxt) break;
      orb.push_back(*nxt);
    }
  };
  extend(orb_r);
  extend(orb_s);
  std::optional<std::pair<Int, Int>> best;
  for (std::size_t m = 0; m < orb_r.size(); ++m)
    for (std::size_t n = 0; n < orb_s.size(); ++n)
      if (orb_r[m] == orb_s[n]) {
        std::pair<Int, Int> cand{static_cast<Int>(m), static_cast<Int>(n)};
        auto key = [](auto p) { return std::make_pair(std::max(p.first, p.second), p.first); };
        if (!best || key(cand) < key(*best)) best = cand;
      }
  if (!best) return std::nullopt;
  Arrow a{r, best->first - best->second, s};
  // A witness found here need not be minimal for its degree; membership fixes that.
  if (!contains(a)) return std::nullopt;
  return a;
}

json DRGroupoid::arrow_json(const Arrow& a) const {
  return json{{"x", sys_->point_json(a.range)}, {"p", a.tag}, {"y", sys_->point_json(a.source)}};
}

std::shared_ptr<DRGroupoid> dr_groupoid(DRSystemPtr s) { return std::make_shared<DRGroupoid>(std::move(s)); }

std::shared_ptr<DRGroupoid> dr_groupoid(std::shared_ptr<const StabilizedSystem> s) {
  return std::make_shared<DRGroupoid>(std::move(s));
}

Int l_X(const DRSystem& s, const Arrow& a) {
  auto w = s.member(a.range.point, a.tag, a.source.point);
  if (!w || a.range.level != 0 || a.source.level != 0) throw std::invalid_argument("l_X: not an arrow");
  return w->m;
}

ArrowMap iso_stabilized(DRSystemPtr) {
  ArrowMap m;
  m.name = "iso_stabilized";
  m.forward = [](const Arrow& a) -> std::optional<Arrow> {
    return Arrow{a.range, add(sub(a.tag, a.range.level), a.source.level), a.source};
  };
  m.inverse = [](const Arrow& a) -> std::optional<Arrow> {
    return Arrow{a.range, sub(add(a.tag, a.range.level), a.source.level), a.source};
  };
  return m;
}

Grading stabilized_degree_grading() {
  return Grading{"degree+m-n", Group::integers(),
                 [](const Arrow& a) { return GroupElem::integer(sub(add(a.tag, a.range.level), a.source.level)); }};
}

}  // namespace rigidity
