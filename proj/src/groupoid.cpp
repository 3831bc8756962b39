#include "rigidity/groupoid.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace rigidity {

namespace {

json elem_json(const Group& g, const GroupElem& e) {
  if (e.is_index()) return g.is_finite() && e.idx() < g.order() ? json(g.element_name(e.idx())) : json(e.idx());
  if (e.coords().size() == 1) return e.coords()[0];
  return e.coords();
}

std::unordered_map<Unit, std::vector<std::size_t>> index_by_range(const std::vector<Arrow>& arrows) {
  std::unordered_map<Unit, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < arrows.size(); ++i) out[arrows[i].range].push_back(i);
  return out;
}

}  // namespace

Arrow Groupoid::compose(const Arrow& a, const Arrow& b) const {
  if (a.source != b.range) throw NotComposable("arrows are not composable: s(a) != r(b)");
  return compose_unchecked(a, b);
}

std::vector<Arrow> Groupoid::memoized(Int bound, const std::function<std::vector<Arrow>()>& make) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(bound);
    if (it != memo_.end()) return it->second;
  }
  auto out = make();
  std::lock_guard lock(memo_mutex_);
  return memo_.emplace(bound, std::move(out)).first->second;
}

void Groupoid::sort_elements(const Groupoid& g, std::vector<Arrow>& arrows) {
  std::vector<std::pair<Int, Arrow>> keyed;
  keyed.reserve(arrows.size());
  for (const auto& a : arrows) keyed.emplace_back(g.complexity(a), a);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  arrows.clear();
  for (auto& [c, a] : keyed) arrows.push_back(a);
}

json arrow_pair_json(const Groupoid& g, const Arrow& a, const Arrow& b) {
  return json::array({g.arrow_json(a), g.arrow_json(b)});
}

Grading trivial_grading() {
  Group t = Group::trivial();
  return Grading{"trivial", t, [](const Arrow&) { return GroupElem::index(0); }};
}

Grading degree_grading() {
  return Grading{"degree", Group::integers(), [](const Arrow& a) { return GroupElem::integer(a.tag); }};
}

Grading product_grading(const Grading& base) {
  auto value = base.value;
  return Grading{base.name + "-bar", base.target, [value](const Arrow& a) { return value(ProductWithR::base(a)); }};
}

Certificate check_cocycle(const Groupoid& g, const Grading& c, Int bound) {
  Certificate cert("cocycle:" + c.name, bound);
  auto e = g.elements(bound);
  auto by_range = index_by_range(e);
  for (const auto& a : e) {
    auto it = by_range.find(a.source);
    if (it == by_range.end()) continue;
    for (std::size_t j : it->second) {
      const Arrow& b = e[j];
      Arrow ab = g.compose(a, b);
      if (c.value(ab) != c.target.mul(c.value(a), c.value(b))) {
        cert.fail_with([&] {
          return json{{"pair", arrow_pair_json(g, a, b)},
                      {"c(ab)", elem_json(c.target, c.value(ab))},
                      {"c(a)c(b)", elem_json(c.target, c.target.mul(c.value(a), c.value(b)))}};
        });
        return cert;
      }
    }
  }
  return cert;
}

Certificate check_groupoid_axioms(const Groupoid& g, Int bound) {
  Certificate cert("groupoid_axioms", bound);
  const auto e = g.elements(bound);
  constexpr std::size_t npos = -1;
  std::unordered_map<Arrow, std::size_t> index;
  for (std::size_t i = 0; i < e.size(); ++i) index.emplace(e[i], i);
  auto by_range = index_by_range(e);
  // right[i]: arrows composable on the right of e[i]; pos[j]: place of e[j] in
  // the list of its range, so that e[i] e[j] sits at product[offset[i] + pos[j]].
  static const std::vector<std::size_t> none;
  std::vector<const std::vector<std::size_t>*> right(e.size(), &none);
  std::vector<std::size_t> pos(e.size()), offset(e.size() + 1, 0);
  for (const auto& [u, list] : by_range)
    for (std::size_t k = 0; k < list.size(); ++k) pos[list[k]] = k;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (auto it = by_range.find(e[i].source); it != by_range.end()) right[i] = &it->second;
    offset[i + 1] = offset[i] + right[i]->size();
  }
  // Index in e of each product of enumerated arrows, npos when it lies beyond the bound.
  std::vector<std::size_t> product(offset.back(), npos);

  Certificate inv("inverse_laws", bound);
  Certificate unit("unit_laws", bound);
  Certificate closure("closure", bound);
  Certificate assoc("associativity", bound);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Arrow& a = e[i];
    Arrow ai = g.inverse(a);
    if (!index.count(ai) && inv.pass)
      inv.fail_with([&] { return json{{"arrow", g.arrow_json(a)}, {"reason", "inverse outside enumeration"}}; });
    if (inv.pass && (g.compose(a, ai) != g.unit_arrow(a.range) || g.compose(ai, a) != g.unit_arrow(a.source)))
      inv.fail_with([&] { return json{{"arrow", g.arrow_json(a)}}; });
    if (unit.pass && (g.compose(g.unit_arrow(a.range), a) != a || g.compose(a, g.unit_arrow(a.source)) != a))
      unit.fail_with([&] { return json{{"arrow", g.arrow_json(a)}}; });
    for (std::size_t j : *right[i]) {
      const Arrow& b = e[j];
      Arrow ab = g.compose(a, b);
      if (closure.pass && (!g.contains(ab) || ab.range != a.range || ab.source != b.source))
        closure.fail_with([&] { return json{{"pair", arrow_pair_json(g, a, b)}}; });
      if (auto it = index.find(ab); it != index.end()) product[offset[i] + pos[j]] = it->second;
    }
  }
  if (closure.pass) {
    // Products found in the table are compared by index, the rest as arrows.
    for (std::size_t i = 0; i < e.size() && assoc.pass; ++i)
      for (std::size_t j : *right[i]) {
        const std::size_t ab = product[offset[i] + pos[j]];
        const Arrow ab_arrow = ab != npos ? e[ab] : g.compose(e[i], e[j]);
        for (std::size_t k : *right[j]) {
          const std::size_t bc = product[offset[j] + pos[k]];
          const std::size_t lhs = ab != npos ? product[offset[ab] + pos[k]] : npos;
          const std::size_t rhs = bc != npos ? product[offset[i] + pos[bc]] : npos;
          bool same;
          if (lhs != npos && rhs != npos) {
            same = lhs == rhs;
          } else {
            const Arrow l = lhs != npos ? e[lhs] : g.compose(ab_arrow, e[k]);
            const Arrow r = rhs != npos ? e[rhs] : g.compose(e[i], bc != npos ? e[bc] : g.compose(e[j], e[k]));
            same = l == r;
          }
          if (!same) {
            assoc.fail_with([&] {
              return json{{"triple", json::array({g.arrow_json(e[i]), g.arrow_json(e[j]), g.arrow_json(e[k])})}};
            });
            break;
          }
        }
        if (!assoc.pass) break;
      }
  } else {
    assoc.fail_with([] { return json{{"reason", "not checked: products leave the groupoid"}}; });
  }
  cert.detail = json{{"arrows", e.size()}};
  cert.add(std::move(closure));
  cert.add(std::move(inv));
  cert.add(std::move(unit));
  cert.add(std::move(assoc));
  return cert;
}

std::vector<std::pair<Arrow, Arrow>> ArrowMap::tabulate(const Groupoid& g, Int bound) const {
  std::vector<std::pair<Arrow, Arrow>> out;
  for (const auto& a : g.elements(bound))
    if (auto b = forward(a)) out.emplace_back(a, *b);
  return out;
}

ArrowMap ArrowMap::from_table(std::map<Arrow, Arrow> table, std::string name) {
  auto t = std::make_shared<std::map<Arrow, Arrow>>(std::move(table));
  ArrowMap m;
  m.name = std::move(name);
  m.forward = [t](const Arrow& a) -> std::optional<Arrow> {
    auto it = t->find(a);
    if (it == t->end()) return std::nullopt;
    return it->second;
  };
  return m;
}

Certificate verify_iso(const Groupoid& g1, const Groupoid& g2, const ArrowMap& m, Int bound, const Grading* c1,
                       const Grading* c2, std::optional<Int> preimage_bound) {
  Certificate cert("verify_iso", bound);
  if (!m.name.empty()) cert.detail = json{{"map", m.name}};
  const auto e1 = g1.elements(bound);
  std::vector<std::optional<Arrow>> img(e1.size());

  Certificate defined("defined", bound);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    img[i] = m.forward(e1[i]);
    if (!img[i]) {
      defined.fail_with([&] { return json{{"arrow", g1.arrow_json(e1[i])}, {"reason", "map undefined"}}; });
    } else if (!g2.contains(*img[i])) {
      defined.fail_with([&] {
        return json{{"arrow", g1.arrow_json(e1[i])},
                    {"image", g2.arrow_json(*img[i])},
                    {"reason", "image is not an arrow of the target"}};
      });
      img[i].reset();
    }
  }

  cert.add(std::move(defined));
  if (!cert.pass) return cert;

  Certificate units("unit_bijection", bound);
  std::map<Unit, Unit> unit_image;
  {
    std::map<Unit, Unit> back;
    for (const Unit& u : g1.units(bound)) {
      auto fu = m.forward(g1.unit_arrow(u));
      if (!fu || !g2.contains(*fu) || !g2.is_unit(*fu)) {
        units.fail_with([&] { return json{{"unit", g1.unit_json(u)}, {"reason", "unit not sent to a unit"}}; });
        continue;
      }
      auto [it, fresh] = back.emplace(fu->range, u);
      if (!fresh) {
        units.fail_with([&] {
          return json{{"units", json::array({g1.unit_json(it->second), g1.unit_json(u)})},
                      {"reason", "two units with the same image"}};
        });
      }
      unit_image[u] = fu->range;
    }
    std::set<Unit> reached;
    if (!m.inverse && preimage_bound && *preimage_bound > bound) {
      for (const Unit& u : g1.units(*preimage_bound))
        if (auto fu = m.forward(g1.unit_arrow(u))) reached.insert(fu->range);
    } else {
      for (auto& [v, u] : back) reached.insert(v);
    }
    for (const Unit& v : g2.units(bound)) {
      bool hit;
      if (m.inverse) {
        auto p = m.inverse(g2.unit_arrow(v));
        hit = p && g1.contains(*p) && g1.is_unit(*p) && m.forward(*p) == std::optional<Arrow>(g2.unit_arrow(v));
      } else {
        hit = reached.count(v) > 0;
      }
      if (!hit) units.fail_with([&] { return json{{"unit", g2.unit_json(v)}, {"reason", "target unit not reached"}}; });
    }
  }

  cert.add(std::move(units));
  if (!cert.pass) return cert;

  Certificate inj("injective", bound);
  {
    std::unordered_map<Arrow, std::size_t> seen;
    for (std::size_t i = 0; i < e1.size() && inj.pass; ++i) {
      if (!img[i]) continue;
      auto [it, fresh] = seen.emplace(*img[i], i);
      if (!fresh) {
        inj.fail_with([&] {
          return json{{"pair", arrow_pair_json(g1, e1[it->second], e1[i])}, {"image", g2.arrow_json(*img[i])}};
        });
      } else if (m.inverse) {
        auto back = m.inverse(*img[i]);
        if (!back || *back != e1[i])
          inj.fail_with([&] {
            return json{{"arrow", g1.arrow_json(e1[i])},
                        {"image", g2.arrow_json(*img[i])},
                        {"reason", "inverse rule does not return the arrow"}};
          });
      }
    }
  }

  cert.add(std::move(inj));
  if (!cert.pass) return cert;

  Certificate surj("surjective", bound);
  {
    const auto e2 = g2.elements(bound);
    std::unordered_set<Arrow> image;
    if (!m.inverse) {
      if (preimage_bound && *preimage_bound > bound) {
        for (const auto& a : g1.elements(*preimage_bound))
          if (auto b = m.forward(a)) image.insert(*b);
      } else {
        for (const auto& b : img)
          if (b) image.insert(*b);
      }
    }
    for (const auto& d : e2) {
      bool hit;
      if (m.inverse) {
        auto p = m.inverse(d);
        hit = p && g1.contains(*p) && m.forward(*p) == std::optional<Arrow>(d);
      } else {
        hit = image.count(d) > 0;
      }
      if (!hit) {
        surj.fail_with([&] { return json{{"arrow", g2.arrow_json(d)}, {"reason", "no preimage"}}; });
        break;
      }
    }
  }

  cert.add(std::move(surj));
  if (!cert.pass) return cert;

  Certificate hom("homomorphism", bound);
  {
    auto by_range = index_by_range(e1);
    auto unit_of = [&](const Unit& u) -> std::optional<Unit> {
      auto it = unit_image.find(u);
      if (it != unit_image.end()) return it->second;
      auto fu = m.forward(g1.unit_arrow(u));
      if (!fu) return std::nullopt;
      return fu->range;
    };
    for (std::size_t i = 0; i < e1.size() && hom.pass; ++i) {
      if (!img[i]) continue;
      const Arrow& a = e1[i];
      const Arrow& fa = *img[i];
      if (std::optional<Unit>(fa.range) != unit_of(a.range) || std::optional<Unit>(fa.source) != unit_of(a.source)) {
        hom.fail_with([&] {
          return json{
              {"arrow", g1.arrow_json(a)}, {"image", g2.arrow_json(fa)}, {"reason", "range/source not respected"}};
        });
        break;
      }
      auto fi = m.forward(g1.inverse(a));
      if (!fi || *fi != g2.inverse(fa)) {
        hom.fail_with([&] { return json{{"arrow", g1.arrow_json(a)}, {"reason", "inverse not preserved"}}; });
        break;
      }
      auto it = by_range.find(a.source);
      if (it == by_range.end()) continue;
      for (std::size_t j : it->second) {
        if (!img[j]) continue;
        const Arrow& b = e1[j];
        Arrow ab = g1.compose(a, b);
        auto fab = m.forward(ab);
        if (!fab) {
          if (g1.complexity(ab) <= bound) {
            hom.fail_with(
                [&] { return json{{"pair", arrow_pair_json(g1, a, b)}, {"reason", "map undefined on product"}}; });
            break;
          }
          continue;
        }
        if (fa.source != img[j]->range || g2.compose(fa, *img[j]) != *fab) {
          hom.fail_with(
              [&] { return json{{"pair", arrow_pair_json(g1, a, b)}, {"image_of_product", g2.arrow_json(*fab)}}; });
          break;
        }
      }
    }
  }

  cert.add(std::move(hom));
  if (!cert.pass) return cert;

  if (c1 && c2) {
    Certificate grad("grading:" + c1->name + "->" + c2->name, bound);
    for (std::size_t i = 0; i < e1.size(); ++i) {
      if (!img[i]) continue;
      GroupElem v1 = c1->value(e1[i]);
      GroupElem v2 = c2->value(*img[i]);
      if (v1 != v2) {
        grad.fail_with([&] {
          return json{{"arrow", g1.arrow_json(e1[i])},
                      {"image", g2.arrow_json(*img[i])},
                      {"c1", elem_json(c1->target, v1)},
                      {"c2", elem_json(c2->target, v2)}};
        });
        break;
      }
    }
    cert.add(std::move(grad));
  }
  return cert;
}

bool is_full(const Groupoid& g, const std::set<Unit>& u) {
  std::set<std::size_t> hit;
  for (const Unit& x : u) {
    if (!g.has_unit(x)) throw std::invalid_argument("is_full: not a unit of the groupoid");
    hit.insert(g.component(x));
  }
  for (std::size_t c : g.component_ids())
    if (!hit.count(c)) return false;
  return true;
}

RestrictedGroupoid::RestrictedGroupoid(GroupoidPtr parent, std::set<Unit> units)
    : parent_(std::move(parent)), units_(std::move(units)) {
  for (const Unit& u : units_)
    if (!parent_->has_unit(u))
      throw std::invalid_argument("restrict: unit subset is not contained in the parent units");
}

std::vector<Unit> RestrictedGroupoid::units(Int bound) const {
  std::vector<Unit> out;
  for (const Unit& u : units_)
    if (u.level <= bound) out.push_back(u);
  return out;
}

bool RestrictedGroupoid::contains(const Arrow& a) const {
  return units_.count(a.range) && units_.count(a.source) && parent_->contains(a);
}

std::vector<Arrow> RestrictedGroupoid::elements(Int bound) const {
  std::vector<Arrow> out;
  for (const auto& a : parent_->elements(bound))
    if (units_.count(a.range) && units_.count(a.source)) out.push_back(a);
  return out;
}

std::optional<Arrow> RestrictedGroupoid::connect(const Unit& r, const Unit& s) const {
  if (!units_.count(r) || !units_.count(s)) return std::nullopt;
  return parent_->connect(r, s);
}

std::vector<std::size_t> RestrictedGroupoid::component_ids() const {
  std::set<std::size_t> c;
  for (const Unit& u : units_) c.insert(parent_->component(u));
  return {c.begin(), c.end()};
}

std::shared_ptr<RestrictedGroupoid> restrict(GroupoidPtr g, std::set<Unit> u) {
  return std::make_shared<RestrictedGroupoid>(std::move(g), std::move(u));
}

ProductWithR::ProductWithR(GroupoidPtr parent) : parent_(std::move(parent)) {
  if (parent_->leveled()) throw std::invalid_argument("product_with_R: parent units must be unleveled");
}

std::vector<Unit> ProductWithR::units(Int bound) const {
  std::vector<Unit> out;
  for (const Unit& u : parent_->units(bound))
    for (Int n = 0; n <= bound; ++n) out.push_back(Unit{u.point, n});
  return out;
}

bool ProductWithR::has_unit(const Unit& u) const { return u.level >= 0 && parent_->has_unit(Unit{u.point, 0}); }

bool ProductWithR::contains(const Arrow& a) const {
  return a.range.level >= 0 && a.source.level >= 0 && parent_->contains(base(a));
}

Int ProductWithR::complexity(const Arrow& a) const {
  return std::max({parent_->complexity(base(a)), a.range.level, a.source.level});
}

std::vector<Arrow> ProductWithR::elements(Int bound) const {
  return memoized(bound, [&] {
    std::vector<Arrow> out;
    for (const auto& g : parent_->elements(bound))
      for (Int m = 0; m <= bound; ++m)
        for (Int n = 0; n <= bound; ++n) out.push_back(lift(g, m, n));
    sort_elements(*this, out);
    return out;
  });
}

Arrow ProductWithR::inverse(const Arrow& a) const {
  return lift(parent_->inverse(base(a)), a.source.level, a.range.level);
}

Arrow ProductWithR::unit_arrow(const Unit& u) const {
  return lift(parent_->unit_arrow(Unit{u.point, 0}), u.level, u.level);
}

Arrow ProductWithR::compose_unchecked(const Arrow& a, const Arrow& b) const {
  return lift(parent_->compose(base(a), base(b)), a.range.level, b.source.level);
}

std::optional<Arrow> ProductWithR::connect(const Unit& r, const Unit& s) const {
  auto g = parent_->connect(Unit{r.point, 0}, Unit{s.point, 0});
  if (!g) return std::nullopt;
  return lift(*g, r.level, s.level);
}

json ProductWithR::unit_json(const Unit& u) const {
  return json{{"unit", parent_->unit_json(Unit{u.point, 0})}, {"n", u.level}};
}

json ProductWithR::arrow_json(const Arrow& a) const {
  return json{{"arrow", parent_->arrow_json(base(a))}, {"R", json::array({a.range.level, a.source.level})}};
}

std::shared_ptr<ProductWithR> product_with_R(GroupoidPtr g) { return std::make_shared<ProductWithR>(std::move(g)); }

LinkingGroupoid::LinkingGroupoid(GroupoidPtr parent, std::set<Unit> k1, std::set<Unit> k2)
    : parent_(std::move(parent)), k1_(std::move(k1)), k2_(std::move(k2)) {
  if (parent_->leveled()) throw std::invalid_argument("linking: the unit space must be finite");
  std::set<Unit> all;
  for (const Unit& u : parent_->units(0)) all.insert(u);
  std::set<Unit> cover;
  for (const Unit& u : k1_) {
    if (k2_.count(u)) throw std::invalid_argument("linking: K1 and K2 intersect");
    cover.insert(u);
  }
  cover.insert(k2_.begin(), k2_.end());
  if (cover != all) throw std::invalid_argument("linking: K1 and K2 do not cover the units");
  if (!is_full(*parent_, k1_)) throw std::invalid_argument("linking: K1 is not full");
  if (!is_full(*parent_, k2_)) throw std::invalid_argument("linking: K2 is not full");
}

json LinkingGroupoid::arrow_json(const Arrow& a) const {
  auto [i, j] = block_of(a);
  return json{{"arrow", parent_->arrow_json(a)}, {"block", json::array({i, j})}};
}

std::vector<Arrow> LinkingGroupoid::block(int i, int j, Int bound) const {
  std::vector<Arrow> out;
  for (const auto& a : parent_->elements(bound))
    if (side(a.range) == i && side(a.source) == j) out.push_back(a);
  return out;
}

std::shared_ptr<LinkingGroupoid> linking(GroupoidPtr g, std::set<Unit> k1, std::set<Unit> k2) {
  return std::make_shared<LinkingGroupoid>(std::move(g), std::move(k1), std::move(k2));
}

EquivalenceComposition compose_equivalences(const Groupoid& g, const std::set<Unit>& k1, const std::set<Unit>& k2,
                                            const std::set<Unit>& k3, Int bound, const Grading* c) {
  for (const auto* k : {&k1, &k2, &k3})
    if (!is_full(g, *k)) throw std::invalid_argument("compose_equivalences: subset is not full");
  EquivalenceComposition out;
  out.certificate = Certificate("compose_equivalences", bound);
  auto e = g.elements(bound);
  std::vector<Arrow> z1, z2;
  for (const auto& a : e) {
    if (k1.count(a.range) && k3.count(a.source)) out.block13.push_back(a);
    if (k1.count(a.range) && k2.count(a.source)) z1.push_back(a);
    if (k2.count(a.range) && k3.count(a.source)) z2.push_back(a);
  }
  auto by_range = index_by_range(z2);

  Certificate products("products_in_block", bound);
  Certificate grades("product_grades", bound);
  for (const auto& a : z1) {
    auto it = by_range.find(a.source);
    if (it == by_range.end()) continue;
    for (std::size_t j : it->second) {
      Arrow w = g.compose(a, z2[j]);
      if (products.pass && !(k1.count(w.range) && k3.count(w.source) && g.contains(w)))
        products.fail_with([&] { return json{{"pair", arrow_pair_json(g, a, z2[j])}}; });
      if (c && grades.pass && c->value(w) != c->target.mul(c->value(a), c->value(z2[j])))
        grades.fail_with([&] { return json{{"pair", arrow_pair_json(g, a, z2[j])}}; });
    }
  }

  Certificate factor("factorization", bound);
  for (const auto& w : out.block13) {
    std::optional<Arrow> best;
    for (const Unit& k : k2) {
      auto cand = g.connect(k, w.source);
      if (cand && (!best || g.complexity(*cand) < g.complexity(*best))) best = cand;
    }
    if (!best) {
      factor.fail_with([&] { return json{{"arrow", g.arrow_json(w)}, {"reason", "no arrow from K2"}}; });
      continue;
    }
    Arrow b = *best;
    Arrow a = g.compose(w, g.inverse(b));
    if (!(k1.count(a.range) && k2.count(a.source)) || g.compose(a, b) != w) {
      factor.fail_with([&] { return json{{"arrow", g.arrow_json(w)}}; });
      continue;
    }
    if (c && grades.pass && c->value(w) != c->target.mul(c->value(a), c->value(b)))
      grades.fail_with([&] { return json{{"arrow", g.arrow_json(w)}}; });
    out.factorizations.push_back({w, a, b});
  }
  out.certificate.add(std::move(products));
  out.certificate.add(std::move(factor));
  if (c) out.certificate.add(std::move(grades));
  return out;
}

}  // namespace rigidity
