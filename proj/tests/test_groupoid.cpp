#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/actions.hpp"
#include "rigidity/catalogue.hpp"
#include "rigidity/dr.hpp"

using namespace rigidity;

namespace {

std::set<Arrow> as_set(const std::vector<Arrow>& v) { return {v.begin(), v.end()}; }

ArrowMap negate() {
  auto f = [](const Arrow& a) { return std::optional<Arrow>(Arrow{a.range, -a.tag, a.source}); };
  return ArrowMap{"negate", f, f};
}

// Units reachable from u by brute force: y ~ x iff some iterates meet.
bool reach(const oracle::Map& s, PointId x, PointId y) {
  const Int n = static_cast<Int>(s.size());
  for (Int m = 0; m <= 2 * n; ++m)
    for (Int k = 0; k <= 2 * n; ++k) {
      auto a = oracle::pow(s, x, m), b = oracle::pow(s, y, k);
      if (a && b && *a == *b) return true;
    }
  return false;
}

DRSystemPtr from_map(const oracle::Map& m) { return make_system(m); }

// The DR groupoid of the 3-cycle with the product of a degree-1 and a degree-2
// arrow shifted by 3. Products stay in the groupoid and units and inverses are
// untouched, but (1, 1, 1) is no longer associative.
class Skewed : public Groupoid {
 public:
  Skewed() : g_(dr_groupoid(three_cycle())) {}
  std::string kind() const override { return "skewed"; }
  bool leveled() const override { return false; }
  std::vector<Unit> units(Int b) const override { return g_->units(b); }
  bool has_unit(const Unit& u) const override { return g_->has_unit(u); }
  bool contains(const Arrow& a) const override { return g_->contains(a); }
  Int complexity(const Arrow& a) const override { return g_->complexity(a); }
  std::vector<Arrow> elements(Int b) const override { return g_->elements(b); }
  Arrow inverse(const Arrow& a) const override { return g_->inverse(a); }
  Arrow unit_arrow(const Unit& u) const override { return g_->unit_arrow(u); }
  std::optional<Arrow> connect(const Unit& r, const Unit& s) const override { return g_->connect(r, s); }
  std::size_t component(const Unit& u) const override { return g_->component(u); }
  std::vector<std::size_t> component_ids() const override { return g_->component_ids(); }
  json unit_json(const Unit& u) const override { return g_->unit_json(u); }
  json arrow_json(const Arrow& a) const override { return g_->arrow_json(a); }

 protected:
  Arrow compose_unchecked(const Arrow& a, const Arrow& b) const override {
    Arrow ab = g_->compose(a, b);
    if (a.tag == 1 && b.tag == 2) ab.tag += 3;
    return ab;
  }

 private:
  GroupoidPtr g_;
};

}  // namespace

TEST_CASE("elements") {
  auto g = dr_groupoid(three_cycle());
  auto e0 = g->elements(0);
  CHECK(e0.size() == 3);
  for (const auto& a : e0) CHECK(g->is_unit(a));
  auto e3 = as_set(g->elements(3));
  CHECK(e3.count(dr_arrow(0, 3, 0)));
  CHECK(e3.count(dr_arrow(0, -3, 0)));
  for (const auto& s : builtin_systems()) {
    auto gs = dr_groupoid(s.system);
    auto e = as_set(gs->elements(5));
    for (const auto& a : e) CHECK(e.count(gs->inverse(a)));
    CHECK(gs->elements(5) == gs->elements(5));
  }
}

TEST_CASE("compose and inverse") {
  auto g = dr_groupoid(three_cycle());
  CHECK(g->compose(dr_arrow(0, 1, 1), dr_arrow(1, 1, 2)) == dr_arrow(0, 2, 2));
  CHECK(g->inverse(dr_arrow(0, 1, 1)) == dr_arrow(1, -1, 0));
  CHECK_THROWS_AS(g->compose(dr_arrow(0, 1, 1), dr_arrow(2, 1, 0)), NotComposable);
  auto r = product_with_R(g);
  Arrow a = ProductWithR::lift(dr_arrow(0, 1, 1), 1, 2), b = ProductWithR::lift(dr_arrow(1, 1, 2), 2, 5);
  CHECK(r->compose(a, b) == ProductWithR::lift(dr_arrow(0, 2, 2), 1, 5));
  CHECK(r->inverse(a) == ProductWithR::lift(dr_arrow(1, -1, 0), 2, 1));
}

TEST_CASE("groupoid axioms on every variant") {
  std::vector<GroupoidPtr> gs{dr_groupoid(three_cycle()), dr_groupoid(funnel()), dr_groupoid(partial_system()),
                              dr_groupoid(stabilize(three_cycle())), product_with_R(dr_groupoid(funnel())),
                              restrict(dr_groupoid(six_cycle()), {{0, 0}, {2, 0}, {4, 0}}),
                              linking(dr_groupoid(six_cycle()), {{0, 0}, {1, 0}, {2, 0}}, {{3, 0}, {4, 0}, {5, 0}}),
                              transformation_groupoid(builtin_action("Klein-split"))};
  for (const auto& g : gs) {
    INFO(g->kind());
    CHECK(check_groupoid_axioms(*g, 4).pass);
  }
  for (Int b = 0; b <= 8; ++b) CHECK(check_groupoid_axioms(*dr_groupoid(funnel()), b).pass);
}

TEST_CASE("axiom check finds a non-associative triple") {
  Skewed g;
  // At bound 1 every product of the triple lies beyond the enumeration; from
  // bound 3 on all of them are enumerated.
  for (Int b = 1; b <= 6; ++b) {
    INFO(b);
    auto c = check_groupoid_axioms(g, b);
    CHECK_FALSE(c.pass);
    CHECK(c.witness["check"] == "associativity");
    CHECK(c.checks[0].pass);
    CHECK(c.checks[1].pass);
    CHECK(c.checks[2].pass);
  }
  CHECK(check_groupoid_axioms(g, 0).pass);
}

TEST_CASE("gradings are cocycles") {
  auto g = dr_groupoid(three_cycle());
  CHECK(check_cocycle(*g, degree_grading(), 8).pass);
  CHECK(check_cocycle(*g, trivial_grading(), 8).pass);
  auto r = product_with_R(g);
  CHECK(check_cocycle(*r, product_grading(degree_grading()), 5).pass);
  CHECK(check_cocycle(*r, stabilized_degree_grading(), 5).pass);
  Grading bad{"bad", Group::integers(), [](const Arrow& a) { return GroupElem::integer(a.tag * a.tag); }};
  auto c = check_cocycle(*g, bad, 3);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.witness.is_null());
}

TEST_CASE("product grading ignores the pair coordinate") {
  auto c = product_grading(degree_grading());
  CHECK(c.value(ProductWithR::lift(dr_arrow(0, 3, 0), 4, 7)) == GroupElem::integer(3));
  auto r = product_with_R(dr_groupoid(three_cycle()));
  auto units = r->units(2);
  CHECK(units.size() == 9);
}

TEST_CASE("is_full") {
  auto g3 = dr_groupoid(three_cycle());
  CHECK(is_full(*g3, {{0, 0}}));
  auto g22 = dr_groupoid(two_orbit_system());
  CHECK_FALSE(is_full(*g22, {{0, 0}, {1, 0}}));
  CHECK(is_full(*g22, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
}

TEST_CASE("is_full agrees with brute-force reachability") {
  std::mt19937 rng(515);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5;
    auto m = oracle::random_map(rng, n);
    auto g = dr_groupoid(from_map(m));
    std::set<Unit> u;
    std::vector<PointId> pts;
    for (PointId x = 0; x < n; ++x)
      if (rng() % 2) {
        u.insert({x, 0});
        pts.push_back(x);
      }
    bool expect = true;
    for (PointId y = 0; y < n; ++y)
      expect = expect && std::any_of(pts.begin(), pts.end(), [&](PointId x) { return reach(m, x, y); });
    CHECK(is_full(*g, u) == expect);
  }
}

TEST_CASE("restrict") {
  auto g3 = dr_groupoid(three_cycle());
  auto r = restrict(g3, {{0, 0}});
  for (const auto& a : r->elements(9)) CHECK(a.tag % 3 == 0);
  CHECK(as_set(r->elements(9)).count(dr_arrow(0, 6, 0)));
  auto all = restrict(g3, {{0, 0}, {1, 0}, {2, 0}});
  CHECK(all->elements(6) == g3->elements(6));
  auto ev = restrict(dr_groupoid(six_cycle()), {{0, 0}, {2, 0}, {4, 0}});
  CHECK(ev->component_ids().size() == 1);
  std::set<Int> iso;
  for (const auto& a : ev->elements(12))
    if (a.range == Unit{2, 0} && a.source == Unit{2, 0}) iso.insert(a.tag);
  CHECK(iso == std::set<Int>{-12, -6, 0, 6, 12});
}

TEST_CASE("restricting twice is restricting to the intersection") {
  auto g = dr_groupoid(cycles({2, 3}));
  std::mt19937 rng(77);
  for (int t = 0; t < 50; ++t) {
    std::set<Unit> u, v, both;
    for (PointId x = 0; x < 5; ++x) {
      bool a = rng() % 2, b = rng() % 2;
      if (a) u.insert({x, 0});
      if (b) v.insert({x, 0});
      if (a && b) both.insert({x, 0});
    }
    std::set<Unit> v_in_u;
    for (const auto& x : v)
      if (u.count(x)) v_in_u.insert(x);
    CHECK(restrict(restrict(g, u), v_in_u)->elements(6) == restrict(g, both)->elements(6));
  }
}

TEST_CASE("linking blocks") {
  auto g = dr_groupoid(six_cycle());
  std::set<Unit> k1{{0, 0}, {2, 0}, {4, 0}}, k2{{1, 0}, {3, 0}, {5, 0}};
  auto l = linking(g, k1, k2);
  std::size_t total = 0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) total += l->block(i, j, 6).size();
  CHECK(total == g->elements(6).size());
  std::set<Arrow> ops;
  for (const auto& z : l->bibundle(6)) ops.insert(l->op(z));
  CHECK(ops == as_set(l->block(2, 1, 6)));
  auto c = degree_grading();
  for (const auto& z : l->bibundle(6)) CHECK(c.value(l->op(z)).as_integer() == -c.value(z).as_integer());
  CHECK(l->block(1, 1, 6) == restrict(g, k1)->elements(6));
  CHECK_THROWS(linking(dr_groupoid(two_orbit_system()), {{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}));
  CHECK_THROWS(linking(g, k1, {{1, 0}}));
}

TEST_CASE("compose_equivalences") {
  auto g = dr_groupoid(six_cycle());
  std::set<Unit> k1{{0, 0}, {3, 0}}, k2{{1, 0}, {4, 0}}, k3{{2, 0}, {5, 0}};
  auto c = degree_grading();
  auto res = compose_equivalences(*g, k1, k2, k3, 6, &c);
  CHECK(res.certificate.pass);
  CHECK_FALSE(res.factorizations.empty());
  for (const auto& [w, z1, z2] : res.factorizations) {
    CHECK(g->compose(z1, z2) == w);
    CHECK(k1.count(w.range));
    CHECK(k3.count(w.source));
    CHECK(w.tag == z1.tag + z2.tag);
  }
  auto same = compose_equivalences(*g, k1, k1, k3, 6);
  CHECK(same.certificate.pass);
  CHECK(same.block13 == res.block13);
  CHECK_THROWS(compose_equivalences(*dr_groupoid(two_orbit_system()), {{0, 0}}, {{2, 0}}, {{1, 0}}, 4));
}

TEST_CASE("verify_iso") {
  auto s3 = dr_groupoid(three_cycle()), rev = dr_groupoid(reverse_three_cycle());
  auto id = [](const Arrow& a) { return std::optional<Arrow>(a); };
  CHECK(verify_iso(*s3, *s3, ArrowMap{"id", id, id}, 6).pass);
  auto c = degree_grading();
  CHECK(verify_iso(*s3, *rev, negate(), 6).pass);
  auto graded = verify_iso(*s3, *rev, negate(), 6, &c, &c);
  CHECK_FALSE(graded.pass);
  CHECK_FALSE(graded.witness.is_null());
  auto drop = [](const Arrow& a) { return a == dr_arrow(0, 3, 0) ? std::optional<Arrow>() : std::optional<Arrow>(a); };
  auto bad = verify_iso(*s3, *s3, ArrowMap{"drop", drop, {}}, 6);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.witness.is_null());
  // Sub-checks stop at the first failure.
  CHECK(bad.checks.size() == 1);
  CHECK(bad.witness["check"] == "defined");
}

TEST_CASE("VerdictOnly keeps verdicts and drops witnesses") {
  auto s3 = dr_groupoid(three_cycle()), rev = dr_groupoid(reverse_three_cycle());
  auto c = degree_grading();
  const auto full = verify_iso(*s3, *rev, negate(), 6, &c, &c);
  {
    VerdictOnly verdicts;
    const auto quiet = verify_iso(*s3, *rev, negate(), 6, &c, &c);
    CHECK(quiet.pass == full.pass);
    CHECK(quiet.witness.is_null());
    CHECK(quiet.checks.size() == full.checks.size());
    CHECK(verify_iso(*s3, *rev, negate(), 6).pass);
    CHECK_FALSE(check_groupoid_axioms(Skewed(), 3).pass);
  }
  CHECK_FALSE(VerdictOnly::active());
  CHECK_FALSE(verify_iso(*s3, *rev, negate(), 6, &c, &c).witness.is_null());
}
