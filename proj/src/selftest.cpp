#include "rigidity/selftest.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "rigidity/actions.hpp"
#include "rigidity/catalogue.hpp"
#include "rigidity/coe.hpp"
#include "rigidity/equivalence.hpp"
#include "rigidity/flip.hpp"
#include "rigidity/tsc.hpp"
#include "rigidity/weyl.hpp"

namespace rigidity {

bool SelftestReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelfCheck& c) { return c.pass; });
}

json SelftestReport::to_json() const {
  json list = json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.is_null()) j["detail"] = c.detail;
    list.push_back(j);
    failed += !c.pass;
  }
  return json{{"pass", pass()}, {"total", checks.size()}, {"failed", failed}, {"checks", list}};
}

namespace {

class Runner {
 public:
  void check(const std::string& name, const std::function<bool()>& f) {
    SelfCheck c{name};
    try {
      c.pass = f();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = json{{"exception", e.what()}};
    }
    report.checks.push_back(std::move(c));
  }
  SelftestReport report;
};

ArrowMap negate_degree() {
  auto f = [](const Arrow& a) { return std::optional<Arrow>(Arrow{a.range, -a.tag, a.source}); };
  return ArrowMap{"negate", f, f};
}

ArrowMap identity_arrows() {
  auto f = [](const Arrow& a) { return std::optional<Arrow>(a); };
  return ArrowMap{"identity", f, f};
}

COEData constant_coe(const DRSystem& s, Int l, Int k) {
  COEData d;
  for (PointId x = 0; x < s.size(); ++x) d.h.push_back(x);
  d.l.assign(s.size(), l);
  d.k.assign(s.size(), k);
  d.lp = d.l;
  d.kp = d.k;
  return d;
}

bool contains_all(const std::vector<Arrow>& e, std::initializer_list<Arrow> want) {
  return std::all_of(want.begin(), want.end(),
                     [&](const Arrow& a) { return std::find(e.begin(), e.end(), a) != e.end(); });
}

// Grading c on G(S) agrees with f(c_X) on elements(bound).
bool grading_is(const Groupoid& g, const Grading& c, Int bound, Int sign) {
  for (const auto& a : g.elements(bound))
    if (c.value(a).as_integer() != sign * a.tag) return false;
  return true;
}

void dr_checks(Runner& r) {
  auto s3 = three_cycle(), fun = funnel(), s6 = six_cycle();
  auto g3 = dr_groupoid(s3);
  r.check("dr/elements/three-cycle-bound-3",
          [&] { return contains_all(g3->elements(3), {dr_arrow(0, 3, 0), dr_arrow(0, -3, 0)}); });
  r.check("groupoid/full/three-cycle-single-point", [&] { return is_full(*g3, {{0, 0}}); });
  r.check("groupoid/full/two-cycles-one-side",
          [&] { return !is_full(*dr_groupoid(two_orbit_system()), {{0, 0}, {1, 0}}); });
  r.check("groupoid/restrict/three-cycle-at-0", [&] {
    auto rg = restrict(g3, {{0, 0}});
    auto e = rg->elements(9);
    bool multiples = std::all_of(e.begin(), e.end(), [](const Arrow& a) { return a.tag % 3 == 0; });
    return multiples && contains_all(e, {dr_arrow(0, 0, 0), dr_arrow(0, 3, 0), dr_arrow(0, -6, 0)});
  });
  r.check("groupoid/restrict/six-cycle-evens", [&] {
    auto rg = restrict(dr_groupoid(s6), {{0, 0}, {2, 0}, {4, 0}});
    for (PointId x : {0, 2, 4})
      for (PointId y : {0, 2, 4})
        if (!rg->connect({x, 0}, {y, 0})) return false;
    std::set<Int> iso;
    for (const auto& a : rg->elements(12))
      if (a.range == Unit{0, 0} && a.source == Unit{0, 0}) iso.insert(a.tag);
    return iso == std::set<Int>{-12, -6, 0, 6, 12};
  });
  r.check("groupoid/verify-iso/negation-ungraded-and-graded", [&] {
    auto gr = dr_groupoid(reverse_three_cycle());
    Grading c = degree_grading();
    bool ungraded = verify_iso(*g3, *gr, negate_degree(), 6).pass;
    Certificate graded = verify_iso(*g3, *gr, negate_degree(), 6, &c, &c);
    return ungraded && !graded.pass && !graded.witness.is_null();
  });
  r.check("dr/stab/three-cycle", [&] {
    const auto& st = s3->stab(0);
    return st.stab.generator == 3 && st.stab_min == std::optional<Int>(3) && st.on_cycle;
  });
  r.check("dr/stab/funnel-tail", [&] {
    const auto& st = fun->stab(*fun->find("a"));
    return st.stab.generator == 1 && !st.on_cycle;
  });
  r.check("dr/member/three-cycle-return", [&] { return s3->member(0, 3, 0) == std::optional<Witness>(Witness{3, 0}); });
  const PointId a = *fun->find("a"), c = *fun->find("c");
  r.check("dr/member/funnel", [&] { return fun->member(a, -1, c) == std::optional<Witness>(Witness{1, 2}); });
  r.check("dr/lX/three-cycle", [&] { return l_X(*s3, dr_arrow(0, 3, 0)) == 3; });
  r.check("dr/lX/funnel", [&] { return l_X(*fun, dr_arrow(a, -1, c)) == 1; });
  r.check("dr/stabilised/stab-constant-in-level", [&] {
    auto st = stabilize(s3);
    for (PointId x = 0; x < 3; ++x)
      for (Int n = 0; n <= 5; ++n)
        if (st->stab(Unit{x, n}).stab != s3->stab(x).stab) return false;
    return true;
  });
}

void coe_checks(Runner& r, std::mt19937& rng) {
  auto s3 = three_cycle(), rev = reverse_three_cycle();
  const COEData flip = constant_coe(*s3, 0, 1), ident = constant_coe(*s3, 1, 0);
  r.check("coe/iterate-sum/additive", [&] {
    for (int t = 0; t < 50; ++t) {
      auto s = cycles({1 + rng() % 3, 1 + rng() % 3});
      Transfer f(s->size());
      for (auto& v : f) v = static_cast<Int>(rng() % 5);
      const PointId x = rng() % s->size();
      const Int m = rng() % 6, n = rng() % 6;
      if (iterate_sum(*s, f, m + n, x) != iterate_sum(*s, f, m, x) + iterate_sum(*s, f, n, *s->iterate(x, m)))
        return false;
    }
    return true;
  });
  r.check("coe/verify/three-cycle-to-reverse", [&] { return verify_coe(*s3, *rev, flip).pass; });
  r.check("coe/preserves-stab/three-cycle-to-reverse", [&] { return preserves_stab(*s3, *rev, flip).pass; });
  r.check("coe/cocycle/identity-is-degree", [&] {
    auto res = cocycle_of(s3, ident, 6);
    return res.certificate.pass && grading_is(*dr_groupoid(s3), res.grading, 6, 1);
  });
  r.check("coe/cocycle/reverse-is-negated-degree", [&] {
    auto res = cocycle_of(s3, flip, 6);
    return res.certificate.pass && grading_is(*dr_groupoid(s3), res.grading, 6, -1);
  });
  r.check("coe/theta/reverse-negates-degree", [&] {
    auto m = theta(s3, rev, flip);
    for (const auto& g : dr_groupoid(s3)->elements(6))
      if (m(g) != std::optional<Arrow>(Arrow{g.range, -g.tag, g.source})) return false;
    return true;
  });
  r.check("coe/pi/identity", [&] {
    auto p = pi_x(*s3, ident);
    return p.orbits.size() == 1 && p.orbits[0].generator == 3 && p.orbits[0].image == 3;
  });
  r.check("coe/pi/reverse", [&] {
    auto p = pi_x(*s3, flip);
    return p.orbits.size() == 1 && p.orbits[0].image == -3;
  });
  r.check("coe/extract/identity", [&] {
    COEData d = extract_coe(s3, s3, identity_arrows(), 6);
    return d.h == ident.h && d.l == ident.l && d.k == ident.k;
  });
  r.check("coe/extract/negation", [&] {
    COEData d = extract_coe(s3, rev, negate_degree(), 6);
    return d.l == flip.l && d.k == flip.k;
  });
  r.check("coe/extract/round-trip", [&] {
    COEData d = extract_coe(s3, rev, negate_degree(), 6);
    auto m = theta(s3, rev, d);
    for (const auto& g : dr_groupoid(s3)->elements(6))
      if (m(g) != negate_degree()(g)) return false;
    return true;
  });
  r.check("coe/evconj/matches-grading", [&] {
    Grading c = degree_grading();
    for (const auto& [t, d] : {std::pair{s3, ident}, std::pair{rev, flip}}) {
      bool graded = verify_iso(*dr_groupoid(s3), *dr_groupoid(t), theta(s3, t, d), 6, &c, &c).pass;
      if (graded != is_eventual_conjugacy(*s3, *t, d)) return false;
    }
    return is_eventual_conjugacy(*s3, *s3, ident) && !is_eventual_conjugacy(*s3, *rev, flip);
  });
  r.check("coe/search/three-cycle-to-reverse", [&] {
    auto d = search_coe(*s3, *rev, std::nullopt, Require::Stab);
    return d && verify_coe(*s3, *rev, *d).pass && preserves_stab(*s3, *rev, *d).pass;
  });
  r.check("coe/search/three-vs-four-cycle", [&] { return !search_coe(*s3, *cycle(4), std::nullopt, Require::Stab); });
}

void tsc_checks(Runner& r, std::mt19937& rng) {
  auto s3 = three_cycle();
  TSCData rot = tsc_from_conjugacy(*s3, *s3, {0, 1, 2}, 0);
  rot.f = {1, 2, 0};
  rot.fp = {2, 0, 1};
  r.check("tsc/verify/rotation", [&] { return verify_tsc(*s3, *s3, rot).pass; });
  r.check("tsc/verify/constant-map", [&] {
    TSCData flat = rot;
    flat.f = {0, 0, 0};
    for (Int a = 0; a <= 6; ++a) {
      flat.a = {a, a, a};
      if (verify_tsc(*s3, *s3, flat).pass) return false;
    }
    return true;
  });
  r.check("tsc/natext/shift-intertwining", [&] {
    auto pts = nat_ext_points(*s3, 8);
    for (int i = 0; i < 20; ++i) {
      const auto& xi = pts[rng() % pts.size()];
      auto lhs = nat_ext_map(*s3, *s3, rot, shift(*s3, xi));
      auto rhs = shift(*s3, nat_ext_map(*s3, *s3, rot, xi));
      for (Int n = -10; n <= 10; ++n)
        if (coordinate(*s3, lhs, n) != coordinate(*s3, rhs, n)) return false;
    }
    return true;
  });
  r.check("tsc/natext/injective", [&] {
    std::set<NatExtPoint> src, img;
    for (const auto& xi : nat_ext_points(*s3, 8)) {
      src.insert(canonical(*s3, xi));
      img.insert(canonical(*s3, nat_ext_map(*s3, *s3, rot, canonical(*s3, xi))));
    }
    return src.size() == img.size();
  });
}

void flip_checks(Runner& r) {
  auto s3 = three_cycle(), rev = reverse_three_cycle();
  FlipInput fl = make_flip_input(s3, rev, negate_degree());
  FlipInput id = make_flip_input(s3, s3, identity_arrows());
  r.check("flip/f/negation", [&] {
    for (PointId x = 0; x < 3; ++x)
      for (Int n = -6; n <= 6; ++n)
        if (f_of(fl, n, x) != -n) return false;
    return true;
  });
  r.check("flip/f/cocycle-identity", [&] {
    for (PointId x = 0; x < 3; ++x)
      for (Int m = -4; m <= 4; ++m)
        for (Int n = -4; n <= 4; ++n)
          if (f_of(fl, m + n, x) != f_of(fl, m, x) + f_of(fl, n, s3->perm_power(x, m))) return false;
    return true;
  });
  r.check("flip/threshold/negation", [&] { return threshold_N(fl) == 1; });
  r.check("flip/threshold/identity", [&] { return threshold_N(id) == 1; });
  r.check("flip/threshold/times-five", [&] {
    auto fixed = cycle(1);
    ArrowMap five{
        "times5", [](const Arrow& a) { return std::optional<Arrow>(Arrow{a.range, 5 * a.tag, a.source}); }, {}};
    return threshold_N(make_flip_input(fixed, fixed, five)) == 1;
  });
  r.check("flip/decompose/negation", [&] {
    auto d = decompose(fl);
    bool ok = d.certificate.pass && d.X1.empty() && d.X2.size() == 3;
    for (PointId x = 0; x < 3 && ok; ++x) ok = d.b[x] == std::optional<Int>(0) && d.h2[x] == std::optional<PointId>(x);
    return ok;
  });
  r.check("flip/decompose/identity", [&] {
    auto d = decompose(id);
    bool ok = d.certificate.pass && d.X1.size() == 3;
    for (PointId x = 0; x < 3 && ok; ++x) ok = d.a[x] == std::optional<Int>(0) && d.h1[x] == std::optional<PointId>(x);
    return ok;
  });
  r.check("flip/decompose/mixed-components", [&] {
    auto S = cycles({2, 3});
    auto T = make_permutation({1, 0, 4, 2, 3});
    ArrowMap mixed{
        "mixed",
        [](const Arrow& a) { return std::optional<Arrow>(a.range.point < 2 ? a : Arrow{a.range, -a.tag, a.source}); },
        {}};
    auto d = decompose(make_flip_input(S, T, mixed));
    return d.certificate.pass && d.X1 == std::vector<PointId>{0, 1} && d.X2 == std::vector<PointId>{2, 3, 4};
  });
  r.check("flip/rebuild/negation", [&] {
    auto m = rebuild_theta(s3, rev, decompose(fl));
    for (const auto& g : dr_groupoid(s3)->elements(6))
      if (m(g) != negate_degree()(g)) return false;
    return true;
  });
  r.check("flip/rebuild/is-iso", [&] {
    auto m = rebuild_theta(s3, rev, decompose(fl));
    return verify_iso(*dr_groupoid(s3), *dr_groupoid(rev), m, 6).pass;
  });
  r.check("flip/decide/three-cycle-to-reverse", [&] { return flip_decide(s3, rev).has_value(); });
  r.check("flip/decide/two-vs-three-cycle", [&] { return !flip_decide(cycle(2), cycle(3)).has_value(); });
}

ActionCOE pointwise_coe(const GroupAction& A, const GroupAction& B) {
  ActionCOE d;
  for (PointId x = 0; x < A.size(); ++x) d.h.push_back(x);
  d.phi = intertwining_phis(A, B, d.h, true).at(0);
  d.eta = *least_eta(A, B, d.h);
  return d;
}

void action_checks(Runner& r) {
  auto rot = builtin_action("Z4-rotation"), klein = builtin_action("Klein-regular");
  r.check("actions/stab/rotation-free", [&] {
    for (PointId x = 0; x < 4; ++x)
      if (action_stab(*rot, x).size() != 1) return false;
    return true;
  });
  r.check("actions/verify/rotation-vs-klein",
          [&] { return verify_action_coe(*rot, *klein, pointwise_coe(*rot, *klein), {true, true, true}).pass; });
  r.check("actions/theta/rotation-vs-klein-iso", [&] {
    auto g = transformation_groupoid(rot), h = transformation_groupoid(klein);
    return g->elements(0).size() == 16 &&
           verify_iso(*g, *h, theta_action(rot, klein, pointwise_coe(*rot, *klein)), 0).pass;
  });
  r.check("actions/theta/stabiliser-violation-breaks-injectivity", [&] {
    auto fixed = builtin_action("Z2-fixed-1");
    ActionCOE d{{0}, {{0, 0}}, {{0, 0}}};
    auto g = transformation_groupoid(fixed);
    Certificate c = verify_iso(*g, *g, theta_action(fixed, fixed, d), 0);
    return !c.pass && c.witness["check"] == "injective";
  });
  r.check("actions/search/rotation-vs-klein", [&] { return search_action_coe(rot, klein).has_value(); });
  r.check("actions/conjugacy/rotation-vs-half-rotation", [&] {
    auto half = builtin_action("Z4-half-rotation");
    std::vector<PointId> h{0, 1, 2, 3};
    do
      if (is_conjugacy(*rot, *half, h)) return false;
    while (std::next_permutation(h.begin(), h.end()));
    return true;
  });
}

void weyl_checks(Runner& r) {
  auto s3 = three_cycle();
  const auto T = WeylMode::Trivial;
  auto n = Normaliser::delta(s3, T, dr_arrow(0, 1, 1), Coeff(Rational(2), Rational(-1)));
  auto m = Normaliser::delta(s3, T, dr_arrow(0, 4, 1));
  r.check("weyl/convolution/n-nstar-on-units", [&] {
    auto p = nproduct(n, nadjoint(n));
    return p.support().size() == 1 && p.support().begin()->first == dr_arrow(0, 0, 0) &&
           p.support().begin()->second == Coeff(Rational(5));
  });
  r.check("weyl/u-class/degree-difference", [&] {
    auto w = u_class(n, m, 1);
    return w.value == 3 && w.modulus.generator == 3;
  });
  r.check("weyl/class/rescaling-invariant", [&] {
    auto k = Normaliser::delta(s3, T, dr_arrow(0, 1, 1), Coeff(Rational(2), Rational(3)));
    return weyl_class(n, 1) == weyl_class(k, 1) && equivalent(n, 1, k, 1).holds();
  });
  r.check("weyl/class/distinct-windings",
          [&] { return !(weyl_class(n, 1) == weyl_class(m, 1)) && !equivalent(n, 1, m, 1).r4; });
  r.check("weyl/reconstruct/homomorphism-three-cycle-and-funnel", [&] {
    for (const auto& s : {three_cycle(), funnel()}) {
      auto w = std::make_shared<WeylGroupoid>(s, T);
      if (!verify_iso(*dr_groupoid(s), *w, theta_reconstruct(w, 4), 4).pass) return false;
    }
    return true;
  });
  r.check("weyl/reconstruct/injective", [&] {
    auto w = std::make_shared<WeylGroupoid>(s3, T);
    auto th = theta_reconstruct(w, 6);
    return th(dr_arrow(0, 1, 1)) != th(dr_arrow(0, 4, 1));
  });
  r.check("weyl/basic-open/intersection-is-agreement", [&] {
    Normaliser a(s3, T, {{dr_arrow(0, 1, 1), Coeff(1)}, {dr_arrow(1, 1, 2), Coeff(1)}});
    Normaliser b(s3, T, {{dr_arrow(0, 1, 1), Coeff(3)}, {dr_arrow(1, 4, 2), Coeff(1)}});
    auto za = basic_open(a, {1, 2}), zb = basic_open(b, {1, 2});
    std::set<WeylClass> inter;
    std::set_intersection(za.begin(), za.end(), zb.begin(), zb.end(), std::inserter(inter, inter.begin()));
    return inter == std::set<WeylClass>{weyl_class(a, 1)} && equivalent(a, 1, b, 1).holds() &&
           !equivalent(a, 2, b, 2).holds();
  });
}

void equivalence_checks(Runner& r) {
  auto s3 = three_cycle(), s6 = six_cycle();
  r.check("equivalence/three-vs-six-cycle-ungraded", [&] { return equiv_decide(s3, s6, false).equivalent; });
  r.check("equivalence/three-vs-six-cycle-graded", [&] { return !equiv_decide(s3, s6, true).equivalent; });
  r.check("equivalence/connected-vs-two-orbits",
          [&] { return !equiv_decide(s3, two_orbit_system(), false).equivalent; });
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed) {
  Runner r;
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  dr_checks(r);
  coe_checks(r, rng);
  tsc_checks(r, rng);
  flip_checks(r);
  action_checks(r);
  weyl_checks(r);
  equivalence_checks(r);
  return r.report;
}

}  // namespace rigidity
