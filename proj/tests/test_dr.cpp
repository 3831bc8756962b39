#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/catalogue.hpp"
#include "rigidity/dr.hpp"

using namespace rigidity;

namespace {

// Least witness (m, m - p) by scanning m, n <= 2|X| + |p|.
std::optional<Witness> brute_member(const oracle::Map& s, PointId x, Int p, PointId y) {
  const Int lim = 2 * static_cast<Int>(s.size()) + (p < 0 ? -p : p);
  for (Int m = std::max<Int>(p, 0); m <= lim; ++m) {
    const Int n = m - p;
    if (n < 0 || n > lim) continue;
    auto a = oracle::pow(s, x, m), b = oracle::pow(s, y, n);
    if (a && b && *a == *b) return Witness{m, n};
  }
  return std::nullopt;
}

// gcd of all m - n with s^m(x) = s^n(x), m, n <= 3|X|.
Int brute_stab(const oracle::Map& s, PointId x) {
  const Int lim = 3 * static_cast<Int>(s.size());
  Int g = 0;
  for (Int m = 0; m <= lim; ++m)
    for (Int n = 0; n <= lim; ++n) {
      auto a = oracle::pow(s, x, m), b = oracle::pow(s, x, n);
      if (a && b && *a == *b) g = std::gcd(g, m > n ? m - n : n - m);
    }
  return g;
}

}  // namespace

TEST_CASE("stab") {
  auto s3 = three_cycle();
  CHECK(s3->stab(0).stab.generator == 3);
  CHECK(s3->stab(0).stab_min == std::optional<Int>(3));
  CHECK(s3->stab(0).on_cycle);
  auto f = funnel();
  const PointId a = *f->find("a"), c = *f->find("c");
  CHECK(f->stab(a).stab.generator == 1);
  CHECK_FALSE(f->stab(a).on_cycle);
  CHECK(f->stab(c).on_cycle);
  auto p = partial_system();
  CHECK(p->stab(1).stab.trivial());
  CHECK_FALSE(p->stab(1).stab_min.has_value());
}

TEST_CASE("member and l_X") {
  auto s3 = three_cycle();
  CHECK(s3->member(0, 3, 0) == std::optional<Witness>(Witness{3, 0}));
  CHECK(s3->member(1, 0, 1) == std::optional<Witness>(Witness{0, 0}));
  CHECK_FALSE(s3->member(0, 1, 0).has_value());
  auto f = funnel();
  const PointId a = *f->find("a"), c = *f->find("c");
  CHECK(f->member(a, -1, c) == std::optional<Witness>(Witness{1, 2}));
  CHECK(l_X(*s3, dr_arrow(2, 0, 2)) == 0);
  CHECK(l_X(*s3, dr_arrow(0, 3, 0)) == 3);
  CHECK(l_X(*f, dr_arrow(a, -1, c)) == 1);
  CHECK_THROWS(l_X(*s3, dr_arrow(0, 1, 0)));
}

TEST_CASE("c_X") {
  CHECK(c_X(dr_arrow(0, 3, 0)) == 3);
  auto g = dr_groupoid(funnel());
  for (const auto& u : g->units(0)) CHECK(c_X(g->unit_arrow(u)) == 0);
  CHECK(check_cocycle(*g, degree_grading(), 8).pass);
}

TEST_CASE("member, l_X and stab agree with brute force") {
  std::mt19937 rng(1717);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng() % 6;
    auto m = oracle::random_map(rng, n);
    auto s = make_system(m);
    for (PointId x = 0; x < n; ++x) {
      CHECK(s->stab(x).stab.generator == brute_stab(m, x));
      CHECK(s->stab(x).stab_ess == s->stab(x).stab);
      CHECK(s->stab_ess(x) == s->stab(x).stab);
      if (m[x]) CHECK(s->stab(*m[x]).stab == s->stab(x).stab);
      for (PointId y = 0; y < n; ++y)
        for (Int p = -4; p <= 4; ++p) {
          auto w = s->member(x, p, y);
          REQUIRE(w == brute_member(m, x, p, y));
          if (w) {
            CHECK(l_X(*s, dr_arrow(x, p, y)) == w->m);
            CHECK(l_X(*s, dr_arrow(y, -p, x)) == w->m - p);
          }
        }
    }
  }
}

TEST_CASE("stabilisation") {
  auto s3 = three_cycle();
  auto st = stabilize(s3);
  CHECK(st->step({1, 5}) == std::optional<Unit>(Unit{1, 4}));
  CHECK(st->step({1, 0}) == std::optional<Unit>(Unit{2, 0}));
  for (PointId x = 0; x < 3; ++x)
    for (Int n = 0; n <= 6; ++n) CHECK(st->stab({x, n}).stab == s3->stab(x).stab);
  auto f = funnel();
  auto sf = stabilize(f);
  for (PointId x = 0; x < f->size(); ++x)
    for (Int n = 0; n <= 4; ++n) CHECK(sf->stab({x, n}).stab == f->stab(x).stab);
}

TEST_CASE("iso_stabilized") {
  auto s3 = three_cycle();
  auto m = iso_stabilized(s3);
  CHECK(m(Arrow{{0, 0}, 2, {1, 0}}) == std::optional<Arrow>(ProductWithR::lift(dr_arrow(0, 2, 1), 0, 0)));
  CHECK(m(Arrow{{0, 2}, 0, {0, 5}}) == std::optional<Arrow>(ProductWithR::lift(dr_arrow(0, 3, 0), 2, 5)));
  CHECK(m(Arrow{{1, 4}, 0, {1, 4}}) == std::optional<Arrow>(ProductWithR::lift(dr_arrow(1, 0, 1), 4, 4)));
  auto c1 = degree_grading(), c2 = stabilized_degree_grading();
  for (const auto& s : {three_cycle(), funnel(), partial_system(), two_orbit_system()})
    for (Int b = 0; b <= 6; ++b) {
      auto g1 = dr_groupoid(stabilize(s));
      auto g2 = product_with_R(dr_groupoid(s));
      CHECK(verify_iso(*g1, *g2, iso_stabilized(s), b, &c1, &c2).pass);
    }
}
