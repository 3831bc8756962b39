#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "rigidity/catalogue.hpp"
#include "rigidity/tsc.hpp"

using namespace rigidity;

namespace {

TSCData identity_tsc(const DRSystem& s) {
  std::vector<PointId> f(s.size());
  for (PointId x = 0; x < f.size(); ++x) f[x] = x;
  return tsc_from_conjugacy(s, s, f, 0);
}

std::vector<PointId> power_map(const DRSystem& s, Int n) {
  std::vector<PointId> f(s.size());
  for (PointId x = 0; x < f.size(); ++x) f[x] = *s.iterate(x, n);
  return f;
}

}  // namespace

TEST_CASE("verify_tsc examples") {
  auto s3 = three_cycle();
  CHECK(verify_tsc(*s3, *s3, identity_tsc(*s3)).pass);

  TSCData rot = identity_tsc(*s3);
  rot.f = power_map(*s3, 1);
  rot.fp = power_map(*s3, 2);
  Certificate c = verify_tsc(*s3, *s3, rot);
  CHECK(c.pass);
  CHECK(c.checks.back().check == "continuity");
  CHECK(c.checks.back().detail["vacuous"] == true);

  TSCData flat = identity_tsc(*s3);
  flat.f = {0, 0, 0};
  for (Int a = 0; a <= 6; ++a) {
    flat.a = {a, a, a};
    Certificate bad = verify_tsc(*s3, *s3, flat);
    CHECK_FALSE(bad.pass);
    CHECK(bad.witness["check"] == "a_identity");
  }
}

TEST_CASE("verify_tsc on partial systems uses the stated domains") {
  auto p = partial_system();
  TSCData d = identity_tsc(*p);
  CHECK(verify_tsc(*p, *p, d).pass);
  d.k[1] = 0;
  CHECK_FALSE(verify_tsc(*p, *p, d).pass);
}

TEST_CASE("natural extension representations") {
  auto s6 = six_cycle();
  auto pts = nat_ext_points(*s6, 8);
  std::set<NatExtPoint> canon;
  for (const auto& xi : pts) {
    CHECK(is_valid(*s6, xi));
    NatExtPoint c = canonical(*s6, xi);
    CHECK(c.back_cycle.size() == 6);
    for (Int n = -20; n <= 20; ++n) CHECK(coordinate(*s6, xi, n) == coordinate(*s6, c, n));
    canon.insert(c);
  }
  CHECK(canon.size() == 6);
  CHECK_FALSE(is_valid(*s6, NatExtPoint{{0, 2}, {}}));
  CHECK_FALSE(is_valid(*s6, NatExtPoint{{}, {0}}));
  CHECK_FALSE(is_valid(*s6, NatExtPoint{{0, 1, 2, 3, 4, 5}, {1}}));
}

TEST_CASE("nat_ext_map: identity, shift intertwining, injectivity") {
  auto s3 = three_cycle();
  for (const auto& xi : nat_ext_points(*s3, 8)) CHECK(nat_ext_map(*s3, *s3, identity_tsc(*s3), xi) == xi);

  std::mt19937 rng(31337);
  for (const auto& S : {three_cycle(), six_cycle(), two_orbit_system()}) {
    for (const auto& f : equivariant_maps(*S, *S)) {
      std::set<PointId> img(f.begin(), f.end());
      if (img.size() != f.size()) continue;
      for (Int k = 0; k <= 2; ++k) {
        TSCData d = tsc_from_conjugacy(*S, *S, f, k);
        REQUIRE(verify_tsc(*S, *S, d).pass);
        auto pts = nat_ext_points(*S, 8);
        for (int i = 0; i < 20; ++i) {
          const auto& xi = pts[rng() % pts.size()];
          NatExtPoint lhs = nat_ext_map(*S, *S, d, shift(*S, xi));
          NatExtPoint rhs = shift(*S, nat_ext_map(*S, *S, d, xi));
          CHECK(is_valid(*S, lhs));
          for (Int n = -12; n <= 12; ++n) CHECK(coordinate(*S, lhs, n) == coordinate(*S, rhs, n));
        }
        std::map<NatExtPoint, NatExtPoint> image_of;
        for (const auto& xi : pts) {
          auto [it, fresh] = image_of.emplace(canonical(*S, nat_ext_map(*S, *S, d, xi)), canonical(*S, xi));
          if (!fresh) CHECK(it->second == canonical(*S, xi));
        }
      }
    }
  }
  auto f = funnel();
  CHECK_THROWS_AS(nat_ext_map(*f, *f, identity_tsc(*f), NatExtPoint{{2}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(nat_ext_map(*s3, *s3, identity_tsc(*s3), NatExtPoint{{0}, {}}), std::invalid_argument);
}

TEST_CASE("equivariant maps") {
  auto s3 = three_cycle();
  auto maps = equivariant_maps(*s3, *s3);
  CHECK(maps.size() == 3);
  CHECK(maps.front() == std::vector<PointId>{0, 1, 2});
  CHECK(equivariant_maps(*cycles({2, 2}), *cycle(4)).empty());
  CHECK(equivariant_maps(*cycle(4), *cycles({2, 2})).size() == 4);
  CHECK(equivariant_maps(*cycles({2, 2}), *cycles({1, 1})).size() == 4);
}
