#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/catalogue.hpp"
#include "rigidity/equivalence.hpp"

using namespace rigidity;


TEST_CASE("equiv_decide examples") {
  auto s3 = three_cycle(), s6 = six_cycle();
  auto ungraded = equiv_decide(s3, s6, false);
  CHECK(ungraded.equivalent);
  CHECK(ungraded.certificate.pass);
  auto graded = equiv_decide(s3, s6, true);
  CHECK_FALSE(graded.equivalent);
  CHECK(graded.certificate.witness["check"] == "match_orbits");
  for (const auto& [name, s] : builtin_systems()) {
    CHECK(equiv_decide(s, s, true).equivalent);
    CHECK(equiv_decide(s, s, false).equivalent);
  }
  auto split = equiv_decide(s3, two_orbit_system(), false);
  CHECK_FALSE(split.equivalent);
  CHECK(split.certificate.witness["witness"]["reason"] == "orbit counts differ");
  CHECK(orbit_representatives(*two_orbit_system()) == std::set<PointId>{0, 2});
}

TEST_CASE("kakutani rejects subsets that are not full") {
  auto s = two_orbit_system();
  auto r = kakutani(s, {0}, s, {0}, false);
  CHECK_FALSE(r.equivalent);
  CHECK(r.certificate.witness["check"] == "full_U1");
  CHECK_THROWS_AS(kakutani(s, {9}, s, {0}, false), std::invalid_argument);
}

TEST_CASE("equiv_decide agrees with brute force on built-in systems") {
  for (const auto& [n1, a] : builtin_systems())
    for (const auto& [n2, b] : builtin_systems())
      for (bool graded : {false, true}) {
        CAPTURE(n1);
        CAPTURE(n2);
        CAPTURE(graded);
        bool brute = false;
        for (const auto& t1 : oracle::transversals(a->sigma_map()))
          for (const auto& t2 : oracle::transversals(b->sigma_map()))
            brute = brute || oracle::restricted_iso(a->sigma_map(), t1, b->sigma_map(), t2, graded);
        auto r = equiv_decide(a, b, graded);
        CHECK(r.equivalent == brute);
        if (r.equivalent) {
          CHECK(r.certificate.pass);
          CHECK(r.kappa.has_value());
        }
      }
}

TEST_CASE("kakutani agrees with brute force on all full subsets") {
  std::vector<DRSystemPtr> systems{three_cycle(), reverse_three_cycle(), funnel(), partial_system(), two_orbit_system(),
                                   cycles({1, 2}), make_system({1, 2, 0, 0})};
  std::size_t positive = 0, total = 0;
  for (const auto& a : systems)
    for (const auto& b : systems)
      for (const auto& u1 : oracle::subsets(a->size()))
        for (const auto& u2 : oracle::subsets(b->size())) {
          if (u1.size() != u2.size()) continue;
          const bool full = oracle::full(a->sigma_map(), u1) && oracle::full(b->sigma_map(), u2);
          for (bool graded : {false, true}) {
            auto r = kakutani(a, {u1.begin(), u1.end()}, b, {u2.begin(), u2.end()}, graded, 4);
            const bool brute = full && oracle::restricted_iso(a->sigma_map(), u1, b->sigma_map(), u2, graded);
            CHECK(r.equivalent == brute);
            positive += brute;
            ++total;
          }
        }
  CHECK(positive > 50);
  CHECK(total > positive);
}

TEST_CASE("kappa is an exact inverse pair and respects degrees when graded") {
  auto a = make_system({1, 2, 0, 0}), b = make_system({1, 2, 0, 1});
  for (bool graded : {false, true}) {
    auto r = kakutani(a, {0, 3}, b, {1, 3}, graded, 5);
    REQUIRE(r.equivalent);
    auto g = restrict(dr_groupoid(a), {{0, 0}, {3, 0}});
    for (const auto& x : g->elements(5)) {
      auto y = r.kappa->forward(x);
      REQUIRE(y);
      CHECK(r.kappa->inverse(*y) == std::optional<Arrow>(x));
      if (graded) CHECK(y->tag == x.tag);
    }
  }
}
