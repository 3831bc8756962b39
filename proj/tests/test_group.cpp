#include <random>

#include "doctest.h"
#include "rigidity/group.hpp"

using namespace rigidity;

TEST_CASE("mul") {
  auto z = Group::integers();
  CHECK(z.mul(GroupElem::integer(2), GroupElem::integer(3)) == GroupElem::integer(5));
  auto z2 = Group::cyclic(2);
  auto g = GroupElem::index(1);
  CHECK(z2.mul(g, g) == z2.identity());
  auto zz = Group::free_abelian(2);
  CHECK(zz.mul(GroupElem::vec({1, 0}), GroupElem::vec({0, -2})) == GroupElem::vec({1, -2}));
  CHECK_THROWS(zz.mul(GroupElem::integer(1), GroupElem::vec({0, 0})));
  CHECK_THROWS(z2.mul(GroupElem::index(2), g));
}

TEST_CASE("subgroup_of_Z") {
  CHECK(subgroup_of_Z({3, 6}).generator == 3);
  CHECK(subgroup_of_Z({}).generator == 0);
  CHECK(subgroup_of_Z({4, 6}).generator == 2);
  CHECK(subgroup_of_Z({0, -5}).generator == 5);
}

TEST_CASE("subgroup_of_Z is the least subgroup containing its input") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<Int> val(-40, 40);
  for (int t = 0; t < 300; ++t) {
    std::vector<Int> s(rng() % 4);
    for (auto& v : s) v = val(rng);
    auto h = subgroup_of_Z(s);
    for (Int v : s) CHECK(h.contains(v));
    for (Int d = 1; d <= 40; ++d) {
      bool all = true;
      for (Int v : s) all = all && v % d == 0;
      if (all) CHECK(h.generator % d == 0);
    }
  }
}

TEST_CASE("is_torsion_free") {
  CHECK(is_torsion_free(Group::integers()));
  CHECK(is_torsion_free(Group::free_abelian(3)));
  CHECK_FALSE(is_torsion_free(Group::cyclic(2)));
  CHECK(is_torsion_free(Group::trivial()));
}

TEST_CASE("finite tables are validated") {
  CHECK_THROWS(Group::finite({{0, 1}, {1, 1}}));
  CHECK_THROWS(Group::finite({{0, 1}, {0, 1}}));
  CHECK_THROWS(Group::finite({{0, 1, 2}, {1, 2, 0}}));
  // A Latin square with identity that is not associative.
  CHECK_THROWS(Group::finite({{0, 1, 2, 3, 4},
                              {1, 0, 3, 4, 2},
                              {2, 4, 0, 1, 3},
                              {3, 2, 4, 0, 1},
                              {4, 3, 1, 2, 0}}));
  CHECK_NOTHROW(Group::finite({{0, 1}, {1, 0}}, {"e", "g"}));
}

TEST_CASE("accepted tables satisfy the axioms") {
  for (const auto& g : {Group::trivial(), Group::cyclic(2), Group::cyclic(5), Group::klein()}) {
    const std::size_t n = g.order();
    for (std::size_t a = 0; a < n; ++a) {
      CHECK(g.mul_index(a, g.inverse_index(a)) == g.identity_index());
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          CHECK(g.mul_index(g.mul_index(a, b), c) == g.mul_index(a, g.mul_index(b, c)));
    }
    CHECK(g.is_abelian());
  }
}
