#include <random>
#include <sstream>

#include "doctest.h"
#include "rigidity/catalogue.hpp"
#include "rigidity/io.hpp"

using namespace rigidity;

namespace {

std::string system_text(const std::vector<std::optional<PointId>>& sigma) {
  std::ostringstream out;
  out << "[system]\npoints = [";
  for (PointId x = 0; x < sigma.size(); ++x) out << (x ? ", " : "") << "\"p" << x << "\"";
  out << "]\n[system.sigma]\n";
  for (PointId x = 0; x < sigma.size(); ++x)
    if (sigma[x]) out << "p" << x << " = \"p" << *sigma[x] << "\"\n";
  return out.str();
}

template <class F>
LoadError error_of(F&& f) {
  try {
    f();
  } catch (const LoadError& e) {
    return e;
  }
  FAIL("no LoadError");
  throw;
}

}  // namespace

TEST_CASE("systems") {
  auto s = parse_system(R"(
[system]
points = ["a", "b", "c"]
[system.sigma]
a = "c"
b = "c"
c = "c"
)");
  REQUIRE(s->size() == 3);
  CHECK(s->name(0) == "a");
  CHECK(s->sigma(1) == std::optional<PointId>(2));
  CHECK(s->stab(0).stab.generator == 1);

  auto partial = parse_system("[system]\npoints = [\"0\", \"1\"]\n[system.sigma]\n\"0\" = \"1\"\n");
  CHECK_FALSE(partial->sigma(1).has_value());

  std::mt19937 rng(8080);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::optional<PointId>> sigma(n);
    for (auto& v : sigma)
      if (rng() % 5) v = rng() % n;
    auto loaded = parse_system(system_text(sigma));
    CHECK(loaded->sigma_map() == sigma);
  }
}

TEST_CASE("errors carry positions") {
  LoadError syntax = error_of([] { parse_system("[system]\npoints = [\"a\",\n  oops]\n", "bad.toml"); });
  CHECK(syntax.source() == "bad.toml");
  REQUIRE(syntax.line());
  CHECK(*syntax.line() == 3);
  CHECK(std::string(syntax.what()).rfind("bad.toml:3:", 0) == 0);

  LoadError unknown = error_of([] { parse_system("[system]\npoints = [\"a\"]\n[system.sigma]\na = \"z\"\n"); });
  CHECK(unknown.message().find("unknown point 'z'") != std::string::npos);
  CHECK(unknown.line() == std::optional<std::size_t>(4));

  LoadError dup = error_of([] { parse_system("[system]\npoints = [\"a\", \"a\"]\n"); });
  CHECK(dup.message().find("duplicate") != std::string::npos);

  LoadError missing = error_of([] { parse_system("[other]\nx = 1\n"); });
  CHECK(missing.message().find("system") != std::string::npos);

  LoadError wrong_type = error_of([] { parse_system("[system]\npoints = \"a\"\n"); });
  CHECK(wrong_type.line() == std::optional<std::size_t>(2));

  CHECK_THROWS_AS(load_system("/nonexistent/file.toml"), LoadError);
}

TEST_CASE("groups") {
  Group z3 = parse_group("[group]\nkind = \"finite\"\ntable = [[0,1,2],[1,2,0],[2,0,1]]\n");
  CHECK(z3.order() == 3);
  CHECK(parse_group("[group]\nkind = \"free-abelian\"\nrank = 2\n").rank() == 2);
  LoadError bad = error_of([] { parse_group("[group]\nkind = \"finite\"\ntable = [[0,1],[0,1]]\n"); });
  CHECK(bad.line() == std::optional<std::size_t>(3));
  CHECK_THROWS_AS(parse_group("[group]\nkind = \"cyclic\"\n"), LoadError);
}

TEST_CASE("actions") {
  auto a = parse_action(R"(
[action]
group = "Z2"
points = ["u", "v"]
[action.map]
"u,0" = "u"
"u,1" = "v"
"v,0" = "v"
"v,1" = "u"
)");
  CHECK(a->act(0, 1) == 1);
  CHECK(a->table() == builtin_action("Z2-swap")->table());

  LoadError incomplete = error_of([] {
    parse_action("[action]\ngroup = \"Z2\"\npoints = [\"u\"]\n[action.map]\n\"u,0\" = \"u\"\n");
  });
  CHECK(incomplete.message().find("\"u,1\"") != std::string::npos);

  // S3 with (p q)(x) = p(q(x)); permutations listed in lexicographic order.
  std::string s3 = R"(
[group]
kind = "finite"
table = [[0,1,2,3,4,5],[1,0,4,5,2,3],[2,3,0,1,5,4],[3,2,5,4,0,1],[4,5,1,0,3,2],[5,4,3,2,1,0]]
[action]
points = ["0", "1", "2"]
[action.map]
"0,0" = "0"
"0,1" = "0"
"0,2" = "1"
"0,3" = "1"
"0,4" = "2"
"0,5" = "2"
"1,0" = "1"
"1,1" = "2"
"1,2" = "0"
"1,3" = "2"
"1,4" = "0"
"1,5" = "1"
"2,0" = "2"
"2,1" = "1"
"2,2" = "2"
"2,3" = "0"
"2,4" = "1"
"2,5" = "0"
)";
  LoadError left = error_of([&] { parse_action(s3); });
  CHECK(left.message().find("left action") != std::string::npos);
}

TEST_CASE("coe, tsc and action coe files") {
  auto s3 = three_cycle(), r3 = reverse_three_cycle();
  COEData c = parse_coe(R"(
[coe]
h = {"0" = "0", "1" = "2", "2" = "1"}
l = {"0" = 1, "1" = 1, "2" = 1}
k = {"0" = 0, "1" = 0, "2" = 0}
lprime = {"0" = 1, "1" = 1, "2" = 1}
kprime = {"0" = 0, "1" = 0, "2" = 0}
)",
                        *s3, *r3);
  CHECK(c.h == std::vector<PointId>{0, 2, 1});
  CHECK(c.l[0] == std::optional<Int>(1));
  CHECK_THROWS_AS(parse_coe("[coe]\nh = {\"0\" = \"0\"}\n", *s3, *r3), LoadError);

  TSCData t = parse_tsc(R"(
[tsc]
f = {"0" = "0", "1" = "1", "2" = "2"}
fprime = {"0" = "0", "1" = "1", "2" = "2"}
a = {"0" = 0, "1" = 0, "2" = 0}
aprime = {"0" = 0, "1" = 0, "2" = 0}
k = {"0" = 0, "1" = 0, "2" = 0}
kprime = {"0" = 0, "1" = 0, "2" = 0}
)",
                        *s3, *s3);
  CHECK(verify_tsc(*s3, *s3, t).pass);

  auto swap = builtin_action("Z2-swap");
  ActionCOE d = parse_action_coe(R"(
[action_coe]
h = {"0" = "1", "1" = "0"}
phi = {"0,0" = "0", "0,1" = "1", "1,0" = "0", "1,1" = "1"}
eta = {"0,0" = "0", "0,1" = "1", "1,0" = "0", "1,1" = "1"}
)",
                                 *swap, *swap);
  CHECK(d.h == std::vector<PointId>{1, 0});
  CHECK(verify_action_coe(*swap, *swap, d, {true, true, true}).pass);
  LoadError bad_elem = error_of([&] {
    parse_action_coe("[action_coe]\nh = {\"0\" = \"1\", \"1\" = \"0\"}\nphi = {\"0,7\" = \"0\"}\neta = {}\n", *swap,
                     *swap);
  });
  CHECK(bad_elem.message().find("unknown group element '7'") != std::string::npos);
}
