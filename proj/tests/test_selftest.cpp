#include <set>

#include "doctest.h"
#include "rigidity/selftest.hpp"

using namespace rigidity;

TEST_CASE("every built-in check passes") {
  auto report = run_selftest();
  for (const auto& c : report.checks) {
    INFO(c.name << " " << c.detail.dump());
    CHECK(c.pass);
  }
  CHECK(report.pass());
  CHECK(report.checks.size() >= 50);
}

TEST_CASE("check names are unique") {
  auto report = run_selftest();
  std::set<std::string> names;
  for (const auto& c : report.checks) CHECK(names.insert(c.name).second);
}

TEST_CASE("summary counts failures") {
  SelftestReport r;
  r.checks.push_back({"a", true, nullptr});
  r.checks.push_back({"b", false, json{{"why", "x"}}});
  json j = r.to_json();
  CHECK(j["pass"] == false);
  CHECK(j["total"] == 2);
  CHECK(j["failed"] == 1);
  CHECK(j["checks"][1]["detail"]["why"] == "x");
}
