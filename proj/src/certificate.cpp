#include "rigidity/certificate.hpp"

namespace rigidity {

void Certificate::fail(json w) {
  if (!pass) return;
  pass = false;
  witness = std::move(w);
}

void Certificate::add(Certificate sub) {
  if (!sub.pass && pass) {
    pass = false;
    if (!VerdictOnly::active()) witness = json{{"check", sub.check}, {"witness", sub.witness}};
  }
  if (checks.empty()) checks.reserve(4);
  checks.push_back(std::move(sub));
}

json Certificate::to_json() const {
  json j;
  j["check"] = check;
  j["pass"] = pass;
  j["bound"] = bound;
  j["witness"] = witness;
  if (!detail.is_null()) j["detail"] = detail;
  if (!checks.empty()) {
    j["checks"] = json::array();
    for (const auto& c : checks) j["checks"].push_back(c.to_json());
  }
  return j;
}

}  // namespace rigidity
