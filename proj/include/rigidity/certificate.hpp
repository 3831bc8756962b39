#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rigidity/int.hpp"

namespace rigidity {

using json = nlohmann::ordered_json;

// Outcome of a check. Failures are data: `witness` holds the first offending
// item in enumeration order, `checks` the sub-checks that were run.
struct Certificate {
  std::string check;
  bool pass = true;
  Int bound = 0;
  json witness = nullptr;
  json detail = nullptr;
  std::vector<Certificate> checks;

  Certificate() = default;
  Certificate(std::string name, Int b) : check(std::move(name)), bound(b) {}

  // Records a failure unless one is already recorded.
  void fail(json w);
  // As fail, but the witness is only built for the first failure.
  template <class F>
  void fail_with(F&& make);
  // Appends a sub-check; the first failing sub-check supplies the witness.
  void add(Certificate sub);

  json to_json() const;
};

// While an instance is alive, certificates on this thread record pass/fail
// but no witnesses. For bulk callers that only read `pass`.
class VerdictOnly {
 public:
  VerdictOnly() { ++depth_; }
  ~VerdictOnly() { --depth_; }
  VerdictOnly(const VerdictOnly&) = delete;
  VerdictOnly& operator=(const VerdictOnly&) = delete;
  static bool active() { return depth_ > 0; }

 private:
  static inline thread_local int depth_ = 0;
};

template <class F>
void Certificate::fail_with(F&& make) {
  if (!pass) return;
  if (VerdictOnly::active())
    pass = false;
  else
    fail(make());
}

}  // namespace rigidity
