#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "rigidity/actions.hpp"
#include "rigidity/coe.hpp"
#include "rigidity/dr.hpp"
#include "rigidity/tsc.hpp"

namespace rigidity {

// Malformed or inconsistent input. what() is "source:line:column: message"
// when a position is known, else "source: message".
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& source, std::optional<std::size_t> line, std::optional<std::size_t> column,
            const std::string& message);
  const std::string& source() const { return source_; }
  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  std::optional<std::size_t> line_, column_;
  std::string message_;
};

// Each parse_* reads TOML text; `source` names it in error messages.
// Each load_* reads a file and parses it.

// [system] points = [...]; [system.sigma] x = "y" (absent key: outside dom).
DRSystemPtr parse_system(const std::string& text, const std::string& source = "<string>");
DRSystemPtr load_system(const std::string& path);

// [group] kind = "finite", table = [[...]], optional names = [...];
// or kind = "free-abelian", rank = d.
Group parse_group(const std::string& text, const std::string& source = "<string>");

// [action] group = "<builtin name>" or an inline [group] table in the same
// file, points = [...]; [action.map] "x,g" = "y" for every pair.
GroupActionPtr parse_action(const std::string& text, const std::string& source = "<string>");
GroupActionPtr load_action(const std::string& path);

// [coe] h, l, k, lprime, kprime as inline tables keyed by point names.
COEData parse_coe(const std::string& text, const DRSystem& s, const DRSystem& t,
                  const std::string& source = "<string>");
COEData load_coe(const std::string& path, const DRSystem& s, const DRSystem& t);

// [tsc] f, fprime, a, aprime, k, kprime.
TSCData parse_tsc(const std::string& text, const DRSystem& s, const DRSystem& t,
                  const std::string& source = "<string>");
TSCData load_tsc(const std::string& path, const DRSystem& s, const DRSystem& t);

// [action_coe] h = {x = "y"}, phi = {"x,g" = "l"}, eta = {"y,l" = "g"}.
ActionCOE parse_action_coe(const std::string& text, const GroupAction& a, const GroupAction& b,
                           const std::string& source = "<string>");
ActionCOE load_action_coe(const std::string& path, const GroupAction& a, const GroupAction& b);

}  // namespace rigidity
