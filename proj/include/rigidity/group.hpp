#pragma once

#include <compare>
#include <string>
#include <variant>
#include <vector>

#include "rigidity/int.hpp"

namespace rigidity {

// An element of either Z^d (coordinate vector) or a finite table group (index).
class GroupElem {
 public:
  GroupElem() : value_(std::size_t{0}) {}
  static GroupElem vec(std::vector<Int> coords) { return GroupElem(std::move(coords)); }
  static GroupElem integer(Int n) { return GroupElem(std::vector<Int>{n}); }
  static GroupElem index(std::size_t i) { return GroupElem(i); }

  bool is_index() const { return std::holds_alternative<std::size_t>(value_); }
  std::size_t idx() const;
  const std::vector<Int>& coords() const;
  // The single coordinate of an element of Z.
  Int as_integer() const;

  auto operator<=>(const GroupElem&) const = default;
  bool operator==(const GroupElem&) const = default;

 private:
  explicit GroupElem(std::vector<Int> v) : value_(std::move(v)) {}
  explicit GroupElem(std::size_t i) : value_(i) {}
  std::variant<std::vector<Int>, std::size_t> value_;
};

class Group {
 public:
  enum class Kind { FreeAbelian, FiniteTable };

  static Group free_abelian(std::size_t rank);
  static Group integers() { return free_abelian(1); }
  // Validates the table eagerly; throws std::invalid_argument on any violated axiom.
  static Group finite(std::vector<std::vector<std::size_t>> table, std::vector<std::string> names = {});
  static Group trivial();
  static Group cyclic(std::size_t n);
  static Group klein();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::FiniteTable; }
  std::size_t rank() const { return rank_; }
  std::size_t order() const { return table_.size(); }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  std::size_t identity_index() const { return identity_; }
  std::size_t inverse_index(std::size_t i) const { return inverse_.at(i); }
  std::size_t mul_index(std::size_t a, std::size_t b) const { return table_[a][b]; }

  GroupElem identity() const;
  bool valid(const GroupElem& a) const;
  GroupElem mul(const GroupElem& a, const GroupElem& b) const;
  GroupElem inverse(const GroupElem& a) const;
  std::vector<GroupElem> elements() const;
  bool is_abelian() const;

  const std::string& element_name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> find_element(const std::string& name) const;
  std::string describe() const;

  bool operator==(const Group& o) const { return kind_ == o.kind_ && rank_ == o.rank_ && table_ == o.table_; }

 private:
  Kind kind_ = Kind::FreeAbelian;
  std::size_t rank_ = 0;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
  std::vector<std::string> names_;
};

// True for Z^d and for the trivial finite group.
bool is_torsion_free(const Group& g);

// The subgroup dZ of Z, stored by its nonnegative generator (0 is the trivial subgroup).
struct ZSubgroup {
  Int generator = 0;

  bool trivial() const { return generator == 0; }
  bool contains(Int n) const { return generator == 0 ? n == 0 : n % generator == 0; }
  auto operator<=>(const ZSubgroup&) const = default;
};

ZSubgroup subgroup_of_Z(const std::vector<Int>& elements);

}  // namespace rigidity
