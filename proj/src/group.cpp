#include "rigidity/group.hpp"

#include <stdexcept>

namespace rigidity {

std::size_t GroupElem::idx() const {
  if (!is_index()) throw std::invalid_argument("group element is not a table index");
  return std::get<std::size_t>(value_);
}

const std::vector<Int>& GroupElem::coords() const {
  if (is_index()) throw std::invalid_argument("group element is not a coordinate vector");
  return std::get<std::vector<Int>>(value_);
}

Int GroupElem::as_integer() const {
  const auto& c = coords();
  if (c.size() != 1) throw std::invalid_argument("group element is not an integer");
  return c[0];
}

Group Group::free_abelian(std::size_t rank) {
  Group g;
  g.kind_ = Kind::FreeAbelian;
  g.rank_ = rank;
  return g;
}

Group Group::finite(std::vector<std::vector<std::size_t>> table, std::vector<std::string> names) {
  const std::size_t n = table.size();
  if (n == 0) throw std::invalid_argument("group table is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw std::invalid_argument("group table row " + std::to_string(i) + " has wrong length");
    for (std::size_t v : table[i])
      if (v >= n) throw std::invalid_argument("group table entry out of range in row " + std::to_string(i));
  }
  std::optional<std::size_t> e;
  for (std::size_t i = 0; i < n && !e; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) ok = table[i][j] == j && table[j][i] == j;
    if (ok) e = i;
  }
  if (!e) throw std::invalid_argument("group table has no identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw std::invalid_argument("group table is not associative at (" + std::to_string(a) + "," +
                                      std::to_string(b) + "," + std::to_string(c) + ")");
  std::vector<std::size_t> inv(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::optional<std::size_t> found;
    for (std::size_t b = 0; b < n && !found; ++b)
      if (table[a][b] == *e && table[b][a] == *e) found = b;
    if (!found) throw std::invalid_argument("element " + std::to_string(a) + " has no inverse");
    inv[a] = *found;
  }
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  } else if (names.size() != n) {
    throw std::invalid_argument("group element names do not match the order");
  }
  Group g;
  g.kind_ = Kind::FiniteTable;
  g.table_ = std::move(table);
  g.inverse_ = std::move(inv);
  g.identity_ = *e;
  g.names_ = std::move(names);
  return g;
}

Group Group::trivial() { return finite({{0}}); }

Group Group::cyclic(std::size_t n) {
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return finite(std::move(t));
}

Group Group::klein() {
  std::vector<std::vector<std::size_t>> t(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) t[a][b] = a ^ b;
  return finite(std::move(t), {"e", "a", "b", "ab"});
}

GroupElem Group::identity() const {
  if (is_finite()) return GroupElem::index(identity_);
  return GroupElem::vec(std::vector<Int>(rank_, 0));
}

bool Group::valid(const GroupElem& a) const {
  if (is_finite()) return a.is_index() && a.idx() < order();
  return !a.is_index() && a.coords().size() == rank_;
}

GroupElem Group::mul(const GroupElem& a, const GroupElem& b) const {
  if (!valid(a) || !valid(b)) throw std::invalid_argument("group element does not belong to " + describe());
  if (is_finite()) return GroupElem::index(table_[a.idx()][b.idx()]);
  std::vector<Int> r(rank_);
  for (std::size_t i = 0; i < rank_; ++i) r[i] = add(a.coords()[i], b.coords()[i]);
  return GroupElem::vec(std::move(r));
}

GroupElem Group::inverse(const GroupElem& a) const {
  if (!valid(a)) throw std::invalid_argument("group element does not belong to " + describe());
  if (is_finite()) return GroupElem::index(inverse_[a.idx()]);
  std::vector<Int> r(rank_);
  for (std::size_t i = 0; i < rank_; ++i) r[i] = neg(a.coords()[i]);
  return GroupElem::vec(std::move(r));
}

std::vector<GroupElem> Group::elements() const {
  if (!is_finite()) throw std::invalid_argument("cannot list the elements of an infinite group");
  std::vector<GroupElem> out;
  for (std::size_t i = 0; i < order(); ++i) out.push_back(GroupElem::index(i));
  return out;
}

bool Group::is_abelian() const {
  if (!is_finite()) return true;
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = 0; b < order(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

std::optional<std::size_t> Group::find_element(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::string Group::describe() const {
  if (is_finite()) return "finite group of order " + std::to_string(order());
  return "Z^" + std::to_string(rank_);
}

bool is_torsion_free(const Group& g) { return !g.is_finite() || g.order() == 1; }

ZSubgroup subgroup_of_Z(const std::vector<Int>& elements) {
  Int d = 0;
  for (Int e : elements) d = gcd_int(d, e);
  return ZSubgroup{d};
}

}  // namespace rigidity
