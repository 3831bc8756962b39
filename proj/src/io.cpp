#include "rigidity/io.hpp"

#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace rigidity {

LoadError::LoadError(const std::string& source, std::optional<std::size_t> line, std::optional<std::size_t> column,
                     const std::string& message)
    : std::runtime_error(line ? source + ":" + std::to_string(*line) + ":" + std::to_string(column.value_or(1)) + ": " +
                                    message
                              : source + ": " + message),
      source_(source),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, std::nullopt, std::nullopt, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Positions and lookups for one TOML document.
class Doc {
 public:
  Doc(const std::string& text, std::string source) : source_(std::move(source)) {
    try {
      root_ = toml::parse(text, source_);
    } catch (const toml::parse_error& e) {
      throw LoadError(source_, e.source().begin.line, e.source().begin.column, std::string(e.description()));
    }
  }

  [[noreturn]] void error(const toml::node* at, const std::string& msg) const {
    if (at && at->source().begin) throw LoadError(source_, at->source().begin.line, at->source().begin.column, msg);
    throw LoadError(source_, std::nullopt, std::nullopt, msg);
  }

  const toml::table& root() const { return root_; }

  const toml::table& table(const toml::table& parent, const std::string& key, const toml::node* ctx) const {
    const toml::node* n = parent.get(key);
    if (!n) error(ctx, "missing table '" + key + "'");
    if (!n->is_table()) error(n, "'" + key + "' must be a table");
    return *n->as_table();
  }

  const toml::table* optional_table(const toml::table& parent, const std::string& key) const {
    const toml::node* n = parent.get(key);
    if (!n) return nullptr;
    if (!n->is_table()) error(n, "'" + key + "' must be a table");
    return n->as_table();
  }

  const toml::array& array(const toml::table& parent, const std::string& key, const toml::node* ctx) const {
    const toml::node* n = parent.get(key);
    if (!n) error(ctx, "missing array '" + key + "'");
    if (!n->is_array()) error(n, "'" + key + "' must be an array");
    return *n->as_array();
  }

  std::string string(const toml::node& n, const std::string& what) const {
    if (!n.is_string()) error(&n, what + " must be a string");
    return n.as_string()->get();
  }

  Int integer(const toml::node& n, const std::string& what) const {
    if (!n.is_integer()) error(&n, what + " must be an integer");
    return n.as_integer()->get();
  }

  std::vector<std::string> strings(const toml::array& a, const std::string& what) const {
    std::vector<std::string> out;
    for (const auto& n : a) out.push_back(string(n, what));
    return out;
  }

 private:
  std::string source_;
  toml::table root_;
};

PointId point_index(const Doc& d, const toml::node* at, const std::vector<std::string>& names, const std::string& n) {
  for (PointId x = 0; x < names.size(); ++x)
    if (names[x] == n) return x;
  d.error(at, "unknown point '" + n + "'");
}

std::vector<std::string> unique_points(const Doc& d, const toml::array& a) {
  auto names = d.strings(a, "point name");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names[i] == names[j]) d.error(a.get(i), "duplicate point '" + names[i] + "'");
  return names;
}

Group group_from(const Doc& d, const toml::table& g) {
  const toml::node* kind = g.get("kind");
  if (!kind) d.error(&g, "group needs 'kind'");
  const std::string k = d.string(*kind, "kind");
  if (k == "free-abelian") {
    const toml::node* r = g.get("rank");
    if (!r) d.error(&g, "free-abelian group needs 'rank'");
    Int rank = d.integer(*r, "rank");
    if (rank < 0) d.error(r, "rank must be nonnegative");
    return Group::free_abelian(static_cast<std::size_t>(rank));
  }
  if (k != "finite") d.error(kind, "kind must be \"finite\" or \"free-abelian\"");
  const toml::array& rows = d.array(g, "table", &g);
  std::vector<std::vector<std::size_t>> table;
  for (const auto& row : rows) {
    if (!row.is_array()) d.error(&row, "table rows must be arrays");
    table.emplace_back();
    for (const auto& v : *row.as_array()) {
      Int e = d.integer(v, "table entry");
      if (e < 0) d.error(&v, "table entries must be nonnegative");
      table.back().push_back(static_cast<std::size_t>(e));
    }
  }
  std::vector<std::string> names;
  if (g.get("names")) names = d.strings(d.array(g, "names", &g), "element name");
  try {
    return Group::finite(std::move(table), std::move(names));
  } catch (const std::invalid_argument& e) {
    d.error(&rows, e.what());
  }
}

// Inline table keyed by point names of `from`, with values of type T.
template <class F>
void each_entry(const Doc& d, const toml::table& t, const std::vector<std::string>& names, F&& f) {
  for (const auto& [key, value] : t) f(point_index(d, &value, names, std::string(key.str())), value);
}

std::vector<PointId> point_map(const Doc& d, const toml::table& sec, const std::string& key, const DRSystem& from,
                               const DRSystem& to) {
  const toml::table& t = d.table(sec, key, &sec);
  std::vector<std::optional<PointId>> out(from.size());
  each_entry(d, t, from.names(), [&](PointId x, const toml::node& v) {
    out[x] = point_index(d, &v, to.names(), d.string(v, key + " value"));
  });
  std::vector<PointId> res;
  for (PointId x = 0; x < from.size(); ++x) {
    if (!out[x]) d.error(&t, "'" + key + "' has no value for point '" + from.name(x) + "'");
    res.push_back(*out[x]);
  }
  return res;
}

Transfer transfer(const Doc& d, const toml::table& sec, const std::string& key, const DRSystem& s) {
  const toml::table& t = d.table(sec, key, &sec);
  Transfer out(s.size());
  each_entry(d, t, s.names(), [&](PointId x, const toml::node& v) { out[x] = d.integer(v, key + " value"); });
  return out;
}

std::vector<Int> totals(const Doc& d, const toml::table& sec, const std::string& key, const DRSystem& s) {
  Transfer t = transfer(d, sec, key, s);
  std::vector<Int> out;
  for (PointId x = 0; x < s.size(); ++x) {
    if (!t[x]) d.error(&sec, "'" + key + "' has no value for point '" + s.name(x) + "'");
    out.push_back(*t[x]);
  }
  return out;
}

std::pair<std::string, std::string> split_pair(const Doc& d, const toml::node* at, const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos) d.error(at, "key '" + key + "' must have the form \"point,element\"");
  return {key.substr(0, comma), key.substr(comma + 1)};
}

std::size_t element_index(const Doc& d, const toml::node* at, const Group& g, const std::string& n) {
  auto e = g.find_element(n);
  if (!e) d.error(at, "unknown group element '" + n + "'");
  return *e;
}

// "x,g" -> value table over all pairs.
template <class F>
std::vector<std::vector<std::size_t>> pair_table(const Doc& d, const toml::table& t, const GroupAction& a,
                                                 const std::string& what, F&& value) {
  const std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> out(a.size(), std::vector<std::size_t>(a.group().order(), unset));
  for (const auto& [key, v] : t) {
    auto [p, g] = split_pair(d, &v, std::string(key.str()));
    auto x = a.find(p);
    if (!x) d.error(&v, "unknown point '" + p + "'");
    out[*x][element_index(d, &v, a.group(), g)] = value(v);
  }
  for (PointId x = 0; x < a.size(); ++x)
    for (std::size_t g = 0; g < a.group().order(); ++g)
      if (out[x][g] == unset)
        d.error(&t, what + " has no value for \"" + a.name(x) + "," + a.group().element_name(g) + "\"");
  return out;
}

}  // namespace

DRSystemPtr parse_system(const std::string& text, const std::string& source) {
  Doc d(text, source);
  const toml::table& sys = d.table(d.root(), "system", nullptr);
  auto names = unique_points(d, d.array(sys, "points", &sys));
  std::vector<std::optional<PointId>> sigma(names.size());
  if (const toml::table* map = d.optional_table(sys, "sigma"))
    each_entry(d, *map, names, [&](PointId x, const toml::node& v) {
      sigma[x] = point_index(d, &v, names, d.string(v, "sigma value"));
    });
  return std::make_shared<DRSystem>(std::move(names), std::move(sigma));
}

DRSystemPtr load_system(const std::string& path) { return parse_system(read_file(path), path); }

Group parse_group(const std::string& text, const std::string& source) {
  Doc d(text, source);
  return group_from(d, d.table(d.root(), "group", nullptr));
}

GroupActionPtr parse_action(const std::string& text, const std::string& source) {
  Doc d(text, source);
  const toml::table& act = d.table(d.root(), "action", nullptr);
  Group g = Group::trivial();
  if (const toml::table* inline_group = d.optional_table(d.root(), "group")) {
    g = group_from(d, *inline_group);
  } else {
    const toml::node* name = act.get("group");
    if (!name) d.error(&act, "action needs 'group' or a [group] table");
    try {
      g = builtin_group(d.string(*name, "group"));
    } catch (const std::invalid_argument& e) {
      d.error(name, e.what());
    }
  }
  if (!g.is_finite()) d.error(&act, "only finite groups act");
  auto names = unique_points(d, d.array(act, "points", &act));
  const toml::table& map = d.table(act, "map", &act);
  const std::size_t unset = names.size();
  std::vector<std::vector<PointId>> table(names.size(), std::vector<PointId>(g.order(), unset));
  for (const auto& [key, v] : map) {
    auto [p, e] = split_pair(d, &v, std::string(key.str()));
    PointId x = point_index(d, &v, names, p);
    table[x][element_index(d, &v, g, e)] = point_index(d, &v, names, d.string(v, "action value"));
  }
  for (PointId x = 0; x < names.size(); ++x)
    for (std::size_t e = 0; e < g.order(); ++e)
      if (table[x][e] == unset) d.error(&map, "action has no value for \"" + names[x] + "," + g.element_name(e) + "\"");
  try {
    return std::make_shared<GroupAction>(std::move(g), std::move(names), std::move(table));
  } catch (const std::invalid_argument& e) {
    d.error(&map, e.what());
  }
}

GroupActionPtr load_action(const std::string& path) { return parse_action(read_file(path), path); }

COEData parse_coe(const std::string& text, const DRSystem& s, const DRSystem& t, const std::string& source) {
  Doc d(text, source);
  const toml::table& sec = d.table(d.root(), "coe", nullptr);
  COEData c;
  c.h = point_map(d, sec, "h", s, t);
  c.l = transfer(d, sec, "l", s);
  c.k = transfer(d, sec, "k", s);
  c.lp = transfer(d, sec, "lprime", t);
  c.kp = transfer(d, sec, "kprime", t);
  return c;
}

COEData load_coe(const std::string& path, const DRSystem& s, const DRSystem& t) {
  return parse_coe(read_file(path), s, t, path);
}

TSCData parse_tsc(const std::string& text, const DRSystem& s, const DRSystem& t, const std::string& source) {
  Doc d(text, source);
  const toml::table& sec = d.table(d.root(), "tsc", nullptr);
  TSCData c;
  c.f = point_map(d, sec, "f", s, t);
  c.fp = point_map(d, sec, "fprime", t, s);
  c.a = totals(d, sec, "a", s);
  c.ap = totals(d, sec, "aprime", t);
  c.k = transfer(d, sec, "k", s);
  c.kp = transfer(d, sec, "kprime", t);
  return c;
}

TSCData load_tsc(const std::string& path, const DRSystem& s, const DRSystem& t) {
  return parse_tsc(read_file(path), s, t, path);
}

ActionCOE parse_action_coe(const std::string& text, const GroupAction& a, const GroupAction& b,
                           const std::string& source) {
  Doc d(text, source);
  const toml::table& sec = d.table(d.root(), "action_coe", nullptr);
  ActionCOE c;
  const toml::table& h = d.table(sec, "h", &sec);
  std::vector<std::optional<PointId>> hv(a.size());
  each_entry(d, h, a.names(),
             [&](PointId x, const toml::node& v) { hv[x] = point_index(d, &v, b.names(), d.string(v, "h value")); });
  for (PointId x = 0; x < a.size(); ++x) {
    if (!hv[x]) d.error(&h, "'h' has no value for point '" + a.name(x) + "'");
    c.h.push_back(*hv[x]);
  }
  c.phi = pair_table(d, d.table(sec, "phi", &sec), a, "phi",
                     [&](const toml::node& v) { return element_index(d, &v, b.group(), d.string(v, "phi value")); });
  c.eta = pair_table(d, d.table(sec, "eta", &sec), b, "eta",
                     [&](const toml::node& v) { return element_index(d, &v, a.group(), d.string(v, "eta value")); });
  return c;
}

ActionCOE load_action_coe(const std::string& path, const GroupAction& a, const GroupAction& b) {
  return parse_action_coe(read_file(path), a, b, path);
}

}  // namespace rigidity
