#include "rigidity/equivalence.hpp"

#include <algorithm>
#include <map>

namespace rigidity {

namespace {

// The units of U in one orbit. d[u] is the degree of some arrow (base, d, u).
struct Piece {
  std::vector<PointId> units;
  Int c = 0;  // generator of the isotropy
  std::map<PointId, Int> d;
};

Int reduce(Int v, Int c) { return c == 0 ? v : mod_pos(v, c); }

std::vector<Piece> pieces(const DRSystem& s, const DRGroupoid& g, const std::set<PointId>& u) {
  std::map<std::size_t, Piece> by_comp;
  for (PointId x : u) by_comp[s.component(x)].units.push_back(x);
  std::vector<Piece> out;
  for (auto& [comp, p] : by_comp) {
    const PointId base = p.units.front();
    p.c = s.stab(base).stab.generator;
    for (PointId x : p.units) p.d[x] = g.connect(Unit{base, 0}, Unit{x, 0})->tag;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Int> offsets_from(const Piece& p, PointId b) {
  std::vector<Int> out;
  for (PointId x : p.units) out.push_back(reduce(p.d.at(x) - p.d.at(b), p.c));
  std::sort(out.begin(), out.end());
  return out;
}

// Least offset multiset over all bases, and a base attaining it.
std::pair<std::vector<Int>, PointId> signature(const Piece& p) {
  std::pair<std::vector<Int>, PointId> best{offsets_from(p, p.units.front()), p.units.front()};
  for (PointId b : p.units) {
    auto o = offsets_from(p, b);
    if (o < best.first) best = {o, b};
  }
  return best;
}

struct Key {
  std::size_t size;
  Int c;
  bool cyclic;
  std::vector<Int> sig;
  auto operator<=>(const Key&) const = default;
};

Key key_of(const Piece& p, bool graded) {
  if (graded) return {p.units.size(), p.c, p.c != 0, signature(p).first};
  return {p.units.size(), 0, p.c != 0, {}};
}

// Units of p ordered for zipping: by normalised offset from the signature base
// when graded, by point otherwise.
std::vector<PointId> zip_order(const Piece& p, bool graded) {
  std::vector<PointId> units = p.units;
  if (graded) {
    const PointId b = signature(p).second;
    std::stable_sort(units.begin(), units.end(), [&](PointId x, PointId y) {
      return reduce(p.d.at(x) - p.d.at(b), p.c) < reduce(p.d.at(y) - p.d.at(b), p.c);
    });
  }
  return units;
}

struct Side {
  std::map<PointId, std::size_t> piece_of;
  std::vector<Piece> pieces;
};

Side make_side(const DRSystem& s, const DRGroupoid& g, const std::set<PointId>& u) {
  Side side;
  side.pieces = pieces(s, g, u);
  for (std::size_t i = 0; i < side.pieces.size(); ++i)
    for (PointId x : side.pieces[i].units) side.piece_of[x] = i;
  return side;
}

// (u, p, v) -> (f u, q, f v), with q = p when graded and otherwise the degree
// with the same winding number around the isotropy.
std::optional<Arrow> transport(const Side& from, const Side& to, const std::map<PointId, PointId>& f, bool graded,
                               const Groupoid& dom, const Arrow& a) {
  if (!dom.contains(a)) return std::nullopt;
  auto iu = f.find(a.range.point), iv = f.find(a.source.point);
  if (iu == f.end() || iv == f.end()) return std::nullopt;
  const PointId fu = iu->second, fv = iv->second;
  if (graded) return dr_arrow(fu, a.tag, fv);
  const Piece& p = from.pieces.at(from.piece_of.at(a.range.point));
  const Piece& q = to.pieces.at(to.piece_of.at(fu));
  const Int base = a.tag - (p.d.at(a.source.point) - p.d.at(a.range.point));
  const Int winding = p.c == 0 ? 0 : *exact_div(base, p.c);
  return dr_arrow(fu, add(q.d.at(fv) - q.d.at(fu), mul(winding, q.c)), fv);
}

}  // namespace

std::set<PointId> orbit_representatives(const DRSystem& s) {
  std::map<std::size_t, PointId> rep;
  for (PointId x = 0; x < s.size(); ++x) {
    auto it = rep.find(s.component(x));
    if (it == rep.end())
      rep[s.component(x)] = x;
    else if (!s.stab(it->second).on_cycle && s.stab(x).on_cycle)
      it->second = x;
  }
  std::set<PointId> out;
  for (auto [c, x] : rep) out.insert(x);
  return out;
}

KakutaniResult kakutani(DRSystemPtr s1, std::set<PointId> u1, DRSystemPtr s2, std::set<PointId> u2, bool graded,
                        Int bound) {
  KakutaniResult r;
  r.u1 = u1;
  r.u2 = u2;
  r.certificate = Certificate(graded ? "kakutani_graded" : "kakutani", bound);
  r.certificate.detail = json{{"graded", graded}};
  auto g1 = dr_groupoid(s1), g2 = dr_groupoid(s2);
  auto units = [](const std::set<PointId>& u) {
    std::set<Unit> out;
    for (PointId x : u) out.insert(Unit{x, 0});
    return out;
  };
  for (PointId x : u1)
    if (x >= s1->size()) throw std::invalid_argument("kakutani: point out of range in U1");
  for (PointId x : u2)
    if (x >= s2->size()) throw std::invalid_argument("kakutani: point out of range in U2");
  Certificate full1("full_U1", 0), full2("full_U2", 0);
  if (!is_full(*g1, units(u1))) full1.fail_with([&] { return json{{"reason", "U1 misses an orbit"}}; });
  if (!is_full(*g2, units(u2))) full2.fail_with([&] { return json{{"reason", "U2 misses an orbit"}}; });
  const bool full = full1.pass && full2.pass;
  r.certificate.add(std::move(full1));
  r.certificate.add(std::move(full2));
  if (!full) return r;

  Side a = make_side(*s1, *g1, u1), b = make_side(*s2, *g2, u2);
  Certificate match("match_orbits", 0);
  std::map<Key, std::vector<std::size_t>> pool;
  for (std::size_t j = 0; j < b.pieces.size(); ++j) pool[key_of(b.pieces[j], graded)].push_back(j);
  std::map<PointId, PointId> f, finv;
  if (a.pieces.size() != b.pieces.size())
    match.fail_with([&] {
      return json{{"reason", "orbit counts differ"}, {"orbits_1", a.pieces.size()}, {"orbits_2", b.pieces.size()}};
    });
  for (std::size_t i = 0; i < a.pieces.size() && match.pass; ++i) {
    Key k = key_of(a.pieces[i], graded);
    auto it = pool.find(k);
    if (it == pool.end() || it->second.empty()) {
      match.fail_with([&] {
        return json{{"reason", "no matching orbit"},
                    {"orbit_of", s1->name(a.pieces[i].units.front())},
                    {"units", a.pieces[i].units.size()},
                    {"isotropy", a.pieces[i].c}};
      });
      break;
    }
    const std::size_t j = it->second.front();
    it->second.erase(it->second.begin());
    auto xs = zip_order(a.pieces[i], graded), ys = zip_order(b.pieces[j], graded);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      f[xs[t]] = ys[t];
      finv[ys[t]] = xs[t];
    }
  }
  const bool matched = match.pass;
  r.certificate.add(std::move(match));
  if (!matched) return r;

  auto r1 = restrict(g1, units(u1)), r2 = restrict(g2, units(u2));
  ArrowMap kappa;
  kappa.name = "kappa";
  kappa.forward = [a, b, f, graded, r1](const Arrow& x) { return transport(a, b, f, graded, *r1, x); };
  kappa.inverse = [a, b, finv, graded, r2](const Arrow& y) { return transport(b, a, finv, graded, *r2, y); };
  Certificate iso = [&] {
    if (!graded) return verify_iso(*r1, *r2, kappa, bound);
    Grading c1 = degree_grading(), c2 = degree_grading();
    return verify_iso(*r1, *r2, kappa, bound, &c1, &c2);
  }();
  r.certificate.add(std::move(iso));
  r.equivalent = r.certificate.pass;
  r.unit_map.assign(f.begin(), f.end());
  r.kappa = std::move(kappa);
  return r;
}

KakutaniResult equiv_decide(DRSystemPtr s1, DRSystemPtr s2, bool graded, Int bound) {
  auto u1 = orbit_representatives(*s1), u2 = orbit_representatives(*s2);
  return kakutani(std::move(s1), u1, std::move(s2), u2, graded, bound);
}

json kakutani_json(const DRSystem& s1, const DRSystem& s2, const KakutaniResult& r) {
  auto names = [](const DRSystem& s, const std::set<PointId>& u) {
    json out = json::array();
    for (PointId x : u) out.push_back(s.name(x));
    return out;
  };
  json out{{"equivalent", r.equivalent}, {"U1", names(s1, r.u1)}, {"U2", names(s2, r.u2)}};
  if (r.equivalent) {
    json m = json::object();
    for (auto [x, y] : r.unit_map) m[s1.name(x)] = s2.name(y);
    out["unit_map"] = m;
  } else {
    out["unit_map"] = nullptr;
  }
  out["certificate"] = r.certificate.to_json();
  return out;
}

}  // namespace rigidity
