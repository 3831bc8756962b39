#include "rigidity/coe.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rigidity {

std::vector<PointId> COEData::h_inverse() const {
  std::vector<PointId> inv(h.size());
  for (PointId x = 0; x < h.size(); ++x) inv.at(h[x]) = x;
  return inv;
}

COEData COEData::reversed() const { return COEData{h_inverse(), lp, kp, l, k}; }

Int iterate_sum(const DRSystem& s, const Transfer& f, Int m, PointId x) {
  if (m < 0) throw std::domain_error("iterate_sum: negative power");
  Int total = 0;
  PointId cur = x;
  for (Int i = 0; i < m; ++i) {
    auto nxt = s.sigma(cur);
    if (!nxt || cur >= f.size() || !f[cur]) throw std::domain_error("iterate_sum: point outside dom(sigma^m)");
    total = add(total, *f[cur]);
    cur = *nxt;
  }
  return total;
}

namespace {

json point_or_null(const DRSystem& s, std::optional<PointId> p) { return p ? json(s.name(*p)) : json(nullptr); }

void check_transfer(Certificate& c, const DRSystem& s, const Transfer& f, const char* label) {
  if (f.size() != s.size()) {
    c.fail_with([&] { return json{{"map", label}, {"reason", "wrong number of entries"}}; });
    return;
  }
  for (PointId x = 0; x < s.size(); ++x) {
    const bool in_dom = s.sigma(x).has_value();
    if (in_dom && !f[x])
      c.fail_with([&] { return json{{"map", label}, {"point", s.name(x)}, {"reason", "undefined on dom(sigma)"}}; });
    if (!in_dom && f[x])
      c.fail_with([&] { return json{{"map", label}, {"point", s.name(x)}, {"reason", "defined outside dom(sigma)"}}; });
    if (f[x] && *f[x] < 0)
      c.fail_with([&] { return json{{"map", label}, {"point", s.name(x)}, {"reason", "negative value"}}; });
  }
}

// Checks b^l(g(x)) = b^k(g(a(x))) for x in dom(a).
Certificate intertwining(const char* name, const DRSystem& a, const DRSystem& b, const std::vector<PointId>& g,
                         const Transfer& l, const Transfer& k) {
  Certificate c(name, 0);
  for (PointId x = 0; x < a.size(); ++x) {
    auto ax = a.sigma(x);
    if (!ax) continue;
    auto lhs = b.iterate(g[x], *l[x]);
    auto rhs = b.iterate(g[*ax], *k[x]);
    if (!lhs || !rhs || *lhs != *rhs) {
      c.fail_with(
          [&] { return json{{"point", a.name(x)}, {"lhs", point_or_null(b, lhs)}, {"rhs", point_or_null(b, rhs)}}; });
    }
  }
  return c;
}

std::optional<Int> stab_bound(const DRSystem& s, PointId x, bool essential) {
  if (!essential) return s.stab(x).stab_min;
  Int g = s.stab_ess(x).generator;
  if (g == 0) return std::nullopt;
  return g;
}

// The sum identity on one side: for periodic x, |sum over the period of (l-k)| = Stab_min(g(x)).
Certificate stab_sums(const char* name, const DRSystem& a, const DRSystem& b, const std::vector<PointId>& g,
                      const Transfer& l, const Transfer& k, bool essential) {
  Certificate c(name, 0);
  for (PointId x = 0; x < a.size() && c.pass; ++x) {
    auto p = stab_bound(a, x, essential);
    if (!p || a.iterate(x, *p) != std::optional<PointId>(x)) continue;
    Int sum = sub(iterate_sum(a, l, *p, x), iterate_sum(a, k, *p, x));
    auto target = stab_bound(b, g[x], essential);
    if (!target || abs_int(sum) != *target) {
      c.fail_with([&] {
        return json{{"point", a.name(x)}, {"sum", sum}, {"stab_min_image", target ? json(*target) : json("infinite")}};
      });
    }
  }
  return c;
}

// Some degree p with (a, p, b) an arrow, if a and b share a component.
std::optional<Int> some_degree(const DRSystem& s, PointId a, PointId b) {
  std::vector<Int> first(s.size(), -1);
  std::optional<PointId> cur = a;
  for (Int i = 0; cur && i <= static_cast<Int>(2 * s.size()); ++i) {
    if (first[*cur] < 0) first[*cur] = i;
    cur = s.sigma(*cur);
  }
  cur = b;
  for (Int j = 0; cur && j <= static_cast<Int>(2 * s.size()); ++j) {
    if (first[*cur] >= 0) return first[*cur] - j;
    cur = s.sigma(*cur);
  }
  return std::nullopt;
}

}  // namespace

Certificate verify_coe(const DRSystem& S, const DRSystem& T, const COEData& d) {
  Certificate cert("verify_coe", 0);
  Certificate shape("shape", 0);
  if (S.size() != T.size() || d.h.size() != S.size()) {
    shape.fail_with([&] { return json{{"reason", "h is not a map between equinumerous point sets"}}; });
  } else {
    std::vector<bool> hit(T.size(), false);
    for (PointId x = 0; x < S.size(); ++x) {
      if (d.h[x] >= T.size()) {
        shape.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "h value out of range"}}; });
      } else if (hit[d.h[x]]) {
        shape.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "h not injective"}}; });
      } else {
        hit[d.h[x]] = true;
      }
    }
    check_transfer(shape, S, d.l, "l");
    check_transfer(shape, S, d.k, "k");
    check_transfer(shape, T, d.lp, "lprime");
    check_transfer(shape, T, d.kp, "kprime");
  }
  const bool ok = shape.pass;
  cert.add(std::move(shape));
  if (!ok) return cert;
  cert.add(intertwining("forward", S, T, d.h, d.l, d.k));
  cert.add(intertwining("backward", T, S, d.h_inverse(), d.lp, d.kp));
  return cert;
}

Certificate preserves_stab(const DRSystem& S, const DRSystem& T, const COEData& d, bool essential) {
  Certificate cert(essential ? "preserves_stab_ess" : "preserves_stab", 0);
  Certificate pre = verify_coe(S, T, d);
  pre.check = "precondition";
  if (!pre.pass) {
    cert.add(std::move(pre));
    return cert;
  }
  Certificate fin("finiteness", 0);
  for (PointId x = 0; x < S.size(); ++x) {
    if (stab_bound(S, x, essential).has_value() != stab_bound(T, d.h[x], essential).has_value()) {
      fin.fail_with([&] { return json{{"point", S.name(x)}, {"image", T.name(d.h[x])}}; });
    }
  }
  cert.add(std::move(fin));
  cert.add(stab_sums("sums_X", S, T, d.h, d.l, d.k, essential));
  cert.add(stab_sums("sums_Y", T, S, d.h_inverse(), d.lp, d.kp, essential));
  return cert;
}

Int cocycle_value_at(const DRSystem& S, const COEData& d, const Arrow& a, Witness w) {
  const PointId x = a.range.point, y = a.source.point;
  Int v = sub(iterate_sum(S, d.l, w.m, x), iterate_sum(S, d.k, w.m, x));
  return sub(v, sub(iterate_sum(S, d.l, w.n, y), iterate_sum(S, d.k, w.n, y)));
}

Int cocycle_value(const DRSystem& S, const COEData& d, const Arrow& a) {
  auto w = S.member(a.range.point, a.tag, a.source.point);
  if (!w) throw std::invalid_argument("cocycle_value: not an arrow of G(X)");
  return cocycle_value_at(S, d, a, *w);
}

CocycleResult cocycle_of(DRSystemPtr S, const COEData& d, Int bound) {
  CocycleResult out;
  out.grading = Grading{"c_coe", Group::integers(),
                        [S, d](const Arrow& a) { return GroupElem::integer(cocycle_value(*S, d, a)); }};
  out.certificate = Certificate("cocycle_of", bound);
  auto G = dr_groupoid(S);
  Certificate indep("witness_independence", bound);
  for (const Arrow& a : G->elements(bound)) {
    const Witness w = *S->member(a.range.point, a.tag, a.source.point);
    const Int v = cocycle_value_at(*S, d, a, w);
    std::vector<Witness> others;
    const PointId meet = *S->iterate(a.range.point, w.m);
    if (S->sigma(meet)) others.push_back(Witness{w.m + 1, w.n + 1});
    if (Int period = S->eventual_cycle(Unit{meet, 0}).first; period > 0) {
      others.push_back(Witness{add(w.m, period), add(w.n, period)});
    }
    for (const Witness& o : others) {
      Int v2 = cocycle_value_at(*S, d, a, o);
      if (v2 != v) {
        indep.fail_with([&] {
          return json{{"arrow", G->arrow_json(a)},
                      {"witnesses", json::array({json::array({w.m, w.n}), json::array({o.m, o.n})})},
                      {"values", json::array({v, v2})}};
        });
      }
    }
  }
  out.certificate.add(std::move(indep));
  Certificate ident = check_cocycle(*G, out.grading, bound);
  ident.check = "cocycle_identity";
  out.certificate.add(std::move(ident));
  return out;
}

ArrowMap theta(DRSystemPtr S, DRSystemPtr T, const COEData& d) {
  ArrowMap m;
  m.name = "theta";
  m.forward = [S, T, d](const Arrow& a) -> std::optional<Arrow> {
    if (a.range.level != 0 || a.source.level != 0) return std::nullopt;
    if (a.range.point >= S->size() || a.source.point >= S->size()) return std::nullopt;
    auto w = S->member(a.range.point, a.tag, a.source.point);
    if (!w) return std::nullopt;
    try {
      return dr_arrow(d.h.at(a.range.point), cocycle_value_at(*S, d, a, *w), d.h.at(a.source.point));
    } catch (const std::domain_error&) {
      return std::nullopt;
    } catch (const std::out_of_range&) {
      return std::nullopt;
    }
  };
  // Any arrow between h^-1(y) and h^-1(y') lies on one coset of Stab, and the
  // cocycle moves along it by pi_x; solve for the coset element with the right degree.
  const auto hinv = d.h_inverse();
  m.inverse = [S, T, d, hinv, fwd = m.forward](const Arrow& b) -> std::optional<Arrow> {
    if (b.range.level != 0 || b.source.level != 0) return std::nullopt;
    if (b.range.point >= T->size() || b.source.point >= T->size()) return std::nullopt;
    if (!T->member(b.range.point, b.tag, b.source.point)) return std::nullopt;
    const PointId x = hinv.at(b.range.point), x2 = hinv.at(b.source.point);
    auto q = some_degree(*S, x, x2);
    if (!q) return std::nullopt;
    auto base = fwd(dr_arrow(x, *q, x2));
    if (!base) return std::nullopt;
    const Int diff = sub(b.tag, base->tag);
    if (diff == 0) return dr_arrow(x, *q, x2);
    const Int s = S->stab(x).stab.generator;
    if (s == 0) return std::nullopt;
    auto loop = fwd(dr_arrow(x, s, x));
    if (!loop) return std::nullopt;
    auto j = exact_div(diff, loop->tag);
    if (!j || loop->tag == 0) return std::nullopt;
    return dr_arrow(x, add(*q, mul(*j, s)), x2);
  };
  return m;
}

PiResult pi_x(const DRSystem& S, const COEData& d) {
  PiResult out;
  out.certificate = Certificate("pi_x", 0);
  Certificate constancy("constancy", 0);
  std::map<std::size_t, PiX> by_comp;
  for (PointId x = 0; x < S.size(); ++x) {
    auto [it, fresh] = by_comp.try_emplace(S.component(x));
    PiX& rec = it->second;
    if (fresh) {
      rec.representative = x;
      rec.generator = S.stab(x).stab.generator;
      if (rec.generator != 0) rec.image = cocycle_value(S, d, dr_arrow(x, rec.generator, x));
      continue;
    }
    if (rec.generator == 0) continue;
    Int v = cocycle_value(S, d, dr_arrow(x, rec.generator, x));
    if (v != rec.image) {
      constancy.fail_with([&] {
        return json{{"representative", S.name(rec.representative)},
                    {"point", S.name(x)},
                    {"values", json::array({rec.image, v})}};
      });
    }
  }
  for (auto& [c, rec] : by_comp) out.orbits.push_back(rec);
  std::sort(out.orbits.begin(), out.orbits.end(),
            [](const PiX& a, const PiX& b) { return a.representative < b.representative; });
  out.certificate.add(std::move(constancy));
  return out;
}

COEData extract_coe(DRSystemPtr S, DRSystemPtr T, const ArrowMap& m, Int bound) {
  auto GX = dr_groupoid(S);
  auto GY = dr_groupoid(T);
  Certificate iso = verify_iso(*GX, *GY, m, bound);
  if (!iso.pass) throw std::invalid_argument("extract_coe: map is not an isomorphism: " + iso.witness.dump());

  COEData d;
  d.h.resize(S->size());
  for (PointId x = 0; x < S->size(); ++x) d.h[x] = m(GX->unit_arrow(Unit{x, 0}))->range.point;
  d.l.assign(S->size(), std::nullopt);
  d.k.assign(S->size(), std::nullopt);
  for (PointId x = 0; x < S->size(); ++x) {
    auto sx = S->sigma(x);
    if (!sx) continue;
    Arrow img = *m(dr_arrow(x, 1, *sx));
    Int l = l_X(*T, img);
    d.l[x] = l;
    d.k[x] = sub(l, c_X(img));
  }

  auto preimage = [&](const Arrow& target) -> Arrow {
    if (m.inverse) {
      if (auto p = m.inverse(target)) return *p;
    }
    for (Int b = std::max<Int>(bound, 1); b <= 8 * std::max<Int>(bound, 1); b *= 2) {
      for (const Arrow& a : GX->elements(b))
        if (m(a) == std::optional<Arrow>(target)) return a;
    }
    throw std::invalid_argument("extract_coe: no preimage found for " + GY->arrow_json(target).dump());
  };
  d.lp.assign(T->size(), std::nullopt);
  d.kp.assign(T->size(), std::nullopt);
  for (PointId y = 0; y < T->size(); ++y) {
    auto ty = T->sigma(y);
    if (!ty) continue;
    Arrow pre = preimage(dr_arrow(y, 1, *ty));
    Int l = l_X(*S, pre);
    d.lp[y] = l;
    d.kp[y] = sub(l, c_X(pre));
  }
  return d;
}

bool is_eventual_conjugacy(const DRSystem& S, const DRSystem& T, const COEData& d) {
  if (d.l.size() != S.size() || d.k.size() != S.size()) return false;
  for (PointId x = 0; x < S.size(); ++x) {
    if (S.sigma(x) && (!d.l[x] || !d.k[x] || *d.l[x] != *d.k[x] + 1)) return false;
  }
  return preserves_stab(S, T, d).pass;
}

namespace {

struct Candidate {
  Int l, k, p;
};

// Minimal witnesses (l, k) with values <= V for each degree of (a, p, b) in a
// system, sorted by (l, k). Non-minimal witnesses of the same degree are
// dominated in both the search order and every sum condition. With
// `degree_one`, only p = 1 is kept.
class CandidateTable {
 public:
  CandidateTable(const DRSystem& s, Int v, bool degree_one) : s_(s), v_(v), degree_one_(degree_one) {}

  const std::vector<Candidate>& get(PointId a, PointId b) {
    auto [it, fresh] = cache_.try_emplace({a, b});
    if (!fresh) return it->second;
    auto& out = it->second;
    auto p0 = some_degree(s_, a, b);
    if (!p0) return out;
    const Int step = s_.stab(a).stab.generator;
    std::vector<Int> degrees;
    if (step == 0) {
      if (abs_int(*p0) <= v_) degrees.push_back(*p0);
    } else {
      for (Int p = -v_ + mod_pos(*p0 + v_, step); p <= v_; p += step) degrees.push_back(p);
    }
    for (Int p : degrees) {
      if (degree_one_ && p != 1) continue;
      auto w = s_.member(a, p, b);
      if (w && w->m <= v_ && w->n <= v_) out.push_back(Candidate{w->m, w->n, p});
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return std::tie(x.l, x.k) < std::tie(y.l, y.k); });
    return out;
  }

 private:
  const DRSystem& s_;
  Int v_;
  bool degree_one_;
  std::map<std::pair<PointId, PointId>, std::vector<Candidate>> cache_;
};

// Subset of [-radius, radius] with O(1) insert and lookup.
class SumSet {
 public:
  explicit SumSet(Int radius = 0) : radius_(radius), mark_(static_cast<std::size_t>(2 * radius + 1), 0) {}
  void insert(Int v) {
    char& m = mark_[static_cast<std::size_t>(v + radius_)];
    if (!m) {
      m = 1;
      members_.push_back(v);
    }
  }
  bool count(Int v) const { return v >= -radius_ && v <= radius_ && mark_[static_cast<std::size_t>(v + radius_)]; }
  const std::vector<Int>& members() const { return members_; }

 private:
  Int radius_;
  std::vector<char> mark_;
  std::vector<Int> members_;
};

using Choices = std::optional<std::vector<std::size_t>>;
// Solutions of the sum condition per cycle, keyed by the cycle's first point
// followed by its images. Valid for one (a, b, table, require).
using CycleMemo = std::map<std::vector<PointId>, Choices>;

// Least candidate indices along the sorted cycle c whose degrees sum to
// +-Stab_min(g(c)), with exact suffix reachability.
Choices solve_cycle(const DRSystem& b, const std::vector<PointId>& c, const std::vector<PointId>& g,
                    const std::vector<const std::vector<Candidate>*>& cands) {
  const Int target = *b.stab(g[c.front()]).stab_min;
  Int bound = 0;
  for (PointId x : c)
    for (const Candidate& cd : *cands[x]) bound = std::max(bound, abs_int(cd.p));
  const Int radius = mul(bound, static_cast<Int>(c.size()));
  // reach[i]: sums of candidate degrees over positions i.. of c.
  std::vector<SumSet> reach(c.size() + 1, SumSet(radius));
  reach[c.size()].insert(0);
  for (std::size_t i = c.size(); i-- > 0;)
    for (const Candidate& cd : *cands[c[i]])
      for (Int r : reach[i + 1].members()) reach[i].insert(cd.p + r);
  if (!reach[0].count(target) && !reach[0].count(-target)) return std::nullopt;
  std::vector<std::size_t> choice(c.size(), 0);
  Int partial = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& cs = *cands[c[i]];
    bool found = false;
    for (std::size_t j = 0; j < cs.size() && !found; ++j) {
      const Int s = add(partial, cs[j].p);
      if (reach[i + 1].count(target - s) || reach[i + 1].count(-target - s)) {
        choice[i] = j;
        partial = s;
        found = true;
      }
    }
    if (!found) return std::nullopt;  // unreachable given the reachability check
  }
  return choice;
}

// Least (l, k) on dom(a) for the bijection g: A -> B, or nullopt.
std::optional<std::pair<Transfer, Transfer>> solve_side(const DRSystem& a, const DRSystem& b,
                                                        const std::vector<PointId>& g, CandidateTable& table,
                                                        Require require, CycleMemo& memo) {
  const std::size_t n = a.size();
  std::vector<const std::vector<Candidate>*> cands(n, nullptr);
  for (PointId x = 0; x < n; ++x) {
    auto ax = a.sigma(x);
    if (!ax) continue;
    cands[x] = &table.get(g[x], g[*ax]);
    if (cands[x]->empty()) return std::nullopt;
  }

  std::vector<std::size_t> choice(n, 0);
  if (require != Require::None) {
    for (PointId x = 0; x < n; ++x) {
      if (a.stab(x).stab_min.has_value() != b.stab(g[x]).stab_min.has_value()) return std::nullopt;
    }
    // One sum condition per cycle of a; cycles are independent.
    std::vector<bool> seen(n, false);
    for (PointId x = 0; x < n; ++x) {
      if (!a.stab(x).on_cycle || seen[x]) continue;
      std::vector<PointId> c;
      PointId cur = x;
      do {
        seen[cur] = true;
        c.push_back(cur);
        cur = *a.sigma(cur);
      } while (cur != x);
      std::sort(c.begin(), c.end());
      std::vector<PointId> key{c.front()};
      for (PointId y : c) key.push_back(g[y]);
      auto [it, fresh] = memo.try_emplace(std::move(key));
      if (fresh) it->second = solve_cycle(b, c, g, cands);
      if (!it->second) return std::nullopt;
      for (std::size_t i = 0; i < c.size(); ++i) choice[c[i]] = (*it->second)[i];
    }
  }

  Transfer l(n), k(n);
  for (PointId x = 0; x < n; ++x) {
    if (!a.sigma(x)) continue;
    l[x] = (*cands[x])[choice[x]].l;
    k[x] = (*cands[x])[choice[x]].k;
  }
  return std::make_pair(std::move(l), std::move(k));
}

}  // namespace

std::optional<COEData> search_coe_for(const DRSystem& S, const DRSystem& T, const std::vector<PointId>& h,
                                      Int value_bound, Require require) {
  const bool degree_one = require == Require::Eventual;
  CandidateTable ty(T, value_bound, degree_one), tx(S, value_bound, degree_one);
  CycleMemo my, mx;
  COEData d{h, {}, {}, {}, {}};
  auto primal = solve_side(S, T, h, ty, require, my);
  if (!primal) return std::nullopt;
  auto dual = solve_side(T, S, d.h_inverse(), tx, require, mx);
  if (!dual) return std::nullopt;
  d.l = std::move(primal->first);
  d.k = std::move(primal->second);
  d.lp = std::move(dual->first);
  d.kp = std::move(dual->second);
  return d;
}

std::optional<COEData> search_coe(const DRSystem& S, const DRSystem& T, std::optional<Int> value_bound,
                                  Require require) {
  if (S.size() != T.size()) return std::nullopt;
  const Int v = value_bound.value_or(static_cast<Int>(2 * S.size() * T.size()));
  const bool degree_one = require == Require::Eventual;
  CandidateTable ty(T, v, degree_one), tx(S, v, degree_one);
  CycleMemo my, mx;
  std::vector<PointId> h(S.size());
  std::iota(h.begin(), h.end(), PointId{0});
  do {
    // Components must correspond before any transfer data can exist.
    bool plausible = true;
    for (PointId x = 0; x < S.size() && plausible; ++x) {
      if (auto sx = S.sigma(x)) plausible = T.component(h[x]) == T.component(h[*sx]);
    }
    if (!plausible) continue;
    std::vector<PointId> hinv(h.size());
    for (PointId x = 0; x < h.size(); ++x) hinv[h[x]] = x;
    auto primal = solve_side(S, T, h, ty, require, my);
    if (!primal) continue;
    auto dual = solve_side(T, S, hinv, tx, require, mx);
    if (!dual) continue;
    return COEData{h, std::move(primal->first), std::move(primal->second), std::move(dual->first),
                   std::move(dual->second)};
  } while (std::next_permutation(h.begin(), h.end()));
  return std::nullopt;
}

json coe_json(const DRSystem& S, const DRSystem& T, const COEData& d) {
  json out = json::object();
  json h = json::object();
  for (PointId x = 0; x < d.h.size(); ++x) h[S.name(x)] = T.name(d.h[x]);
  out["h"] = h;
  auto tr = [](const DRSystem& s, const Transfer& f) {
    json o = json::object();
    for (PointId x = 0; x < f.size(); ++x)
      if (f[x]) o[s.name(x)] = *f[x];
    return o;
  };
  out["l"] = tr(S, d.l);
  out["k"] = tr(S, d.k);
  out["lprime"] = tr(T, d.lp);
  out["kprime"] = tr(T, d.kp);
  return out;
}

}  // namespace rigidity
