#include "rigidity/tsc.hpp"

#include <algorithm>

namespace rigidity {

namespace {

json point_or_null(const DRSystem& s, std::optional<PointId> p) { return p ? json(s.name(*p)) : json(nullptr); }

void check_map(Certificate& c, const std::vector<PointId>& m, std::size_t from, std::size_t to, const char* label) {
  if (m.size() != from) {
    c.fail_with([&] { return json{{"map", label}, {"reason", "wrong number of entries"}}; });
    return;
  }
  for (PointId v : m)
    if (v >= to) c.fail_with([&] { return json{{"map", label}, {"reason", "value out of range"}}; });
}

void check_nat(Certificate& c, const std::vector<Int>& m, std::size_t n, const char* label) {
  if (m.size() != n) {
    c.fail_with([&] { return json{{"map", label}, {"reason", "wrong number of entries"}}; });
    return;
  }
  for (Int v : m)
    if (v < 0) c.fail_with([&] { return json{{"map", label}, {"reason", "negative value"}}; });
}

void check_partial(Certificate& c, const DRSystem& s, const Transfer& f, const char* label) {
  if (f.size() != s.size()) {
    c.fail_with([&] { return json{{"map", label}, {"reason", "wrong number of entries"}}; });
    return;
  }
  for (PointId x = 0; x < s.size(); ++x) {
    if (s.sigma(x).has_value() != f[x].has_value())
      c.fail_with(
          [&] { return json{{"map", label}, {"point", s.name(x)}, {"reason", "not defined exactly on dom(sigma)"}}; });
    else if (f[x] && *f[x] < 0)
      c.fail_with([&] { return json{{"map", label}, {"point", s.name(x)}, {"reason", "negative value"}}; });
  }
}

// a: sigma^a(x)(g'(g(x))) = sigma^a(x)(x).
Certificate return_identity(const char* name, const DRSystem& s, const std::vector<PointId>& g,
                            const std::vector<PointId>& gp, const std::vector<Int>& a) {
  Certificate c(name, 0);
  for (PointId x = 0; x < s.size(); ++x) {
    auto lhs = s.iterate(gp[g[x]], a[x]);
    auto rhs = s.iterate(x, a[x]);
    if (!lhs || !rhs || *lhs != *rhs)
      c.fail_with(
          [&] { return json{{"point", s.name(x)}, {"lhs", point_or_null(s, lhs)}, {"rhs", point_or_null(s, rhs)}}; });
  }
  return c;
}

// k: t^k(x)(g(s(x))) = t^(k(x)+1)(g(x)).
Certificate shift_identity(const char* name, const DRSystem& s, const DRSystem& t, const std::vector<PointId>& g,
                           const Transfer& k) {
  Certificate c(name, 0);
  for (PointId x = 0; x < s.size(); ++x) {
    auto sx = s.sigma(x);
    if (!sx) continue;
    auto lhs = t.iterate(g[*sx], *k[x]);
    auto rhs = t.iterate(g[x], *k[x] + 1);
    if (!lhs || !rhs || *lhs != *rhs)
      c.fail_with(
          [&] { return json{{"point", s.name(x)}, {"lhs", point_or_null(t, lhs)}, {"rhs", point_or_null(t, rhs)}}; });
  }
  return c;
}

}  // namespace

Certificate verify_tsc(const DRSystem& S, const DRSystem& T, const TSCData& d) {
  Certificate cert("verify_tsc", 0);
  Certificate shape("shape", 0);
  check_map(shape, d.f, S.size(), T.size(), "f");
  check_map(shape, d.fp, T.size(), S.size(), "fprime");
  check_nat(shape, d.a, S.size(), "a");
  check_nat(shape, d.ap, T.size(), "aprime");
  check_partial(shape, S, d.k, "k");
  check_partial(shape, T, d.kp, "kprime");
  const bool ok = shape.pass;
  cert.add(std::move(shape));
  if (!ok) return cert;
  cert.add(return_identity("a_identity", S, d.f, d.fp, d.a));
  cert.add(shift_identity("k_identity", S, T, d.f, d.k));
  cert.add(return_identity("aprime_identity", T, d.fp, d.f, d.ap));
  cert.add(shift_identity("kprime_identity", T, S, d.fp, d.kp));
  Certificate cont("continuity", 0);
  cont.detail = json{{"vacuous", true}, {"reason", "finite discrete spaces"}};
  cert.add(std::move(cont));
  return cert;
}

bool is_valid(const DRSystem& S, const NatExtPoint& xi) {
  const auto& c = xi.back_cycle;
  if (c.empty()) return false;
  auto ok = [&](PointId x) { return x < S.size(); };
  if (!std::all_of(c.begin(), c.end(), ok) || !std::all_of(xi.back_path.begin(), xi.back_path.end(), ok)) return false;
  const auto& p = xi.back_path;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (S.sigma(c[i]) != std::optional<PointId>(c[(i + 1) % c.size()])) return false;
  // The path continues from the last cycle entry, so it must restart the cycle.
  if (!p.empty() && S.sigma(c.back()) != std::optional<PointId>(p.front())) return false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (S.sigma(p[i]) != std::optional<PointId>(p[i + 1])) return false;
  return true;
}

PointId coordinate(const DRSystem& S, const NatExtPoint& xi, Int n) {
  const Int L = static_cast<Int>(xi.back_cycle.size());
  const Int anchor = static_cast<Int>(xi.size()) - 1;
  if (n > 0) {
    auto v = S.iterate(coordinate(S, xi, 0), n);
    if (!v) throw std::invalid_argument("coordinate: forward orbit leaves the domain");
    return *v;
  }
  const Int idx = anchor + n;
  if (idx >= L) return xi.back_path[static_cast<std::size_t>(idx - L)];
  return xi.back_cycle[static_cast<std::size_t>(mod_pos(idx, L))];
}

NatExtPoint canonical(const DRSystem& S, const NatExtPoint& xi) {
  const Int L = static_cast<Int>(xi.back_cycle.size());
  // The backward sequence is periodic with period L; take its least period.
  Int period = L;
  for (Int q = 1; q < L; ++q) {
    if (L % q) continue;
    bool periodic = true;
    for (Int i = 0; i < L && periodic; ++i) periodic = coordinate(S, xi, -i) == coordinate(S, xi, -i - q);
    if (periodic) {
      period = q;
      break;
    }
  }
  NatExtPoint out;
  for (Int i = period - 1; i >= 0; --i) out.back_cycle.push_back(coordinate(S, xi, -i));
  return out;
}

NatExtPoint shift(const DRSystem& S, const NatExtPoint& xi) {
  NatExtPoint out;
  for (PointId x : xi.back_cycle) out.back_cycle.push_back(*S.sigma(x));
  for (PointId x : xi.back_path) out.back_path.push_back(*S.sigma(x));
  return out;
}

std::vector<NatExtPoint> nat_ext_points(const DRSystem& S, std::size_t max_size) {
  std::vector<NatExtPoint> out;
  for (std::size_t L = 1; L <= max_size; ++L) {
    for (PointId c0 = 0; c0 < S.size(); ++c0) {
      if (S.iterate(c0, static_cast<Int>(L)) != std::optional<PointId>(c0)) continue;
      NatExtPoint base;
      PointId cur = c0;
      for (std::size_t i = 0; i < L; ++i) {
        base.back_cycle.push_back(cur);
        cur = *S.sigma(cur);
      }
      for (std::size_t P = 0; L + P <= max_size; ++P) {
        NatExtPoint xi = base;
        cur = c0;
        for (std::size_t i = 0; i < P; ++i) {
          xi.back_path.push_back(cur);
          cur = *S.sigma(cur);
        }
        out.push_back(std::move(xi));
      }
    }
  }
  return out;
}

NatExtPoint nat_ext_map(const DRSystem& S, const DRSystem& T, const TSCData& d, const NatExtPoint& xi) {
  if (!S.is_total() || !S.is_surjective() || !T.is_total() || !T.is_surjective())
    throw std::invalid_argument("nat_ext_map: systems must be total and surjective");
  if (!is_valid(S, xi)) throw std::invalid_argument("nat_ext_map: invalid natural extension point");
  Int m = 0;
  for (const auto& v : d.k)
    if (v) m = std::max(m, *v);
  auto phi = [&](PointId x) { return *T.iterate(d.f.at(x), m); };
  NatExtPoint out;
  for (PointId x : xi.back_cycle) out.back_cycle.push_back(phi(x));
  for (PointId x : xi.back_path) out.back_path.push_back(phi(x));
  return out;
}

TSCData tsc_from_conjugacy(const DRSystem& S, const DRSystem& T, const std::vector<PointId>& f, Int k) {
  TSCData d;
  d.f = f;
  d.fp.assign(T.size(), 0);
  for (PointId x = 0; x < f.size(); ++x) d.fp.at(f[x]) = x;
  d.a.assign(S.size(), 0);
  d.ap.assign(T.size(), 0);
  d.k.assign(S.size(), std::nullopt);
  d.kp.assign(T.size(), std::nullopt);
  for (PointId x = 0; x < S.size(); ++x)
    if (S.sigma(x)) d.k[x] = k;
  for (PointId y = 0; y < T.size(); ++y)
    if (T.sigma(y)) d.kp[y] = k;
  return d;
}

std::vector<std::vector<PointId>> equivariant_maps(const DRSystem& S, const DRSystem& T) {
  if (!S.is_permutation() || !T.is_permutation()) throw std::invalid_argument("equivariant_maps: permutations only");
  std::vector<PointId> reps;
  std::vector<bool> seen(S.size(), false);
  for (PointId x = 0; x < S.size(); ++x) {
    if (seen[x]) continue;
    reps.push_back(x);
    for (PointId cur = x; !seen[cur]; cur = *S.sigma(cur)) seen[cur] = true;
  }
  std::vector<std::vector<PointId>> out;
  std::vector<PointId> f(S.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == reps.size()) {
      out.push_back(f);
      return;
    }
    const Int len = S.stab(reps[i]).stab.generator;
    for (PointId y = 0; y < T.size(); ++y) {
      if (T.iterate(y, len) != std::optional<PointId>(y)) continue;
      PointId xs = reps[i], ys = y;
      for (Int j = 0; j < len; ++j) {
        f[xs] = ys;
        xs = *S.sigma(xs);
        ys = *T.sigma(ys);
      }
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

json tsc_json(const DRSystem& S, const DRSystem& T, const TSCData& d) {
  json out = json::object();
  auto pmap = [](const DRSystem& a, const DRSystem& b, const std::vector<PointId>& m) {
    json o = json::object();
    for (PointId x = 0; x < m.size(); ++x) o[a.name(x)] = b.name(m[x]);
    return o;
  };
  auto nmap = [](const DRSystem& a, const std::vector<Int>& m) {
    json o = json::object();
    for (PointId x = 0; x < m.size(); ++x) o[a.name(x)] = m[x];
    return o;
  };
  auto tmap = [](const DRSystem& a, const Transfer& m) {
    json o = json::object();
    for (PointId x = 0; x < m.size(); ++x)
      if (m[x]) o[a.name(x)] = *m[x];
    return o;
  };
  out["f"] = pmap(S, T, d.f);
  out["fprime"] = pmap(T, S, d.fp);
  out["a"] = nmap(S, d.a);
  out["aprime"] = nmap(T, d.ap);
  out["k"] = tmap(S, d.k);
  out["kprime"] = tmap(T, d.kp);
  return out;
}

json nat_ext_json(const DRSystem& S, const NatExtPoint& xi) {
  json c = json::array(), p = json::array();
  for (PointId x : xi.back_cycle) c.push_back(S.name(x));
  for (PointId x : xi.back_path) p.push_back(S.name(x));
  return json{{"back_cycle", c}, {"back_path", p}};
}

}  // namespace rigidity
