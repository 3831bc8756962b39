#include "rigidity/flip.hpp"

#include <algorithm>

namespace rigidity {

FlipInput make_flip_input(DRSystemPtr S, DRSystemPtr T, ArrowMap theta) {
  if (!S->is_permutation() || !T->is_permutation())
    throw std::invalid_argument("flip: both systems must be permutations");
  if (S->size() != T->size()) throw std::invalid_argument("flip: systems have different sizes");
  FlipInput in{S, T, std::move(theta), std::vector<PointId>(S->size())};
  for (PointId x = 0; x < S->size(); ++x) {
    auto u = in.theta(dr_arrow(x, 0, x));
    if (!u || u->range != u->source || u->tag != 0) throw std::invalid_argument("flip: theta does not fix units");
    in.h[x] = u->range.point;
  }
  return in;
}

Int f_of(const FlipInput& in, Int n, PointId x) {
  auto img = in.theta(dr_arrow(x, n, in.S->perm_power(x, n)));
  if (!img) throw std::invalid_argument("flip: theta undefined at a required arrow");
  return img->tag;
}

Int FlipOrbit::at(Int n) const {
  return add(window[static_cast<std::size_t>(mod_pos(n, period))], mul(floor_div(n, period), drift));
}

FlipOrbit flip_orbit(const FlipInput& in, PointId x) {
  FlipOrbit o;
  o.period = in.S->stab(x).stab.generator;
  for (Int r = 0; r < o.period; ++r) o.window.push_back(f_of(in, r, x));
  o.drift = f_of(in, o.period, x);
  if (o.drift == 0) throw std::domain_error("flip: f(., x) is periodic, so theta is not an isomorphism");
  return o;
}

Int threshold_N(const FlipInput& in) {
  const std::size_t n = in.S->size();
  std::vector<FlipOrbit> orbits;
  Int M = 0;
  for (PointId x = 0; x < n; ++x) {
    orbits.push_back(flip_orbit(in, x));
    M = std::max(M, abs_int(orbits.back().at(1)));
  }
  Int N = 1;
  for (const FlipOrbit& o : orbits) {
    for (Int v = -M; v <= M; ++v) {
      // Values hit by residue r are window[r] + jD at n = r + jP.
      std::optional<Int> best;
      for (Int r = 0; r < o.period; ++r) {
        auto j = exact_div(sub(v, o.window[static_cast<std::size_t>(r)]), o.drift);
        if (!j) continue;
        Int m = abs_int(add(r, mul(*j, o.period)));
        if (!best || m < *best) best = m;
      }
      if (best) N = std::max(N, *best);
    }
  }
  return N;
}

namespace {

std::vector<PointId> image_of(const std::vector<PointId>& h, const std::vector<PointId>& xs) {
  std::vector<PointId> out;
  for (PointId x : xs) out.push_back(h[x]);
  std::sort(out.begin(), out.end());
  return out;
}

// Checks that g is a bijection from part onto image with g(sigma(x)) = tau^step(g(x)).
Certificate conjugacy_check(const char* name, const DRSystem& S, const DRSystem& T, const std::vector<PointId>& part,
                            const std::vector<std::optional<PointId>>& g, const std::vector<PointId>& image, Int step) {
  Certificate c(name, 0);
  std::vector<PointId> got;
  for (PointId x : part) {
    if (!g[x]) {
      c.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "undefined"}}; });
      continue;
    }
    got.push_back(*g[x]);
    auto gs = g[*S.sigma(x)];
    if (!gs || *gs != T.perm_power(*g[x], step))
      c.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "does not intertwine"}}; });
  }
  std::sort(got.begin(), got.end());
  if (std::adjacent_find(got.begin(), got.end()) != got.end() || got != image)
    c.fail_with([&] { return json{{"reason", "not a bijection onto its part"}}; });
  return c;
}

void check_partition(Certificate& c, const DRSystem& S, const std::vector<PointId>& X1,
                     const std::vector<PointId>& X2) {
  std::vector<int> side(S.size(), 0);
  for (PointId x : X1) side.at(x) += 1;
  for (PointId x : X2) side.at(x) += 2;
  for (PointId x = 0; x < S.size(); ++x) {
    if (side[x] != 1 && side[x] != 2) {
      c.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "not in exactly one part"}}; });
    } else if (side[*S.sigma(x)] != side[x]) {
      c.fail_with([&] { return json{{"point", S.name(x)}, {"reason", "part not invariant"}}; });
    }
  }
}

}  // namespace

FlipDecomposition decompose(const FlipInput& in, std::optional<Int> N) {
  const DRSystem& S = *in.S;
  const DRSystem& T = *in.T;
  const Int least = threshold_N(in);
  if (N && *N < least) throw std::invalid_argument("decompose: N below the least valid threshold");
  FlipDecomposition dec;
  dec.N = N.value_or(least);
  dec.a.assign(S.size(), std::nullopt);
  dec.b.assign(S.size(), std::nullopt);
  dec.h1.assign(S.size(), std::nullopt);
  dec.h2.assign(S.size(), std::nullopt);
  const Int W = dec.N;
  for (PointId x = 0; x < S.size(); ++x) {
    const FlipOrbit o = flip_orbit(in, x);
    bool pos = o.drift > 0, neg = o.drift < 0;
    for (Int n = W + 1; n <= W + o.period; ++n) {
      pos = pos && o.at(n) > 0 && o.at(-n) < 0;
      neg = neg && o.at(n) < 0 && o.at(-n) > 0;
    }
    if (!pos && !neg) throw std::domain_error("decompose: sign dichotomy fails at " + S.name(x));
    // Beyond N the signs are settled, so the counts only range over [-N, N].
    Int neg_nonneg = 0, neg_nonpos = 0, pos_neg = 0, pos_pos = 0;
    for (Int m = -W; m <= -1; ++m) {
      neg_nonneg += o.at(m) >= 0;
      neg_nonpos += o.at(m) <= 0;
    }
    for (Int n = 0; n <= W; ++n) {
      pos_neg += o.at(n) < 0;
      pos_pos += o.at(n) > 0;
    }
    if (pos) {
      dec.X1.push_back(x);
      dec.a[x] = neg_nonneg - pos_neg;
      dec.h1[x] = T.perm_power(in.h[x], *dec.a[x]);
    } else {
      dec.X2.push_back(x);
      dec.b[x] = pos_pos - neg_nonpos;
      dec.h2[x] = T.perm_power(in.h[x], *dec.b[x]);
    }
  }
  dec.Y1 = image_of(in.h, dec.X1);
  dec.Y2 = image_of(in.h, dec.X2);

  dec.certificate = Certificate("decompose", 0);
  dec.certificate.detail = json{{"N", dec.N}};
  Certificate part("partition", 0);
  check_partition(part, S, dec.X1, dec.X2);
  dec.certificate.add(std::move(part));
  Certificate ia("a_identity", 0), ib("b_identity", 0);
  for (PointId x : dec.X1) {
    PointId sx = *S.sigma(x);
    if (f_of(in, 1, x) != *dec.a[x] - dec.a[sx].value_or(0) + 1)
      ia.fail_with([&] { return json{{"point", S.name(x)}}; });
  }
  for (PointId x : dec.X2) {
    PointId sx = *S.sigma(x);
    if (f_of(in, 1, x) != *dec.b[x] - dec.b[sx].value_or(0) - 1)
      ib.fail_with([&] { return json{{"point", S.name(x)}}; });
  }
  dec.certificate.add(std::move(ia));
  dec.certificate.add(std::move(ib));
  dec.certificate.add(conjugacy_check("h1_conjugacy", S, T, dec.X1, dec.h1, dec.Y1, 1));
  dec.certificate.add(conjugacy_check("h2_conjugacy", S, T, dec.X2, dec.h2, dec.Y2, -1));
  return dec;
}

ArrowMap rebuild_theta(DRSystemPtr S, DRSystemPtr T, const FlipDecomposition& dec) {
  if (!S->is_permutation() || !T->is_permutation())
    throw std::invalid_argument("rebuild_theta: both systems must be permutations");
  Certificate inv("invariants", 0);
  check_partition(inv, *S, dec.X1, dec.X2);
  if (inv.pass) {
    inv.add(conjugacy_check("h1", *S, *T, dec.X1, dec.h1, dec.Y1, 1));
    inv.add(conjugacy_check("h2", *S, *T, dec.X2, dec.h2, dec.Y2, -1));
  }
  if (!inv.pass) throw std::invalid_argument("rebuild_theta: invariant violation: " + inv.witness.dump());

  // side: 1 or 2 per point; g: the conjugacy on that side, ginv its inverse.
  std::vector<int> side(S->size(), 0), tside(T->size(), 0);
  std::vector<PointId> g(S->size()), ginv(T->size());
  for (PointId x : dec.X1) side[x] = 1, g[x] = *dec.h1[x];
  for (PointId x : dec.X2) side[x] = 2, g[x] = *dec.h2[x];
  for (PointId x = 0; x < S->size(); ++x) {
    ginv[g[x]] = x;
    tside[g[x]] = side[x];
  }
  ArrowMap m;
  m.name = "rebuild_theta";
  m.forward = [S, side, g](const Arrow& a) -> std::optional<Arrow> {
    if (a.range.level || a.source.level || a.range.point >= S->size() || a.source.point >= S->size())
      return std::nullopt;
    if (!S->member(a.range.point, a.tag, a.source.point)) return std::nullopt;
    const PointId x = a.range.point, y = a.source.point;
    return dr_arrow(g[x], side[x] == 1 ? a.tag : neg(a.tag), g[y]);
  };
  m.inverse = [T, tside, ginv](const Arrow& b) -> std::optional<Arrow> {
    if (b.range.level || b.source.level || b.range.point >= T->size() || b.source.point >= T->size())
      return std::nullopt;
    if (!T->member(b.range.point, b.tag, b.source.point)) return std::nullopt;
    const PointId u = b.range.point, v = b.source.point;
    return dr_arrow(ginv[u], tside[u] == 1 ? b.tag : neg(b.tag), ginv[v]);
  };
  return m;
}

std::optional<std::vector<PointId>> least_conjugacy(const DRSystem& S, const DRSystem& T) {
  if (S.size() != T.size()) return std::nullopt;
  std::vector<std::optional<PointId>> h(S.size());
  std::vector<bool> used(T.size(), false);
  for (PointId x = 0; x < S.size(); ++x) {
    if (h[x]) continue;
    // x is the least point of its unassigned cycle; any unused point on a
    // cycle of the same length keeps the remaining cycle types equal.
    const Int len = S.stab(x).stab.generator;
    std::optional<PointId> pick;
    for (PointId y = 0; y < T.size() && !pick; ++y)
      if (!used[y] && T.stab(y).stab.generator == len) pick = y;
    if (!pick) return std::nullopt;
    PointId xs = x, ys = *pick;
    for (Int j = 0; j < len; ++j) {
      h[xs] = ys;
      used[ys] = true;
      xs = *S.sigma(xs);
      ys = *T.sigma(ys);
    }
  }
  std::vector<PointId> out;
  for (auto v : h) out.push_back(*v);
  return out;
}

std::optional<FlipDecomposition> flip_decide(DRSystemPtr S, DRSystemPtr T) {
  if (!S->is_permutation() || !T->is_permutation())
    throw std::invalid_argument("flip_decide: both systems must be permutations");
  auto h = least_conjugacy(*S, *T);
  if (!h) return std::nullopt;
  FlipDecomposition seed;
  for (PointId x = 0; x < S->size(); ++x) seed.X1.push_back(x);
  seed.Y1 = image_of(*h, seed.X1);
  seed.h1.assign(h->begin(), h->end());
  seed.h2.assign(S->size(), std::nullopt);
  return decompose(make_flip_input(S, T, rebuild_theta(S, T, seed)));
}

json flip_json(const DRSystem& S, const DRSystem& T, const FlipDecomposition& dec) {
  auto names = [](const DRSystem& s, const std::vector<PointId>& xs) {
    json a = json::array();
    for (PointId x : xs) a.push_back(s.name(x));
    return a;
  };
  auto ints = [&](const std::vector<std::optional<Int>>& f) {
    json o = json::object();
    for (PointId x = 0; x < f.size(); ++x)
      if (f[x]) o[S.name(x)] = *f[x];
    return o;
  };
  auto pts = [&](const std::vector<std::optional<PointId>>& f) {
    json o = json::object();
    for (PointId x = 0; x < f.size(); ++x)
      if (f[x]) o[S.name(x)] = T.name(*f[x]);
    return o;
  };
  return json{{"N", dec.N},
              {"X1", names(S, dec.X1)},
              {"X2", names(S, dec.X2)},
              {"Y1", names(T, dec.Y1)},
              {"Y2", names(T, dec.Y2)},
              {"a", ints(dec.a)},
              {"b", ints(dec.b)},
              {"h1", pts(dec.h1)},
              {"h2", pts(dec.h2)},
              {"certificate", dec.certificate.to_json()}};
}

}  // namespace rigidity
