#include "rigidity/weyl.hpp"

namespace rigidity {

namespace {

json rational_json(const Rational& q) {
  if (q.denominator() == 1) return q.numerator();
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

GroupElem grade_of(WeylMode mode, const Arrow& a) {
  return mode == WeylMode::Canonical ? GroupElem::integer(c_X(a)) : GroupElem::index(0);
}

const Arrow& support_arrow(const Normaliser& n, PointId x) {
  for (const auto& [a, c] : n.support())
    if (a.source.point == x) return a;
  throw RelationError(RelationError::Code::Domain, "point " + n.system()->name(x) + " is outside supp(n* n)");
}

}  // namespace

json coeff_json(const Coeff& c) { return json::array({rational_json(c.re), rational_json(c.im)}); }

std::string mode_name(WeylMode m) { return m == WeylMode::Canonical ? "z" : "trivial"; }

WeylMode parse_mode(const std::string& s) {
  if (s == "trivial") return WeylMode::Trivial;
  if (s == "z") return WeylMode::Canonical;
  throw std::invalid_argument("grading must be \"trivial\" or \"z\", got \"" + s + "\"");
}

Normaliser::Normaliser(DRSystemPtr s, WeylMode mode, std::map<Arrow, Coeff> support)
    : sys_(std::move(s)), mode_(mode), support_(std::move(support)) {
  auto g = dr_groupoid(sys_);
  std::set<PointId> sources, ranges;
  std::optional<Int> deg;
  for (const auto& [a, c] : support_) {
    if (c.is_zero()) throw std::invalid_argument("normaliser has a zero coefficient");
    if (!g->contains(a)) throw std::invalid_argument("normaliser support is not in the groupoid");
    if (!sources.insert(a.source.point).second || !ranges.insert(a.range.point).second)
      throw std::invalid_argument("normaliser support is not a bisection");
    if (mode_ == WeylMode::Canonical) {
      if (deg && *deg != c_X(a)) throw std::invalid_argument("normaliser is not homogeneous");
      deg = c_X(a);
    }
  }
}

Normaliser Normaliser::delta(DRSystemPtr s, WeylMode mode, const Arrow& a, Coeff c) {
  return Normaliser(std::move(s), mode, {{a, c}});
}

std::optional<Int> Normaliser::degree() const {
  if (mode_ != WeylMode::Canonical || support_.empty()) return std::nullopt;
  return c_X(support_.begin()->first);
}

std::set<PointId> Normaliser::domain() const {
  std::set<PointId> out;
  for (const auto& [a, c] : support_) out.insert(a.source.point);
  return out;
}

std::optional<Arrow> Normaliser::arrow_at(PointId source) const {
  for (const auto& [a, c] : support_)
    if (a.source.point == source) return a;
  return std::nullopt;
}

std::map<PointId, PointId> alpha(const Normaliser& n) {
  std::map<PointId, PointId> out;
  for (const auto& [a, c] : n.support()) out[a.source.point] = a.range.point;
  return out;
}

Normaliser nproduct(const Normaliser& n, const Normaliser& m) {
  if (n.system() != m.system() || n.mode() != m.mode())
    throw std::invalid_argument("normalisers belong to different systems or modes");
  std::map<Arrow, Coeff> out;
  for (const auto& [a, ca] : n.support())
    for (const auto& [b, cb] : m.support()) {
      if (a.source != b.range) continue;
      const Arrow ab{a.range, add(a.tag, b.tag), b.source};
      Coeff v = out.count(ab) ? out[ab] + ca * cb : ca * cb;
      if (v.is_zero())
        out.erase(ab);
      else
        out[ab] = v;
    }
  return Normaliser(n.system(), n.mode(), std::move(out));
}

Normaliser nadjoint(const Normaliser& n) {
  std::map<Arrow, Coeff> out;
  for (const auto& [a, c] : n.support()) out[Arrow{a.source, neg(a.tag), a.range}] = c.conj();
  return Normaliser(n.system(), n.mode(), std::move(out));
}

std::string RelationError::code_name() const {
  switch (code_) {
    case Code::Domain:
      return "domain";
    case Code::R1:
      return "R1";
    case Code::R2:
      return "R2";
    case Code::R3:
      return "R3";
  }
  return "";
}

WindingClass u_class(const Normaliser& n, const Normaliser& m, PointId x) {
  if (n.system() != m.system() || n.mode() != m.mode())
    throw std::invalid_argument("normalisers belong to different systems or modes");
  const Arrow& gn = support_arrow(n, x);
  const Arrow& gm = support_arrow(m, x);
  if (n.degree() != m.degree()) throw RelationError(RelationError::Code::R2, "grades differ");
  if (gn.range != gm.range) throw RelationError(RelationError::Code::R3, "alpha_n and alpha_m differ at the point");
  // gamma_n^-1 gamma_m is the isotropy arrow (x, p_m - p_n, x).
  return WindingClass{sub(gm.tag, gn.tag), n.system()->stab(x).stab};
}

WeylClass weyl_class(const Normaliser& n, PointId x) {
  auto a = n.arrow_at(x);
  if (!a) throw std::invalid_argument("weyl_class: point " + n.system()->name(x) + " is outside supp(n* n)");
  return WeylClass{grade_of(n.mode(), *a), x, *a};
}

RelationResult equivalent(const Normaliser& n, PointId x, const Normaliser& m, PointId y) {
  RelationResult r;
  r.r1 = x == y;
  if (!r.r1) return r;
  r.r2 = n.degree() == m.degree();
  auto an = alpha(n), am = alpha(m);
  r.r3 = an.count(x) && am.count(x) && an[x] == am[x];
  if (!r.r2 || !r.r3) return r;
  r.winding = u_class(n, m, x);
  // Stab(x) is torsion-free, so the connected component is the zero class.
  r.r4 = r.winding->value == 0;
  return r;
}

WeylClass weyl_compose(const DRSystemPtr& s, WeylMode mode, const WeylClass& a, const WeylClass& b) {
  auto n = Normaliser::delta(s, mode, a.canonical_arrow);
  auto m = Normaliser::delta(s, mode, b.canonical_arrow);
  auto am = alpha(m);
  if (!am.count(b.char_point) || am[b.char_point] != a.char_point)
    throw NotComposable("weyl_compose: classes are not composable");
  return weyl_class(nproduct(n, m), b.char_point);
}

WeylClass weyl_inverse(const DRSystemPtr& s, WeylMode mode, const WeylClass& a) {
  auto n = Normaliser::delta(s, mode, a.canonical_arrow);
  return weyl_class(nadjoint(n), alpha(n).at(a.char_point));
}

std::set<WeylClass> basic_open(const Normaliser& n, const std::set<PointId>& u) {
  std::set<WeylClass> out;
  for (PointId x : u) out.insert(weyl_class(n, x));
  return out;
}

WeylGroupoid::WeylGroupoid(DRSystemPtr s, WeylMode mode) : sys_(s), mode_(mode), dr_(dr_groupoid(s)) {}

WeylClass WeylGroupoid::decode(const Arrow& a) const {
  return weyl_class(Normaliser::delta(sys_, mode_, a), a.source.point);
}

Arrow WeylGroupoid::encode(const WeylClass& c) const { return c.canonical_arrow; }

std::vector<Arrow> WeylGroupoid::elements(Int bound) const {
  std::vector<Arrow> out;
  for (const auto& g : dr_->elements(bound)) out.push_back(encode(decode(g)));
  sort_elements(*this, out);
  return out;
}

Arrow WeylGroupoid::inverse(const Arrow& a) const { return encode(weyl_inverse(sys_, mode_, decode(a))); }

Arrow WeylGroupoid::unit_arrow(const Unit& u) const {
  return encode(weyl_class(Normaliser::delta(sys_, mode_, dr_->unit_arrow(u)), u.point));
}

std::optional<Arrow> WeylGroupoid::connect(const Unit& r, const Unit& s) const {
  auto g = dr_->connect(r, s);
  if (!g) return std::nullopt;
  return encode(decode(*g));
}

json WeylGroupoid::arrow_json(const Arrow& a) const { return weyl_class_json(*sys_, decode(a)); }

Arrow WeylGroupoid::compose_unchecked(const Arrow& a, const Arrow& b) const {
  return encode(weyl_compose(sys_, mode_, decode(a), decode(b)));
}

Grading WeylGroupoid::grading() const {
  Grading g;
  g.name = "c_delta";
  g.target = mode_ == WeylMode::Canonical ? Group::integers() : Group::trivial();
  g.value = [this](const Arrow& a) { return decode(a).grade; };
  return g;
}

ArrowMap theta_reconstruct(std::shared_ptr<const WeylGroupoid> w, Int bound) {
  ArrowMap m;
  m.name = "theta_reconstruct";
  m.forward = [w, bound](const Arrow& g) -> std::optional<Arrow> {
    if (!w->contains(g) || w->complexity(g) > bound) return std::nullopt;
    return w->encode(w->decode(g));
  };
  m.inverse = [w, bound](const Arrow& c) -> std::optional<Arrow> {
    if (!w->contains(c) || w->complexity(c) > bound) return std::nullopt;
    return w->decode(c).canonical_arrow;
  };
  return m;
}

json weyl_class_json(const DRSystem& s, const WeylClass& c) {
  json grade = c.grade.is_index() ? json("e") : json(c.grade.as_integer());
  const Arrow& a = c.canonical_arrow;
  return json{{"grade", grade},
              {"char_point", s.name(c.char_point)},
              {"arrow", json::array({s.name(a.range.point), a.tag, s.name(a.source.point)})}};
}

json normaliser_json(const Normaliser& n) {
  json out = json::array();
  const DRSystem& s = *n.system();
  for (const auto& [a, c] : n.support())
    out.push_back(
        json{{"arrow", json::array({s.name(a.range.point), a.tag, s.name(a.source.point)})}, {"coeff", coeff_json(c)}});
  return json{{"mode", mode_name(n.mode())}, {"support", out}};
}

}  // namespace rigidity
