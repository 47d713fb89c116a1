#pragma once

// Genus-2 models y^2 + h(x) y = f(x) with deg f <= 6, deg h <= 3, their
// points, and isomorphisms between models.
//
// A ModelIsomorphism (M, e, u) with M = [[alpha, beta], [gamma, delta]]
// expresses the coordinates of the source model in those of the target:
//
//   x = (alpha X + beta) / (gamma X + delta)
//   y = (e Y + u(X)) / (gamma X + delta)^3
//
// Points at infinity are described by their branch value r = lim y/x^3, a
// root of r^2 + h3 r = f6. When that equation has two distinct roots the
// smaller one in the field's canonical order is infPlus.

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "g2k/matrix.hpp"
#include "g2k/poly.hpp"

namespace g2k {

template <FieldType F>
class CurveModel {
 public:
  using Field = F;
  using Element = typename F::Element;

  CurveModel(F field, Poly<F> f, Poly<F> h) : field_(std::move(field)), f_(std::move(f)), h_(std::move(h)) {
    if (f_.degree() > 6) fail(ErrorCode::DegreeOverflow, "deg f exceeds 6");
    if (h_.degree() > 3) fail(ErrorCode::DegreeOverflow, "deg h exceeds 3");
  }
  CurveModel(F field, const std::vector<Element>& f, const std::vector<Element>& h)
      : CurveModel(field, Poly<F>(field, f), Poly<F>(field, h)) {}

  const F& field() const noexcept { return field_; }
  const Poly<F>& f() const noexcept { return f_; }
  const Poly<F>& h() const noexcept { return h_; }
  Element fc(int i) const { return f_.coeff(i); }
  Element hc(int i) const { return h_.coeff(i); }

  bool on_curve(const Element& x, const Element& y) const { return y * y + h_(x) * y == f_(x); }

  friend bool operator==(const CurveModel& a, const CurveModel& b) { return a.f_ == b.f_ && a.h_ == b.h_; }

 private:
  F field_;
  Poly<F> f_, h_;
};

enum class PointTag { Affine, InfPlus, InfMinus, InfRamified };

template <FieldType F>
struct CurvePoint {
  using Element = typename F::Element;
  PointTag tag = PointTag::Affine;
  Element x{}, y{};
  /// Branch value y/x^3 at infinity; unused for affine points.
  Element r{};

  bool is_affine() const { return tag == PointTag::Affine; }
  static CurvePoint affine(Element x, Element y) { return {PointTag::Affine, std::move(x), std::move(y), {}}; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.tag != b.tag) return false;
    return a.is_affine() ? (a.x == b.x && a.y == b.y) : a.r == b.r;
  }
};

/// Branch values at infinity, sorted: one entry if ramified, two if split,
/// none if the points at infinity are not rational.
template <FieldType F>
std::vector<typename F::Element> infinity_branches(const CurveModel<F>& c) {
  return c.field().quad_solve(c.hc(3), c.fc(6));
}

template <FieldType F>
std::optional<CurvePoint<F>> infinity_point(const CurveModel<F>& c, const typename F::Element& r) {
  auto br = infinity_branches(c);
  if (br.size() == 1 && br[0] == r) return CurvePoint<F>{PointTag::InfRamified, {}, {}, r};
  for (size_t i = 0; i < br.size(); ++i)
    if (br[i] == r) return CurvePoint<F>{i == 0 ? PointTag::InfPlus : PointTag::InfMinus, {}, {}, r};
  return std::nullopt;
}

template <FieldType F>
struct ModelIsomorphism {
  using Element = typename F::Element;
  Element alpha, beta, gamma, delta;
  Element e;
  Poly<F> u;

  static ModelIsomorphism identity(const F& f) {
    return {f.one(), f.zero(), f.zero(), f.one(), f.one(), Poly<F>(f)};
  }
  static ModelIsomorphism mobius(const F& f, Element a, Element b, Element g, Element d) {
    return {a, b, g, d, f.one(), Poly<F>(f)};
  }
  static ModelIsomorphism yshift(const F& f, Poly<F> u) { return {f.one(), f.zero(), f.zero(), f.one(), f.one(), u}; }

  Element det() const { return alpha * delta - beta * gamma; }

  /// Apply `this` first, then `next`.
  ModelIsomorphism then(const ModelIsomorphism& next) const {
    ModelIsomorphism r = *this;
    r.alpha = alpha * next.alpha + beta * next.gamma;
    r.beta = alpha * next.beta + beta * next.delta;
    r.gamma = gamma * next.alpha + delta * next.gamma;
    r.delta = gamma * next.beta + delta * next.delta;
    r.e = e * next.e;
    r.u = next.u * e + hom_apply(u, 3, next.alpha, next.beta, next.gamma, next.delta);
    return r;
  }

  ModelIsomorphism inverse() const {
    const Element d = det();
    if (d.is_zero() || e.is_zero()) fail(ErrorCode::DivisionByZero, "isomorphism is not invertible");
    ModelIsomorphism r = *this;
    r.alpha = delta;
    r.beta = -beta;
    r.gamma = -gamma;
    r.delta = alpha;
    r.e = d * d * d / e;
    r.u = -hom_apply(u, 3, r.alpha, r.beta, r.gamma, r.delta) * e.inv();
    return r;
  }

  friend bool operator==(const ModelIsomorphism& a, const ModelIsomorphism& b) {
    return a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.delta == b.delta && a.e == b.e &&
           a.u == b.u;
  }
};

template <FieldType F>
CurveModel<F> transform(const CurveModel<F>& c, const ModelIsomorphism<F>& iso) {
  if (iso.det().is_zero() || iso.e.is_zero()) fail(ErrorCode::DivisionByZero, "isomorphism is not invertible");
  if (iso.u.degree() > 3) fail(ErrorCode::DegreeOverflow, "y-shift of degree above 3");
  const F& fld = c.field();
  Poly<F> H = hom_apply(c.h(), 3, iso.alpha, iso.beta, iso.gamma, iso.delta);
  Poly<F> Fp = hom_apply(c.f(), 6, iso.alpha, iso.beta, iso.gamma, iso.delta);
  const auto einv = iso.e.inv();
  Poly<F> h2 = (H + iso.u * fld.from_int(2)) * einv;
  Poly<F> f2 = (Fp - H * iso.u - iso.u * iso.u) * (einv * einv);
  if (h2.degree() > 3 || f2.degree() > 6) fail(ErrorCode::DegreeOverflow, "transformed model exceeds degree bounds");
  return CurveModel<F>(fld, f2, h2);
}

/// Carries a point of the source model to the target model of `iso`.
template <FieldType F>
CurvePoint<F> transform_point(const CurveModel<F>& source, const ModelIsomorphism<F>& iso, const CurvePoint<F>& P) {
  using E = typename F::Element;
  const F& fld = source.field();
  const CurveModel<F> target = transform(source, iso);
  auto finish_affine = [&](const E& X, const E& Y) { return CurvePoint<F>::affine(X, Y); };
  auto at_infinity = [&](const E& r) {
    auto p = infinity_point(target, r);
    if (!p) fail(ErrorCode::DivisionByZero, "transported branch value is not a point at infinity");
    return *p;
  };
  const E u3 = iso.u.coeff(3);
  if (P.is_affine()) {
    const E den = iso.alpha - iso.gamma * P.x;
    if (den.is_zero()) {
      // lands on a point at infinity of the target
      const E g3 = iso.gamma * iso.gamma * iso.gamma;
      return at_infinity((g3 * P.y - u3) / iso.e);
    }
    const E X = (iso.delta * P.x - iso.beta) / den;
    const E D = iso.gamma * X + iso.delta;
    return finish_affine(X, (D * D * D * P.y - iso.u(X)) / iso.e);
  }
  if (iso.gamma.is_zero()) {
    const E a3 = iso.alpha * iso.alpha * iso.alpha;
    return at_infinity((P.r * a3 - u3) / iso.e);
  }
  const E X0 = -iso.delta / iso.gamma;
  const E N0 = iso.alpha * X0 + iso.beta;
  (void)fld;
  return finish_affine(X0, (N0 * N0 * N0 * P.r - iso.u(X0)) / iso.e);
}

template <FieldType F>
bool on_curve(const CurveModel<F>& c, const CurvePoint<F>& P) {
  if (P.is_affine()) return c.on_curve(P.x, P.y);
  return infinity_point(c, P.r).has_value();
}

struct Validity {
  bool valid = true;
  std::string reason;
};

template <FieldType F>
Validity validate(const CurveModel<F>& c) {
  const F& fld = c.field();
  if (fld.characteristic() != 2) {
    Poly<F> F6 = c.f() * fld.from_int(4) + c.h() * c.h();
    if (F6.degree() < 5)
      return {false, "4f + h^2 has degree " + std::to_string(F6.degree()) + " < 5 (repeated root at infinity)"};
    if (!is_squarefree(F6)) return {false, "4f + h^2 has a repeated root (zero discriminant)"};
    return {};
  }
  if (c.h().is_zero()) return {false, "h = 0 in characteristic 2 (every point is singular)"};
  Poly<F> hp = c.h().derivative();
  Poly<F> crit = hp * hp * c.f() + c.f().derivative() * c.f().derivative();
  if (gcd(c.h(), crit).degree() > 0)
    return {false, "affine singular point: h(x) = 0 and f'(x)^2 = h'(x)^2 f(x) share a root"};
  if (c.hc(3).is_zero() && c.hc(2) * c.hc(2) * c.fc(6) == c.fc(5) * c.fc(5))
    return {false, "singular point at infinity: h3 = 0 and h2^2 f6 = f5^2"};
  return {};
}

template <FieldType F>
CurvePoint<F> sample_point(const CurveModel<F>& c, SeededRng& rng, int max_tries = 10000) {
  const F& fld = c.field();
  for (int i = 0; i < max_tries; ++i) {
    auto x = fld.random(rng);
    auto ys = fld.quad_solve(c.h()(x), c.f()(x));
    if (ys.empty()) continue;
    const auto& y = ys[ys.size() == 1 ? 0 : rng.below(2)];
    return CurvePoint<F>::affine(x, y);
  }
  fail(ErrorCode::ExhaustedRetries, "no curve point found in " + std::to_string(max_tries) + " draws");
}

template <FieldType F>
CurvePoint<F> involution(const CurveModel<F>& c, const CurvePoint<F>& P) {
  if (P.is_affine()) return CurvePoint<F>::affine(P.x, -P.y - c.h()(P.x));
  CurvePoint<F> Q = P;
  Q.r = -P.r - c.hc(3);
  if (P.tag == PointTag::InfPlus) Q.tag = PointTag::InfMinus;
  if (P.tag == PointTag::InfMinus) Q.tag = PointTag::InfPlus;
  return Q;
}

/// y^2 = 4f + h^2 together with the isomorphism Y = 2y + h(x).
template <FieldType F>
std::pair<CurveModel<F>, ModelIsomorphism<F>> simplified_model(const CurveModel<F>& c) {
  const F& fld = c.field();
  if (fld.characteristic() == 2) fail(ErrorCode::CharacteristicTwo, "simplified model needs odd characteristic");
  const auto half = fld.from_int(2).inv();
  ModelIsomorphism<F> iso{fld.one(), fld.zero(), fld.zero(), fld.one(), half, -(c.h() * half)};
  return {transform(c, iso), iso};
}

/// Matrix of the Kummer isomorphism to the simplified model:
/// k4' = 4 k4 - 2 (h0 h2 k1 + h0 h3 k2 + h1 h3 k3).
template <FieldType F>
Matrix<F> tau_matrix(const CurveModel<F>& c) {
  const F& fld = c.field();
  if (fld.characteristic() == 2) fail(ErrorCode::CharacteristicTwo, "tau needs odd characteristic");
  Matrix<F> T = Matrix<F>::identity(fld, 4);
  const auto m2 = fld.from_int(-2);
  T(3, 0) = m2 * c.hc(0) * c.hc(2);
  T(3, 1) = m2 * c.hc(0) * c.hc(3);
  T(3, 2) = m2 * c.hc(1) * c.hc(3);
  T(3, 3) = fld.from_int(4);
  return T;
}

/// The same map with the third coefficient h1 h2 instead of h1 h3.
template <FieldType F>
Matrix<F> tau_matrix_printed(const CurveModel<F>& c) {
  Matrix<F> T = tau_matrix(c);
  T(3, 2) = c.field().from_int(-2) * c.hc(1) * c.hc(2);
  return T;
}

// ---------------------------------------------------------------------------
// Weierstrass points

template <FieldType F>
std::vector<CurvePoint<F>> rational_weierstrass_points(const CurveModel<F>& c) {
  const F& fld = c.field();
  std::vector<CurvePoint<F>> out;
  if (fld.characteristic() != 2) {
    Poly<F> F6 = c.f() * fld.from_int(4) + c.h() * c.h();
    const auto half = fld.from_int(2).inv();
    for (const auto& [x, m] : field_roots(F6)) out.push_back(CurvePoint<F>::affine(x, -c.h()(x) * half));
    if (F6.degree() == 5) out.push_back({PointTag::InfRamified, {}, {}, -c.hc(3) * half});
  } else {
    if (!c.h().is_zero())
      for (const auto& [x, m] : field_roots(c.h())) out.push_back(CurvePoint<F>::affine(x, *fld.sqrt(c.f()(x))));
    if (c.hc(3).is_zero()) out.push_back({PointTag::InfRamified, {}, {}, *fld.sqrt(c.fc(6))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic-2 normal forms

enum class NormalCase { A, B, C };

inline char case_letter(NormalCase k) { return k == NormalCase::A ? 'a' : k == NormalCase::B ? 'b' : 'c'; }

template <FieldType F>
struct NormalForm {
  NormalCase kind;
  CurveModel<F> model;
  ModelIsomorphism<F> iso;
};

/// Nonsingularity condition of a normal-form model: (a) f5 != 0,
/// (b) f1 f5 != 0, (c) f1 f5 (f1 + f3 + f5 + f1^2 + f3^2 + f5^2) != 0.
template <FieldType F>
bool normal_form_condition(NormalCase k, const typename F::Element& f1, const typename F::Element& f3,
                           const typename F::Element& f5) {
  switch (k) {
    case NormalCase::A:
      return !f5.is_zero();
    case NormalCase::B:
      return !(f1 * f5).is_zero();
    case NormalCase::C:
      return !(f1 * f5 * (f1 + f3 + f5 + f1 * f1 + f3 * f3 + f5 * f5)).is_zero();
  }
  return false;
}

template <FieldType F>
CurveModel<F> normal_form_model(const F& fld, NormalCase k, const typename F::Element& f1,
                                const typename F::Element& f3, const typename F::Element& f5) {
  const auto z = fld.zero(), o = fld.one();
  std::vector<typename F::Element> h = k == NormalCase::A ? std::vector{o} : k == NormalCase::B ? std::vector{z, o}
                                                                                                 : std::vector{z, o, o};
  return CurveModel<F>(fld, std::vector{z, f1, z, f3, z, f5, z}, h);
}

namespace detail {

// Projective root of the binary cubic H(X, Z): {x, 1} or {1, 0} for infinity.
template <class E>
struct ProjRoot {
  E x;
  bool infinite;
};

// y-shift killing f0, f2, f4, f6 for h in {1, x, x^2 + x}; nullopt when an
// Artin-Schreier step has no solution in the field.
template <FieldType F>
std::optional<Poly<F>> normal_shift(const CurveModel<F>& c, NormalCase k) {
  const F& fld = c.field();
  using E = typename F::Element;
  auto sq = [&](const E& a) { return *fld.sqrt(a); };
  auto as = [&](const E& d) -> std::optional<E> {
    auto r = fld.quad_solve(fld.one(), d);
    if (r.empty()) return std::nullopt;
    return r[0];
  };
  E u0 = fld.zero(), u1 = fld.zero(), u2 = fld.zero(), u3 = fld.zero();
  const E f0 = c.fc(0), f2 = c.fc(2), f4 = c.fc(4), f6 = c.fc(6);
  if (k == NormalCase::A) {
    u3 = sq(f6);
    u2 = sq(f4);
    u1 = sq(f2 + u2);
    auto r = as(f0);
    if (!r) return std::nullopt;
    u0 = *r;
  } else if (k == NormalCase::B) {
    u0 = sq(f0);
    u3 = sq(f6);
    u2 = sq(f4 + u3);
    auto r = as(f2);
    if (!r) return std::nullopt;
    u1 = *r;
  } else {
    u0 = sq(f0);
    u3 = sq(f6);
    auto r1 = as(f2 + u0);
    auto r2 = as(f4 + u3);
    if (!r1 || !r2) return std::nullopt;
    u1 = *r1;
    u2 = *r2;
  }
  return Poly<F>(fld, {u0, u1, u2, u3});
}

template <FieldType F>
ModelIsomorphism<F> mobius_to(const F& fld, const ProjRoot<typename F::Element>& at_inf,
                              const std::optional<ProjRoot<typename F::Element>>& at_zero,
                              const std::optional<ProjRoot<typename F::Element>>& at_one) {
  using E = typename F::Element;
  auto vec = [&](const ProjRoot<E>& r) { return r.infinite ? std::array<E, 2>{fld.one(), fld.zero()} : std::array<E, 2>{r.x, fld.one()}; };
  auto v3 = vec(at_inf);
  std::array<E, 2> v1;
  if (at_zero) {
    v1 = vec(*at_zero);
  } else {
    // any point other than at_inf
    v1 = at_inf.infinite ? std::array<E, 2>{fld.zero(), fld.one()} : std::array<E, 2>{fld.one(), fld.zero()};
  }
  E a = fld.one(), b = fld.one();
  if (at_one) {
    // v2 = a v3 + b v1
    auto v2 = vec(*at_one);
    E det = v3[0] * v1[1] - v3[1] * v1[0];
    a = (v2[0] * v1[1] - v2[1] * v1[0]) / det;
    b = (v3[0] * v2[1] - v3[1] * v2[0]) / det;
  }
  return ModelIsomorphism<F>::mobius(fld, a * v3[0], b * v1[0], a * v3[1], b * v1[1]);
}

}  // namespace detail

/// Moves a characteristic-2 model to one of the shapes h in {1, x, x^2+x},
/// f = f1 x + f3 x^3 + f5 x^5. Needs the roots of the homogenized h in the
/// base field; raises NormalFormNeedsExtension when the y-shift would need
/// an Artin-Schreier root outside the field for every admissible Mobius map.
template <FieldType F>
NormalForm<F> char2_normal_form(const CurveModel<F>& c) {
  const F& fld = c.field();
  using E = typename F::Element;
  if (fld.characteristic() != 2) fail(ErrorCode::UnsupportedField, "normal forms are for characteristic 2");
  if (c.h().is_zero()) fail(ErrorCode::SingularCurve, "h = 0");
  std::vector<detail::ProjRoot<E>> distinct;
  std::vector<int> mult;
  int total = 0;
  for (const auto& [x, m] : field_roots(c.h())) {
    distinct.push_back({x, false});
    mult.push_back(m);
    total += m;
  }
  const int inf_mult = 3 - c.h().degree();
  if (inf_mult > 0) {
    distinct.push_back({fld.zero(), true});
    mult.push_back(inf_mult);
    total += inf_mult;
  }
  if (total < 3) fail(ErrorCode::RootsNotRational, "roots of the homogenized h are not all rational");

  std::vector<std::pair<NormalCase, ModelIsomorphism<F>>> candidates;
  if (distinct.size() == 1) {
    auto base = detail::mobius_to<F>(fld, distinct[0], std::nullopt, std::nullopt);
    for (uint64_t s = 0; s < std::min<uint64_t>(fld.order(), 4096); ++s)
      candidates.emplace_back(NormalCase::A,
                              base.then(ModelIsomorphism<F>::mobius(fld, fld.one(), fld.element_at(s), fld.zero(), fld.one())));
  } else if (distinct.size() == 2) {
    size_t dbl = mult[0] == 2 ? 0 : 1;
    candidates.emplace_back(NormalCase::B, detail::mobius_to<F>(fld, distinct[dbl], distinct[1 - dbl], std::nullopt));
  } else {
    const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm)
      candidates.emplace_back(NormalCase::C, detail::mobius_to<F>(fld, distinct[static_cast<size_t>(p[2])],
                                                                  distinct[static_cast<size_t>(p[0])],
                                                                  distinct[static_cast<size_t>(p[1])]));
  }
  for (auto& [kind, mob] : candidates) {
    CurveModel<F> moved = transform(c, mob);
    // scale y so that h becomes monic
    auto lead = moved.h().lead();
    ModelIsomorphism<F> iso = mob.then({fld.one(), fld.zero(), fld.zero(), fld.one(), lead, Poly<F>(fld)});
    moved = transform(c, iso);
    auto shift = detail::normal_shift(moved, kind);
    if (!shift) continue;
    iso = iso.then(ModelIsomorphism<F>::yshift(fld, *shift));
    CurveModel<F> out = transform(c, iso);
    if (!normal_form_condition<F>(kind, out.fc(1), out.fc(3), out.fc(5)))
      fail(ErrorCode::SingularCurve, std::string("normal form case (") + case_letter(kind) + ") condition fails");
    return {kind, out, iso};
  }
  fail(ErrorCode::NormalFormNeedsExtension, "the y-shift to normal form needs a quadratic extension");
}

// ---------------------------------------------------------------------------
// Curve text format

struct CurveText {
  std::string field;
  std::vector<std::string> f, h;
};

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.pop_back();
    size_t b = 0;
    while (b < item.size() && std::isspace(static_cast<unsigned char>(item[b]))) ++b;
    out.push_back(item.substr(b));
  }
  return out;
}

inline CurveText parse_curve_text(std::istream& in) {
  CurveText t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, rest;
    ls >> key;
    std::getline(ls, rest);
    auto b = rest.find_first_not_of(' ');
    rest = b == std::string::npos ? "" : rest.substr(b);
    if (key == "field")
      t.field = rest;
    else if (key == "f")
      t.f = split_csv(rest);
    else if (key == "h")
      t.h = split_csv(rest);
  }
  if (t.field.empty()) fail(ErrorCode::ParseError, "curve file lacks a 'field' line");
  if (t.f.size() != 7) fail(ErrorCode::ParseError, "curve file needs 7 coefficients f0..f6");
  if (t.h.size() != 4) fail(ErrorCode::ParseError, "curve file needs 4 coefficients h0..h3");
  return t;
}

inline CurveText read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open curve file " + path);
  return parse_curve_text(in);
}

template <FieldType F>
CurveModel<F> curve_from_text(const F& fld, const CurveText& t) {
  std::vector<typename F::Element> f, h;
  for (const auto& s : t.f) f.push_back(fld.parse(s));
  for (const auto& s : t.h) h.push_back(fld.parse(s));
  return CurveModel<F>(fld, f, h);
}

template <FieldType F>
std::string format_coeffs(const F& fld, const Poly<F>& p, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + fld.format(p.coeff(i));
  return s;
}

template <FieldType F>
std::string format_curve(const CurveModel<F>& c) {
  return "field " + c.field().spec() + "\nf " + format_coeffs(c.field(), c.f(), 7) + "\nh " +
         format_coeffs(c.field(), c.h(), 4) + "\n";
}

}  // namespace g2k
