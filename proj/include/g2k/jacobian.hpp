#pragma once

// Group-law oracle: Mumford pairs (a, b) on an odd-degree working model
// (deg f = 5, deg h <= 2, one ramified point at infinity), composed and
// reduced with Cantor's algorithm for y^2 + h y = f, and carried to the
// user's model as point pairs.

#include <vector>

#include "g2k/kummer.hpp"

namespace g2k {

template <FieldType F>
struct MumfordDivisor {
  Poly<F> a, b;

  static MumfordDivisor zero(const F& f) { return {Poly<F>::constant(f, f.one()), Poly<F>(f)}; }
  bool is_zero() const { return a.degree() == 0; }
  friend bool operator==(const MumfordDivisor& x, const MumfordDivisor& y) { return x.a == y.a && x.b == y.b; }
};

template <FieldType F>
struct WorkingModel {
  CurveModel<F> user;
  CurveModel<F> work;
  ModelIsomorphism<F> link;  // user -> work
  ModelIsomorphism<F> back;  // work -> user
};

/// a | b^2 + b h - f, a monic, deg b < deg a <= 2.
template <FieldType F>
bool is_valid_divisor(const CurveModel<F>& c, const MumfordDivisor<F>& D) {
  if (D.a.degree() > 2 || D.a.is_zero() || !D.a.lead().is_one()) return false;
  if (D.b.degree() >= D.a.degree()) return false;
  return ((D.b * D.b + D.b * c.h() - c.f()) % D.a).is_zero();
}

template <FieldType F>
WorkingModel<F> working_model(const CurveModel<F>& c) {
  const F& fld = c.field();
  using Iso = ModelIsomorphism<F>;
  auto make = [&](const Iso& link) { return WorkingModel<F>{c, transform(c, link), link, link.inverse()}; };
  if (c.f().degree() == 5 && c.h().degree() <= 2) return make(Iso::identity(fld));
  if (fld.characteristic() != 2) {
    auto [simp, iso] = simplified_model(c);
    if (simp.f().degree() == 5) return make(iso);
    auto rts = field_roots(simp.f());
    if (rts.empty()) fail(ErrorCode::NoRationalWeierstrassPoint, "4f + h^2 has no root in the field");
    const auto& r = rts.front().first;
    return make(iso.then(Iso::mobius(fld, r, fld.one(), fld.one(), fld.zero())));
  }
  Iso link = Iso::identity(fld);
  if (!c.hc(3).is_zero()) {
    auto rts = field_roots(c.h());
    if (rts.empty()) fail(ErrorCode::NoRationalWeierstrassPoint, "h has no root in the field");
    link = Iso::mobius(fld, rts.front().first, fld.one(), fld.one(), fld.zero());
  }
  CurveModel<F> moved = transform(c, link);
  if (!moved.fc(6).is_zero()) {
    Poly<F> u = Poly<F>::monomial(fld, *fld.sqrt(moved.fc(6)), 3);
    link = link.then(Iso::yshift(fld, u));
  }
  WorkingModel<F> wm = make(link);
  if (wm.work.f().degree() != 5 || wm.work.h().degree() > 2)
    fail(ErrorCode::SingularCurve, "working model does not have odd degree");
  return wm;
}

namespace detail {

template <FieldType F>
MumfordDivisor<F> reduce(const CurveModel<F>& c, Poly<F> a, Poly<F> b) {
  const F& fld = c.field();
  b = b % a;
  while (a.degree() > 2) {
    Poly<F> a2 = (c.f() - b * c.h() - b * b) / a;
    a = a2.monic();
    b = (-c.h() - b) % a;
  }
  if (a.is_zero()) fail(ErrorCode::NonGenericDivisor, "degenerate reduction");
  a = a.monic();
  b = b % a;
  (void)fld;
  return {a, b};
}

}  // namespace detail

template <FieldType F>
MumfordDivisor<F> add(const CurveModel<F>& c, const MumfordDivisor<F>& D1, const MumfordDivisor<F>& D2) {
  auto [d1, e1, e2] = ext_gcd(D1.a, D2.a);
  auto [d, c1, c2] = ext_gcd(d1, D1.b + D2.b + c.h());
  if (d.is_zero()) fail(ErrorCode::NonGenericDivisor, "zero gcd in composition");
  Poly<F> s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
  Poly<F> a = (D1.a * D2.a) / (d * d);
  Poly<F> b = (s1 * D1.a * D2.b + s2 * D2.a * D1.b + s3 * (D1.b * D2.b + c.f())) / d;
  if (a.degree() == 0) return MumfordDivisor<F>::zero(c.field());
  return detail::reduce(c, a, b);
}

template <FieldType F>
MumfordDivisor<F> add(const WorkingModel<F>& wm, const MumfordDivisor<F>& D1, const MumfordDivisor<F>& D2) {
  return add(wm.work, D1, D2);
}

template <FieldType F>
MumfordDivisor<F> negate(const CurveModel<F>& c, const MumfordDivisor<F>& D) {
  if (D.is_zero()) return D;
  return {D.a, (-D.b - c.h()) % D.a};
}

template <FieldType F>
MumfordDivisor<F> negate(const WorkingModel<F>& wm, const MumfordDivisor<F>& D) {
  return negate(wm.work, D);
}

template <FieldType F>
MumfordDivisor<F> scalar_mul(const WorkingModel<F>& wm, const MumfordDivisor<F>& D, uint64_t n) {
  MumfordDivisor<F> r = MumfordDivisor<F>::zero(wm.work.field());
  for (int bit = 63; bit >= 0; --bit) {
    r = add(wm, r, r);
    if ((n >> bit) & 1) r = add(wm, r, D);
  }
  return r;
}

/// Divisor of two sampled affine points with distinct x on the working model.
template <FieldType F>
MumfordDivisor<F> random_divisor(const WorkingModel<F>& wm, SeededRng& rng, int max_tries = 10000) {
  const F& fld = wm.work.field();
  for (int i = 0; i < max_tries; ++i) {
    auto P = sample_point(wm.work, rng);
    auto Q = sample_point(wm.work, rng);
    if (P.x == Q.x) continue;
    auto slope = (P.y - Q.y) / (P.x - Q.x);
    return {Poly<F>::linear_root(fld, P.x) * Poly<F>::linear_root(fld, Q.x), Poly<F>(fld, {P.y - slope * P.x, slope})};
  }
  fail(ErrorCode::ExhaustedRetries, "no pair of points with distinct x found");
}

/// A class spread over the whole group: the sum of two random divisors.
template <FieldType F>
MumfordDivisor<F> random_class(const WorkingModel<F>& wm, SeededRng& rng) {
  return add(wm, random_divisor(wm, rng), random_divisor(wm, rng));
}

/// Degree-1 divisor P - infinity for an affine working point.
template <FieldType F>
MumfordDivisor<F> point_divisor(const F& fld, const typename F::Element& x, const typename F::Element& y) {
  return {Poly<F>::linear_root(fld, x), Poly<F>::constant(fld, y)};
}

namespace detail {

// Arithmetic in k[X]/(m) for monic m of degree 2, elements as c0 + c1 X.
template <FieldType F>
struct QuadRing {
  using E = typename F::Element;
  Poly<F> m;
  Poly<F> mul(const Poly<F>& a, const Poly<F>& b) const { return (a * b) % m; }
  Poly<F> inv(const Poly<F>& a) const { return invmod(a, m); }
  Poly<F> eval(const Poly<F>& p, const Poly<F>& x) const {
    Poly<F> acc(m.field());
    for (int i = p.degree(); i >= 0; --i) acc = mul(acc, x) + Poly<F>::constant(m.field(), p.coeff(i));
    return acc;
  }
  // characteristic polynomial of multiplication by z = z0 + z1 X
  Poly<F> charpoly(const Poly<F>& z) const {
    const F& f = m.field();
    const E z0 = z.coeff(0), z1 = z.coeff(1), m0 = m.coeff(0), m1 = m.coeff(1);
    // matrix columns: z*1 = (z0, z1), z*X = (-m0 z1, z0 - m1 z1)
    const E tr = z0 + z0 - m1 * z1;
    const E det = z0 * (z0 - m1 * z1) + m0 * z1 * z1;
    return Poly<F>(f, {det, -tr, f.one()});
  }
};

// Carries an affine pair of the source model through iso when no point of
// the pair meets the pole of the Mobius map.
template <FieldType F>
std::pair<Poly<F>, Poly<F>> transport_affine_pair(const ModelIsomorphism<F>& iso, const Poly<F>& a, const Poly<F>& b) {
  const F& f = a.field();
  QuadRing<F> R{a};
  Poly<F> x = Poly<F>::x(f) % a;
  // new X = (delta x - beta) / (alpha - gamma x)
  Poly<F> num = Poly<F>(f, {-iso.beta, iso.delta});
  Poly<F> den = Poly<F>(f, {iso.alpha, -iso.gamma});
  Poly<F> X = R.mul(R.eval(num, x), R.inv(R.eval(den, x)));
  Poly<F> D = R.eval(Poly<F>(f, {iso.delta, iso.gamma}), X);
  Poly<F> Y = (R.mul(R.mul(R.mul(D, D), D), R.eval(b, x)) - R.eval(iso.u, X)) * iso.e.inv();
  Poly<F> a2 = R.charpoly(X);
  const auto x1 = X.coeff(1);
  if (x1.is_zero()) fail(ErrorCode::NonGenericDivisor, "transported pair collapsed");
  const auto slope = Y.coeff(1) / x1;
  Poly<F> b2(f, {Y.coeff(0) - slope * X.coeff(0), slope});
  return {a2, b2};
}

}  // namespace detail

/// Affine points of a working divisor (rational roots only).
template <FieldType F>
std::vector<CurvePoint<F>> rational_support(const MumfordDivisor<F>& D) {
  std::vector<CurvePoint<F>> out;
  for (const auto& [x, m] : field_roots(D.a))
    for (int i = 0; i < m; ++i) out.push_back(CurvePoint<F>::affine(x, D.b(x)));
  return out;
}

/// The user-model point pair of a working divisor.
template <FieldType F>
PointPair<F> to_point_pair(const WorkingModel<F>& wm, const MumfordDivisor<F>& D) {
  const F& fld = wm.work.field();
  const auto& iso = wm.back;
  if (D.is_zero()) return PointPair<F>::zero(fld);
  // user image of the working point at infinity
  const CurvePoint<F> winf{PointTag::InfRamified, {}, {}, *infinity_branches(wm.work).begin()};
  if (D.a.degree() == 1) {
    auto P = transform_point(wm.work, iso, CurvePoint<F>::affine(-D.a.coeff(0), D.b.coeff(0)));
    auto W = transform_point(wm.work, iso, winf);
    return pair_from_points(wm.user, P, W);
  }
  // the point where the Mobius denominator alpha - gamma X vanishes goes to
  // the user's infinity
  Poly<F> pole(fld, {iso.alpha, -iso.gamma});
  if (!pole.is_zero() && pole.degree() == 1 && D.a(-pole.coeff(0) / pole.coeff(1)).is_zero()) {
    auto pts = rational_support(D);
    auto P = transform_point(wm.work, iso, pts[0]);
    auto Q = transform_point(wm.work, iso, pts[1]);
    return pair_from_points(wm.user, P, Q);
  }
  auto [a, b] = detail::transport_affine_pair(iso, D.a, D.b);
  return PointPair<F>::affine(a, b);
}

/// Working divisor of a user-model point pair.
template <FieldType F>
MumfordDivisor<F> from_point_pair(const WorkingModel<F>& wm, const PointPair<F>& pp) {
  const F& fld = wm.work.field();
  const auto& iso = wm.link;
  auto single = [&](const CurvePoint<F>& P) {
    auto Q = transform_point(wm.user, iso, P);
    if (!Q.is_affine()) return MumfordDivisor<F>::zero(fld);
    return point_divisor(fld, Q.x, Q.y);
  };
  switch (pp.kind) {
    case PairKind::Zero:
      return MumfordDivisor<F>::zero(fld);
    case PairKind::DoubledInfinity: {
      auto D = single(CurvePoint<F>{PointTag::InfRamified, {}, {}, pp.r});
      return add(wm, D, D);
    }
    case PairKind::AffineInfinity: {
      auto inf = infinity_point(wm.user, pp.r);
      if (!inf) fail(ErrorCode::UnsupportedDivisor, "branch value is not a point at infinity");
      return add(wm, single(CurvePoint<F>::affine(pp.x, pp.y)), single(*inf));
    }
    case PairKind::Affine:
      break;
  }
  Poly<F> pole(fld, {iso.alpha, -iso.gamma});
  bool meets_pole = pole.degree() == 1 && pp.a(-pole.coeff(0) / pole.coeff(1)).is_zero();
  auto rts = meets_pole ? field_roots(pp.a) : decltype(field_roots(pp.a)){};
  if (meets_pole) {
    std::vector<CurvePoint<F>> pts;
    for (const auto& [x, m] : rts)
      for (int i = 0; i < m; ++i) pts.push_back(CurvePoint<F>::affine(x, pp.b(x)));
    if (pts[0].x == pts[1].x) {
      // doubled point on the pole: the working image is a doubled point at
      // the working infinity, i.e. the zero class
      auto D = single(pts[0]);
      return add(wm, D, D);
    }
    return add(wm, single(pts[0]), single(pts[1]));
  }
  auto [a, b] = detail::transport_affine_pair(iso, pp.a, pp.b);
  return detail::reduce(wm.work, a, b);
}

/// kappa on the user model of a working divisor.
template <FieldType F>
KummerPoint<F> kappa_of(const WorkingModel<F>& wm, const MumfordDivisor<F>& D) {
  return kappa(wm.user, to_point_pair(wm, D));
}

}  // namespace g2k
