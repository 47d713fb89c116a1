#pragma once

// Kummer coordinates kappa = (k1 : k2 : k3 : k4) of a divisor class given as
// an unordered pair of curve points, the quartic K = K2 k4^2 + K1 k4 + K0 of
// the surface, the characteristic-2 data of the rational 2-torsion classes
// and the translation matrix W built from it.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "g2k/curve.hpp"
#include "g2k/forms.hpp"

namespace g2k {

template <FieldType F>
using KummerPoint = std::array<typename F::Element, 4>;

template <FieldType F>
KummerPoint<F> kummer_zero(const F& f) {
  return {f.zero(), f.zero(), f.zero(), f.one()};
}

template <FieldType F>
bool is_zero_quadruple(const KummerPoint<F>& k) {
  return k[0].is_zero() && k[1].is_zero() && k[2].is_zero() && k[3].is_zero();
}

/// First nonzero coordinate scaled to 1.
template <FieldType F>
KummerPoint<F> normalize(KummerPoint<F> k) {
  for (const auto& c : k) {
    if (c.is_zero()) continue;
    const auto inv = c.inv();
    for (auto& e : k) e *= inv;
    return k;
  }
  fail(ErrorCode::ZeroOutput, "cannot normalize the zero quadruple");
}

/// Projective equality of two nonzero quadruples.
template <FieldType F>
bool proportional(const KummerPoint<F>& a, const KummerPoint<F>& b) {
  if (is_zero_quadruple<F>(a) || is_zero_quadruple<F>(b)) return false;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j)
      if (!(a[i] * b[j] == a[j] * b[i])) return false;
  return true;
}

template <FieldType F>
std::string format_kummer(const F& f, const KummerPoint<F>& k) {
  return f.format(k[0]) + ":" + f.format(k[1]) + ":" + f.format(k[2]) + ":" + f.format(k[3]);
}

template <FieldType F>
KummerPoint<F> parse_kummer(const F& f, const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) fail(ErrorCode::ParseError, "Kummer point needs four ':'-separated coordinates");
  return {f.parse(parts[0]), f.parse(parts[1]), f.parse(parts[2]), f.parse(parts[3])};
}

template <FieldType F>
KummerPoint<F> apply_matrix(const Matrix<F>& m, const KummerPoint<F>& k) {
  auto v = m.apply_matrix(std::vector<typename F::Element>(k.begin(), k.end()));
  return {v[0], v[1], v[2], v[3]};
}

// ---------------------------------------------------------------------------
// Point pairs

enum class PairKind { Zero, Affine, AffineInfinity, DoubledInfinity };

/// Unordered pair {P1, P2} representing the class of P1 + P2 - (infinity
/// divisor). Affine pairs are stored as the Mumford data (a, b): the points
/// are (x_i, b(x_i)) for the roots x_i of the monic quadratic a, which may
/// be conjugate over a quadratic extension. A pair with one point at
/// infinity stores the affine point and the branch value r.
template <FieldType F>
struct PointPair {
  using Element = typename F::Element;
  PairKind kind = PairKind::Zero;
  Poly<F> a, b;
  Element x{}, y{}, r{};

  static PointPair zero(const F& f) { return {PairKind::Zero, Poly<F>(f), Poly<F>(f), {}, {}, {}}; }
  static PointPair affine(Poly<F> a, Poly<F> b) {
    const F f = a.field();
    return {PairKind::Affine, std::move(a), std::move(b), f.zero(), f.zero(), f.zero()};
  }
  static PointPair affine_infinity(const F& f, Element x, Element y, Element r) {
    return {PairKind::AffineInfinity, Poly<F>(f), Poly<F>(f), std::move(x), std::move(y), std::move(r)};
  }
  static PointPair doubled_infinity(const F& f, Element r) {
    return {PairKind::DoubledInfinity, Poly<F>(f), Poly<F>(f), f.zero(), f.zero(), std::move(r)};
  }
};

/// Pair from two curve points. Equal affine points need the tangent slope,
/// which is computed from the curve.
template <FieldType F>
PointPair<F> pair_from_points(const CurveModel<F>& c, const CurvePoint<F>& P, const CurvePoint<F>& Q) {
  const F& f = c.field();
  if (!P.is_affine() && !Q.is_affine()) {
    if (P.r == Q.r) return PointPair<F>::doubled_infinity(f, P.r);
    return PointPair<F>::zero(f);
  }
  if (!P.is_affine()) return PointPair<F>::affine_infinity(f, Q.x, Q.y, P.r);
  if (!Q.is_affine()) return PointPair<F>::affine_infinity(f, P.x, P.y, Q.r);
  Poly<F> a = Poly<F>::linear_root(f, P.x) * Poly<F>::linear_root(f, Q.x);
  if (!(P.x == Q.x)) {
    auto slope = (P.y - Q.y) / (P.x - Q.x);
    return PointPair<F>::affine(a, Poly<F>(f, {P.y - slope * P.x, slope}));
  }
  if (!(P.y == Q.y)) return PointPair<F>::zero(f);
  auto w = f.from_int(2) * P.y + c.h()(P.x);
  if (w.is_zero()) return PointPair<F>::affine(a, Poly<F>(f, {P.y}));  // doubled Weierstrass point
  auto slope = (c.f().derivative()(P.x) - c.h().derivative()(P.x) * P.y) / w;
  return PointPair<F>::affine(a, Poly<F>(f, {P.y - slope * P.x, slope}));
}

// ---------------------------------------------------------------------------
// The kappa map

namespace detail {

// The double root of a monic quadratic with zero discriminant.
template <FieldType F>
typename F::Element double_root(const Poly<F>& a) {
  const F& f = a.field();
  if (f.characteristic() == 2) return *f.sqrt(a.coeff(0));
  return -a.coeff(1) / f.from_int(2);
}

}  // namespace detail

/// kappa of a divisor class. Affine pairs are evaluated through the
/// symmetric functions s = x+u, p = xu, yv and h(x)v + h(u)y, so conjugate
/// pairs never leave the base field.
template <FieldType F>
KummerPoint<F> kappa(const CurveModel<F>& c, const PointPair<F>& D) {
  using E = typename F::Element;
  const F& fld = c.field();
  auto fi = [&](int i) { return c.fc(i); };
  auto hi = [&](int i) { return c.hc(i); };
  const E two = fld.from_int(2);
  switch (D.kind) {
    case PairKind::Zero:
      return kummer_zero(fld);
    case PairKind::DoubledInfinity:
      fail(ErrorCode::UnsupportedDivisor, "doubled point at infinity");
    case PairKind::AffineInfinity: {
      const E& x = D.x;
      const E k4 = fi(5) * x * x + two * fi(6) * x * x * x - (two * D.y + c.h()(x)) * D.r - hi(3) * D.y;
      return {fld.zero(), fld.one(), x, k4};
    }
    case PairKind::Affine:
      break;
  }
  if (D.a.degree() != 2) fail(ErrorCode::UnsupportedDivisor, "affine pair needs a quadratic a(x)");
  const E s = -D.a.coeff(1), p = D.a.coeff(0);
  const E b0 = D.b.coeff(0), b1 = D.b.coeff(1);
  const E disc = s * s - fld.from_int(4) * p;
  if (disc.is_zero()) {
    const E x = detail::double_root(D.a);
    const E y = D.b(x);
    const E w = two * y + c.h()(x);
    if (w.is_zero()) fail(ErrorCode::UnsupportedDivisor, "doubled Weierstrass point");
    const E yd = (c.f().derivative()(x) - c.h().derivative()(x) * y) / w;
    const E x2 = x * x;
    const E poly = fi(2) + two * fi(3) * x + fld.from_int(4) * fi(4) * x2 + fld.from_int(6) * fi(5) * x2 * x +
                   fld.from_int(9) * fi(6) * x2 * x2;
    const E k4 = -poly + c.h().derivative()(x) * yd + yd * yd;
    return {fld.one(), two * x, x2, k4};
  }
  const E F0 = two * fi(0) + fi(1) * s + two * fi(2) * p + fi(3) * s * p + two * fi(4) * p * p +
               fi(5) * s * p * p + two * fi(6) * p * p * p;
  const E yv = b1 * b1 * p + b0 * b1 * s + b0 * b0;
  // power sums x^d + u^d
  std::array<E, 4> P{two, s, fld.zero(), fld.zero()};
  P[2] = s * P[1] - p * P[0];
  P[3] = s * P[2] - p * P[1];
  E cross = hi(0) * (b1 * s + two * b0);
  for (int i = 1; i <= 3; ++i)
    cross += hi(i) * (b1 * p * P[static_cast<size_t>(i - 1)] + b0 * P[static_cast<size_t>(i)]);
  const E N = F0 - two * yv - cross;
  return {fld.one(), s, p, N / disc};
}

// ---------------------------------------------------------------------------
// The quartic

/// K as a quartic4 coefficient vector together with its pieces.
template <FieldType F>
struct KummerQuartic {
  using Element = typename F::Element;
  F field;
  std::vector<Element> coeffs;  // 35 entries, quartic4 order

  Element coefficient(int a, int b, int c, int d) const { return coeffs[quartic_index({a, b, c, d})]; }

  /// Coefficients of K_d (d = 0, 1, 2): pairs (exponent of k1,k2,k3; value)
  /// for the nonzero entries.
  std::vector<std::pair<std::array<int, 3>, Element>> piece(int d) const {
    std::vector<std::pair<std::array<int, 3>, Element>> out;
    const auto& ex = quartic_exponents();
    for (size_t i = 0; i < ex.size(); ++i)
      if (ex[i][3] == d && !coeffs[i].is_zero()) out.push_back({{ex[i][0], ex[i][1], ex[i][2]}, coeffs[i]});
    return out;
  }

  /// (K_0, K_1, K_2) evaluated at (k1, k2, k3).
  std::array<Element, 3> pieces(const Element& k1, const Element& k2, const Element& k3) const {
    std::array<Element, 3> out{field.zero(), field.zero(), field.zero()};
    const auto& ex = quartic_exponents();
    for (size_t i = 0; i < ex.size(); ++i) {
      if (coeffs[i].is_zero()) continue;
      Element t = coeffs[i];
      for (int e = 0; e < ex[i][0]; ++e) t *= k1;
      for (int e = 0; e < ex[i][1]; ++e) t *= k2;
      for (int e = 0; e < ex[i][2]; ++e) t *= k3;
      out[static_cast<size_t>(ex[i][3])] += t;
    }
    return out;
  }

  Element operator()(const KummerPoint<F>& k) const {
    return eval_quartic<F>(field, coeffs, std::span<const Element>(k.data(), 4));
  }
};

namespace detail {

template <FieldType F>
struct QuarticBuilder {
  const F& f;
  std::vector<typename F::Element> c;
  explicit QuarticBuilder(const F& fld) : f(fld), c(35, fld.zero()) {}
  void add(const typename F::Element& v, int a, int b, int cc, int d) { c[quartic_index({a, b, cc, d})] += v; }
};

}  // namespace detail

/// The general quartic in f0..f6, h0..h3.
template <FieldType F>
KummerQuartic<F> quartic_from_curve(const CurveModel<F>& cm) {
  const F& fl = cm.field();
  using E = typename F::Element;
  const E f0 = cm.fc(0), f1 = cm.fc(1), f2 = cm.fc(2), f3 = cm.fc(3), f4 = cm.fc(4), f5 = cm.fc(5), f6 = cm.fc(6);
  const E h0 = cm.hc(0), h1 = cm.hc(1), h2 = cm.hc(2), h3 = cm.hc(3);
  auto n = [&](int64_t v) { return fl.from_int(v); };
  detail::QuarticBuilder<F> q(fl);

  q.add(n(1), 0, 2, 0, 2);
  q.add(n(-4), 1, 0, 1, 2);

  q.add(n(-4) * f2, 2, 0, 1, 1);
  q.add(n(-4) * f6, 0, 0, 3, 1);
  q.add(n(-4) * f0, 3, 0, 0, 1);
  q.add(-h1 * h3, 0, 2, 1, 1);
  q.add(n(2) * h1 * h3, 1, 0, 2, 1);
  q.add(-h2 * h3, 0, 1, 2, 1);
  q.add(-h1 * h2, 1, 1, 1, 1);
  q.add(-h1 * h1, 2, 0, 1, 1);
  q.add(n(-2) * f3, 1, 1, 1, 1);
  q.add(-h0 * h0, 3, 0, 0, 1);
  q.add(-h2 * h2, 1, 0, 2, 1);
  q.add(n(-2) * f5, 0, 1, 2, 1);
  q.add(-h3 * h3, 0, 0, 3, 1);
  q.add(n(-4) * f4, 1, 0, 2, 1);
  q.add(n(-2) * f1, 2, 1, 0, 1);
  q.add(-h0 * h1, 2, 1, 0, 1);
  q.add(-h0 * h2, 1, 2, 0, 1);
  q.add(n(2) * h0 * h2, 2, 0, 1, 1);
  q.add(-h0 * h3, 0, 3, 0, 1);
  q.add(n(3) * h0 * h3, 1, 1, 1, 1);

  q.add(n(-4) * f0 * f2 - f0 * h1 * h1 + f1 * f1 + f1 * h0 * h1 - f2 * h0 * h0, 4, 0, 0, 0);
  q.add(n(-4) * f0 * f3 - n(2) * f0 * h1 * h2 + f1 * h0 * h2 - f3 * h0 * h0, 3, 1, 0, 0);
  q.add(n(2) * f0 * h1 * h3 - n(2) * f1 * f3 - f1 * h0 * h3 - f1 * h1 * h2 + n(2) * f2 * h0 * h2 - f3 * h0 * h1, 3, 0,
        1, 0);
  q.add(n(-4) * f0 * f4 - n(2) * f0 * h1 * h3 - f0 * h2 * h2 + f1 * h0 * h3 - f4 * h0 * h0, 2, 2, 0, 0);
  q.add(n(4) * f0 * f5 + n(2) * f0 * h2 * h3 - n(4) * f1 * f4 - f1 * h1 * h3 - f1 * h2 * h2 + n(2) * f2 * h0 * h3 +
            f3 * h0 * h2 - n(2) * f4 * h0 * h1 + f5 * h0 * h0,
        2, 1, 1, 0);
  q.add(n(-4) * f0 * f6 - f0 * h3 * h3 + n(2) * f1 * f5 + f1 * h2 * h3 - n(4) * f2 * f4 - f2 * h2 * h2 + f3 * f3 +
            f3 * h0 * h3 + f3 * h1 * h2 - f4 * h1 * h1 + f5 * h0 * h1 - f6 * h0 * h0,
        2, 0, 2, 0);
  q.add(n(-4) * f0 * f5 - n(2) * f0 * h2 * h3 - f5 * h0 * h0, 1, 3, 0, 0);
  q.add(n(8) * f0 * f6 + n(2) * f0 * h3 * h3 - n(4) * f1 * f5 - n(2) * f1 * h2 * h3 + f3 * h0 * h3 -
            n(2) * f5 * h0 * h1 + n(2) * f6 * h0 * h0,
        1, 2, 1, 0);
  q.add(n(4) * f1 * f6 + f1 * h3 * h3 - n(4) * f2 * f5 - n(2) * f2 * h2 * h3 + f3 * h1 * h3 + n(2) * f4 * h0 * h3 -
            f5 * h0 * h2 - f5 * h1 * h1 + n(2) * f6 * h0 * h1,
        1, 1, 2, 0);
  q.add(n(-2) * f3 * f5 - f3 * h2 * h3 + n(2) * f4 * h1 * h3 - f5 * h0 * h3 - f5 * h1 * h2 + n(2) * f6 * h0 * h2, 1,
        0, 3, 0);
  q.add(n(-4) * f0 * f6 - f0 * h3 * h3 - f6 * h0 * h0, 0, 4, 0, 0);
  q.add(n(-4) * f1 * f6 - f1 * h3 * h3 - n(2) * f6 * h0 * h1, 0, 3, 1, 0);
  q.add(n(-4) * f2 * f6 - f2 * h3 * h3 + f5 * h0 * h3 - n(2) * f6 * h0 * h2 - f6 * h1 * h1, 0, 2, 2, 0);
  q.add(n(-4) * f3 * f6 - f3 * h3 * h3 + f5 * h1 * h3 - n(2) * f6 * h1 * h2, 0, 1, 3, 0);
  q.add(n(-4) * f4 * f6 - f4 * h3 * h3 + f5 * f5 + f5 * h2 * h3 - f6 * h2 * h2, 0, 0, 4, 0);
  return {fl, std::move(q.c)};
}

/// The quartic of y^2 = f(x) as tabulated for the classical case; h is
/// ignored.
template <FieldType F>
KummerQuartic<F> classical_quartic(const CurveModel<F>& cm) {
  const F& fl = cm.field();
  using E = typename F::Element;
  const E f0 = cm.fc(0), f1 = cm.fc(1), f2 = cm.fc(2), f3 = cm.fc(3), f4 = cm.fc(4), f5 = cm.fc(5), f6 = cm.fc(6);
  auto n = [&](int64_t v) { return fl.from_int(v); };
  detail::QuarticBuilder<F> q(fl);
  q.add(n(1), 0, 2, 0, 2);
  q.add(n(-4), 1, 0, 1, 2);

  q.add(n(-4) * f0, 3, 0, 0, 1);
  q.add(n(-2) * f1, 2, 1, 0, 1);
  q.add(n(-4) * f2, 2, 0, 1, 1);
  q.add(n(-2) * f3, 1, 1, 1, 1);
  q.add(n(-4) * f4, 1, 0, 2, 1);
  q.add(n(-2) * f5, 0, 1, 2, 1);
  q.add(n(-4) * f6, 0, 0, 3, 1);

  q.add(n(-4) * f0 * f2, 4, 0, 0, 0);
  q.add(f1 * f1, 4, 0, 0, 0);
  q.add(n(-4) * f0 * f3, 3, 1, 0, 0);
  q.add(n(-2) * f1 * f3, 3, 0, 1, 0);
  q.add(n(-4) * f0 * f4, 2, 2, 0, 0);
  q.add(n(4) * f0 * f5, 2, 1, 1, 0);
  q.add(n(-4) * f1 * f4, 2, 1, 1, 0);
  q.add(n(-4) * f0 * f6, 2, 0, 2, 0);
  q.add(n(2) * f1 * f5, 2, 0, 2, 0);
  q.add(n(-4) * f2 * f4, 2, 0, 2, 0);
  q.add(f3 * f3, 2, 0, 2, 0);
  q.add(n(-4) * f0 * f5, 1, 3, 0, 0);
  q.add(n(8) * f0 * f6, 1, 2, 1, 0);
  q.add(n(-4) * f1 * f5, 1, 2, 1, 0);
  q.add(n(4) * f1 * f6, 1, 1, 2, 0);
  q.add(n(-4) * f2 * f5, 1, 1, 2, 0);
  q.add(n(-2) * f3 * f5, 1, 0, 3, 0);
  q.add(n(-4) * f0 * f6, 0, 4, 0, 0);
  q.add(n(-4) * f1 * f6, 0, 3, 1, 0);
  q.add(n(-4) * f2 * f6, 0, 2, 2, 0);
  q.add(n(-4) * f3 * f6, 0, 1, 3, 0);
  q.add(n(-4) * f4 * f6, 0, 0, 4, 0);
  q.add(f5 * f5, 0, 0, 4, 0);
  return {fl, std::move(q.c)};
}

template <FieldType F>
bool on_surface(const KummerQuartic<F>& K, const KummerPoint<F>& k) {
  return K(k).is_zero();
}

// ---------------------------------------------------------------------------
// Two-torsion

enum class TorsionCase { AffineAffine, AffineInfinity };

/// Quantities entering the characteristic-2 translation matrix.
template <FieldType F>
struct TwoTorsionData {
  using Element = typename F::Element;
  TorsionCase kind;
  Element t0, t1;
  std::array<Element, 4> bp;  // b'_0 .. b'_3
  Element c;
  std::array<Element, 4> kp;  // k'_1 .. k'_4
  Element r6;
};

template <FieldType F>
struct TwoTorsionClass {
  std::string id;
  PointPair<F> pair;
  KummerPoint<F> kq;
  std::optional<TwoTorsionData<F>> data;
};

namespace detail {

// Square root of z modulo a squarefree polynomial m over GF(2^k): the
// 2^(2k-1)-th power map covers both the split and the irreducible case.
template <FieldType F>
Poly<F> char2_sqrt_mod(const Poly<F>& z, const Poly<F>& m) {
  const int k = std::countr_zero(z.field().order());
  Poly<F> r = z % m;
  for (int i = 0; i < 2 * k - 1; ++i) r = (r * r) % m;
  return r;
}

template <FieldType F>
TwoTorsionData<F> char2_torsion_data(const CurveModel<F>& c, const PointPair<F>& pair, const KummerPoint<F>& kq) {
  const F& fld = c.field();
  using E = typename F::Element;
  TwoTorsionData<F> d;
  if (pair.kind == PairKind::Affine) {
    d.kind = TorsionCase::AffineAffine;
    if (kq[1].is_zero()) fail(ErrorCode::TwoTorsionK2Zero, "k2 = 0 for this 2-torsion point");
    const E s = -pair.a.coeff(1), p = pair.a.coeff(0);
    auto [t, rem] = divrem(c.h(), pair.a);
    if (!rem.is_zero()) fail(ErrorCode::UnsupportedDivisor, "2-torsion pair does not divide h");
    d.t0 = t.coeff(0);
    d.t1 = t.coeff(1);
    const E slope = pair.b.coeff(1), icpt = pair.b.coeff(0);
    const E sinv = s.inv();
    d.bp[0] = slope * sinv;
    d.bp[1] = icpt * sinv;
    d.bp[2] = d.bp[1] * s + d.bp[0] * p;
    d.bp[3] = d.bp[2] * s + d.bp[1] * p;
    d.c = (slope * slope * p + slope * icpt * s + icpt * icpt) * sinv;
    d.r6 = fld.zero();
  } else {
    d.kind = TorsionCase::AffineInfinity;
    const E x1 = pair.x, y1 = pair.y, r6 = pair.r;
    auto [t, rem] = divrem(c.h(), Poly<F>::linear_root(fld, x1));
    d.t0 = t.coeff(0);
    d.t1 = t.coeff(1);
    d.bp[0] = r6;
    d.bp[1] = r6 * x1;
    d.bp[2] = r6 * x1 * x1;
    d.bp[3] = r6 * x1 * x1 * x1 + y1;
    d.c = y1 * r6;
    d.r6 = r6;
  }
  const E k2inv = kq[1].inv();
  for (size_t i = 0; i < 4; ++i) d.kp[i] = kq[i] * k2inv;
  return d;
}

}  // namespace detail

/// All rational 2-torsion classes from Galois-stable pairs of Weierstrass
/// points, in a fixed order: pairs of rational roots, then irreducible
/// quadratic factors, then pairs with the point at infinity.
template <FieldType F>
std::vector<TwoTorsionClass<F>> two_torsion_classes(const CurveModel<F>& c) {
  const F& fld = c.field();
  using E = typename F::Element;
  std::vector<TwoTorsionClass<F>> out;
  const bool char2 = fld.characteristic() == 2;
  Poly<F> W = char2 ? c.h() : c.f() * fld.from_int(4) + c.h() * c.h();
  auto y_at = [&](const E& x) { return char2 ? *fld.sqrt(c.f()(x)) : -c.h()(x) / fld.from_int(2); };
  std::vector<E> rts;
  for (const auto& [x, m] : field_roots(W)) rts.push_back(x);
  std::vector<PointPair<F>> pairs;
  for (size_t i = 0; i < rts.size(); ++i)
    for (size_t j = i + 1; j < rts.size(); ++j)
      pairs.push_back(pair_from_points(c, CurvePoint<F>::affine(rts[i], y_at(rts[i])),
                                       CurvePoint<F>::affine(rts[j], y_at(rts[j]))));
  if constexpr (FiniteFieldType<F>) {
    Poly<F> sqf = W.monic();
    for (const auto& s : irreducible_quadratic_factors(sqf)) {
      Poly<F> b = char2 ? detail::char2_sqrt_mod(c.f(), s) : (c.h() * (-fld.from_int(2).inv())) % s;
      pairs.push_back(PointPair<F>::affine(s, b));
    }
  }
  bool inf_weierstrass = char2 ? c.hc(3).is_zero() : W.degree() == 5;
  if (inf_weierstrass) {
    const E r = char2 ? *fld.sqrt(c.fc(6)) : -c.hc(3) / fld.from_int(2);
    for (const auto& x : rts) pairs.push_back(PointPair<F>::affine_infinity(fld, x, y_at(x), r));
  }
  int idx = 1;
  for (auto& p : pairs) {
    TwoTorsionClass<F> t{"Q" + std::to_string(idx++), p, kappa(c, p), std::nullopt};
    if (char2) {
      try {
        t.data = detail::char2_torsion_data(c, p, t.kq);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TwoTorsionK2Zero) throw;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Translation by a 2-torsion class in characteristic 2.
template <FieldType F>
Matrix<F> w_matrix_char2(const CurveModel<F>& c, const TwoTorsionData<F>& d) {
  const F& fld = c.field();
  if (fld.characteristic() != 2) fail(ErrorCode::UnsupportedField, "the printed W matrix is for characteristic 2");
  const auto f1 = c.fc(1), f3 = c.fc(3), f5 = c.fc(5);
  const auto &t0 = d.t0, &t1 = d.t1, &cc = d.c;
  const auto &b0 = d.bp[0], &b1 = d.bp[1], &b2 = d.bp[2], &b3 = d.bp[3];
  const auto &k1 = d.kp[0], &k2 = d.kp[1], &k3 = d.kp[2], &k4 = d.kp[3];
  Matrix<F> W(fld, 4, 4);
  W(0, 0) = t1 * b2 + k4;
  W(0, 1) = t1 * b1 + f5 * k3;
  W(0, 2) = t1 * b0 + f5 * k2;
  W(0, 3) = k1;
  W(1, 0) = t0 * b2 + t1 * b3 + f3 * k3;
  W(1, 1) = t0 * b1 + t1 * b2 + k4;
  W(1, 2) = t0 * b0 + t1 * b1 + f3 * k1;
  W(1, 3) = k2;
  W(2, 0) = t0 * b3 + f1 * k2;
  W(2, 1) = t0 * b2 + f1 * k1;
  W(2, 2) = t0 * b1 + k4;
  W(2, 3) = k3;
  W(3, 0) = t0 * f1 * b0 + t0 * f3 * b2 + t0 * t0 * cc + t1 * f1 * b1 + f3 * f1 * k1;
  W(3, 1) = t0 * f5 * b3 + t0 * t1 * cc + t1 * f1 * b0 + f1 * f5 * k2;
  W(3, 2) = t0 * f5 * b2 + t1 * f3 * b1 + t1 * f5 * b3 + t1 * t1 * cc + f3 * f5 * k3;
  W(3, 3) = k4;
  return W;
}

/// Is W^2 a nonzero scalar matrix?
template <FieldType F>
bool squares_to_scalar(const Matrix<F>& W) {
  Matrix<F> W2 = W * W;
  const auto lam = W2(0, 0);
  if (lam.is_zero()) return false;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      if (!(W2(i, j) == (i == j ? lam : W.field().zero()))) return false;
  return true;
}

}  // namespace g2k
