#pragma once

// Dense univariate polynomials over one of the coefficient fields, lowest
// degree first. Degrees in this project never exceed a dozen or so.

#include <algorithm>
#include <bit>
#include <tuple>
#include <type_traits>
#include <ostream>
#include <utility>
#include <vector>

#include "g2k/field.hpp"

namespace g2k {

template <FieldType F>
class Poly {
 public:
  using Field = F;
  using Element = typename F::Element;

  explicit Poly(F field) : field_(std::move(field)) {}
  Poly(F field, std::vector<Element> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const F& field, const Element& c) { return Poly(field, {c}); }
  static Poly x(const F& field) { return Poly(field, {field.zero(), field.one()}); }
  static Poly monomial(const F& field, const Element& c, int deg) {
    std::vector<Element> v(static_cast<size_t>(deg) + 1, field.zero());
    v[static_cast<size_t>(deg)] = c;
    return Poly(field, std::move(v));
  }
  /// x - r
  static Poly linear_root(const F& field, const Element& r) { return Poly(field, {-r, field.one()}); }

  const F& field() const noexcept { return field_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
  const std::vector<Element>& coeffs() const noexcept { return c_; }

  Element coeff(int i) const {
    return (i < 0 || i > degree()) ? field_.zero() : c_[static_cast<size_t>(i)];
  }
  Element lead() const { return is_zero() ? field_.zero() : c_.back(); }

  /// Fixed-length coefficient list [c_0, ..., c_{n-1}].
  std::vector<Element> padded(int n) const {
    std::vector<Element> out;
    for (int i = 0; i < n; ++i) out.push_back(coeff(i));
    return out;
  }

  Element operator()(const Element& x) const {
    Element acc = field_.zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    std::vector<Element> d;
    for (int i = 1; i <= degree(); ++i) d.push_back(field_.from_int(i) * c_[static_cast<size_t>(i)]);
    return Poly(field_, std::move(d));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    Element inv = lead().inv();
    return *this * inv;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Element> r(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(a.field_, std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    std::vector<Element> r;
    for (const auto& e : c_) r.push_back(-e);
    return Poly(field_, std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    std::vector<Element> r(a.c_.size() + b.c_.size() - 1, a.field_.zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.field_, std::move(r));
  }
  friend Poly operator*(const Poly& a, const Element& s) {
    std::vector<Element> r;
    for (const auto& e : a.c_) r.push_back(e * s);
    return Poly(a.field_, std::move(r));
  }
  friend Poly operator*(const Element& s, const Poly& a) { return a * s; }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }

  /// a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    const F& f = a.field_;
    std::vector<Element> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {Poly(f), a};
    std::vector<Element> q(static_cast<size_t>(a.degree() - db) + 1, f.zero());
    const Element inv = b.lead().inv();
    for (int d = a.degree(); d >= db; --d) {
      Element coef = rem[static_cast<size_t>(d)] * inv;
      q[static_cast<size_t>(d - db)] = coef;
      if (coef.is_zero()) continue;
      for (int i = 0; i <= db; ++i) rem[static_cast<size_t>(d - db + i)] -= coef * b.c_[static_cast<size_t>(i)];
    }
    rem.resize(static_cast<size_t>(db));
    return {Poly(f, std::move(q)), Poly(f, std::move(rem))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) {
    os << "[";
    for (size_t i = 0; i < p.c_.size(); ++i) os << (i ? "," : "") << p.field_.format(p.c_[i]);
    return os << "]";
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  F field_;
  std::vector<Element> c_;
};

/// Monic gcd. gcd(0, 0) is the zero polynomial.
template <FieldType F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    a = a % b;
    std::swap(a, b);
  }
  return a.monic();
}

/// (g, s, t) with s*a + t*b = g, g monic.
template <FieldType F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
  const F& f = a.field();
  Poly<F> r0 = a, r1 = b;
  Poly<F> s0 = Poly<F>::constant(f, f.one()), s1(f);
  Poly<F> t0(f), t1 = Poly<F>::constant(f, f.one());
  while (!r1.is_zero()) {
    auto [q, r] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  auto inv = r0.lead().inv();
  return {r0 * inv, s0 * inv, t0 * inv};
}

/// base^e mod m.
template <FieldType F>
Poly<F> powmod(Poly<F> base, uint64_t e, const Poly<F>& m) {
  const F& f = base.field();
  Poly<F> r = Poly<F>::constant(f, f.one()) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = (r * base) % m;
    base = (base * base) % m;
    e >>= 1;
  }
  return r;
}

/// Inverse of a modulo m, requires gcd(a, m) = 1.
template <FieldType F>
Poly<F> invmod(const Poly<F>& a, const Poly<F>& m) {
  auto [g, s, t] = ext_gcd(a % m, m);
  if (g.degree() != 0) fail(ErrorCode::DivisionByZero, "polynomial not invertible modulo m");
  return s % m;
}

namespace detail {

// Splits a squarefree product of distinct linear factors into its roots.
template <FiniteFieldType F>
void split_linear(const Poly<F>& g, SeededRng& rng, std::vector<typename F::Element>& out) {
  const F& f = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(-g.coeff(0) / g.coeff(1));
    return;
  }
  for (;;) {
    Poly<F> probe(f);
    Poly<F> shifted(f, {f.random(rng), f.one()});
    if (f.characteristic() == 2) {
      // Tr(delta*x) = sum of squarings, mod g
      Poly<F> lin(f, {f.zero(), f.random(rng)});
      Poly<F> acc = lin % g, term = acc;
      const int m = std::countr_zero(f.order());
      for (int i = 1; i < m; ++i) {
        term = (term * term) % g;
        acc += term;
      }
      probe = acc;
    } else {
      probe = powmod(shifted, (f.order() - 1) / 2, g) - Poly<F>::constant(f, f.one());
    }
    Poly<F> d = gcd(g, probe);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, rng, out);
      split_linear(g / d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// All roots in the base field with multiplicity, sorted by the field's
/// canonical order. Uses gcd with x^q - x and randomized equal-degree
/// splitting driven by a fixed internal seed.
template <FieldType F>
std::vector<std::pair<typename F::Element, int>> roots(const Poly<F>& p) {
  if constexpr (!FiniteFieldType<F>) {
    fail(ErrorCode::UnsupportedField, "root finding needs a finite field");
  } else {
    if (p.is_zero()) fail(ErrorCode::DivisionByZero, "roots of the zero polynomial");
    const F& f = p.field();
    std::vector<typename F::Element> rs;
    if (p.degree() >= 1) {
      Poly<F> x = Poly<F>::x(f);
      Poly<F> xq(f);
      if (f.characteristic() == 2) {
        xq = x % p;
        const int m = std::countr_zero(f.order());
        for (int i = 0; i < m; ++i) xq = (xq * xq) % p;
      } else {
        xq = powmod(x, f.order(), p);
      }
      Poly<F> g = gcd(p, xq - x);
      SeededRng rng(0x726f6f7473ULL);
      detail::split_linear(g, rng, rs);
    }
    std::sort(rs.begin(), rs.end(), [&](const auto& a, const auto& b) { return f.less(a, b); });
    std::vector<std::pair<typename F::Element, int>> out;
    for (const auto& r : rs) {
      Poly<F> rest = p, lin = Poly<F>::linear_root(f, r);
      int mult = 0;
      for (;;) {
        auto [q, rem] = divrem(rest, lin);
        if (!rem.is_zero()) break;
        rest = q;
        ++mult;
      }
      out.emplace_back(r, mult);
    }
    return out;
  }
}

/// (gamma*X + delta)^n * p((alpha*X + beta)/(gamma*X + delta)), for deg p <= n.
template <FieldType F>
Poly<F> hom_apply(const Poly<F>& p, int n, const typename F::Element& alpha, const typename F::Element& beta,
                  const typename F::Element& gamma, const typename F::Element& delta) {
  const F& f = p.field();
  if (p.degree() > n) fail(ErrorCode::DegreeOverflow, "polynomial degree exceeds homogenization degree");
  Poly<F> num(f, {beta, alpha}), den(f, {delta, gamma});
  std::vector<Poly<F>> num_pow{Poly<F>::constant(f, f.one())}, den_pow{Poly<F>::constant(f, f.one())};
  for (int i = 1; i <= n; ++i) {
    num_pow.push_back(num_pow.back() * num);
    den_pow.push_back(den_pow.back() * den);
  }
  Poly<F> out(f);
  for (int i = 0; i <= p.degree(); ++i) {
    const auto& c = p.coeff(i);
    if (c.is_zero()) continue;
    out += num_pow[static_cast<size_t>(i)] * den_pow[static_cast<size_t>(n - i)] * c;
  }
  return out;
}

/// True when gcd(p, p') = 1.
template <FieldType F>
bool is_squarefree(const Poly<F>& p) {
  if (p.is_zero()) return false;
  return gcd(p, p.derivative()).degree() == 0;
}

namespace detail {

inline std::vector<mpz_class> divisors_of(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<std::pair<mpz_class, int>> fac;
  mpz_class d = 2;
  while (d * d <= n) {
    if (d > 1000000) {
      if (n > mpz_class("1000000000000")) fail(ErrorCode::UnsupportedField, "rational root search: coefficient too large");
      break;
    }
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) fac.emplace_back(d, e);
    ++d;
  }
  if (n > 1) fac.emplace_back(n, 1);
  std::vector<mpz_class> divs{1};
  for (auto& [q, e] : fac) {
    size_t sz = divs.size();
    mpz_class pw = 1;
    for (int i = 1; i <= e; ++i) {
      pw *= q;
      for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pw);
    }
  }
  return divs;
}

}  // namespace detail

/// Rational roots with multiplicity by the rational root test, sorted
/// increasingly.
inline std::vector<std::pair<RationalElement, int>> rational_roots(const Poly<RationalField>& p) {
  if (p.is_zero()) fail(ErrorCode::DivisionByZero, "roots of the zero polynomial");
  RationalField q;
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.value().get_den().get_mpz_t());
  std::vector<mpz_class> ic;
  for (const auto& c : p.coeffs()) ic.push_back(mpz_class(c.value() * l));
  size_t low = 0;
  while (low < ic.size() && ic[low] == 0) ++low;
  std::vector<RationalElement> cands;
  if (low > 0) cands.push_back(q.zero());
  if (ic.size() - low > 1) {
    for (const auto& num : detail::divisors_of(ic[low]))
      for (const auto& den : detail::divisors_of(ic.back())) {
        cands.emplace_back(mpq_class(num, den));
        cands.emplace_back(mpq_class(-num, den));
      }
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.value() < b.value(); });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<std::pair<RationalElement, int>> out;
  for (const auto& r : cands) {
    Poly<RationalField> rest = p, lin = Poly<RationalField>::linear_root(q, r);
    int mult = 0;
    for (;;) {
      auto [quo, rem] = divrem(rest, lin);
      if (!rem.is_zero()) break;
      rest = quo;
      ++mult;
    }
    if (mult) out.emplace_back(r, mult);
  }
  return out;
}

/// Roots in the coefficient field for any supported field kind.
template <FieldType F>
std::vector<std::pair<typename F::Element, int>> field_roots(const Poly<F>& p) {
  if constexpr (std::is_same_v<F, RationalField>)
    return rational_roots(p);
  else
    return roots(p);
}

namespace detail {

template <FiniteFieldType F>
void split_quadratics(const Poly<F>& g, SeededRng& rng, std::vector<Poly<F>>& out) {
  const F& f = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 2) {
    out.push_back(g.monic());
    return;
  }
  const uint64_t q = f.order();
  for (;;) {
    std::vector<typename F::Element> tc;
    for (int i = 0; i < g.degree(); ++i) tc.push_back(f.random(rng));
    Poly<F> t(f, tc);
    Poly<F> probe(f);
    if (f.characteristic() == 2) {
      const int m2 = 2 * std::countr_zero(q);
      Poly<F> acc = t % g, term = acc;
      for (int i = 1; i < m2; ++i) {
        term = (term * term) % g;
        acc += term;
      }
      probe = acc;
    } else {
      Poly<F> b = powmod(t, (q - 1) / 2, g);
      probe = (powmod(b, q, g) * b) % g - Poly<F>::constant(f, f.one());
    }
    Poly<F> d = gcd(g, probe);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_quadratics(d, rng, out);
      split_quadratics(g / d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Monic irreducible quadratic factors of a squarefree polynomial over a
/// finite field, sorted by coefficient index order.
template <FieldType F>
std::vector<Poly<F>> irreducible_quadratic_factors(const Poly<F>& p) {
  if constexpr (!FiniteFieldType<F>) {
    fail(ErrorCode::UnsupportedField, "quadratic factor search needs a finite field");
  } else {
    const F& f = p.field();
    std::vector<Poly<F>> out;
    if (p.degree() < 2) return out;
    Poly<F> x = Poly<F>::x(f);
    const uint64_t q = f.order();
    Poly<F> xq = powmod(x, q, p);
    Poly<F> xq2 = powmod(xq, q, p);
    Poly<F> lin = gcd(p, xq - x);
    Poly<F> both = gcd(p, xq2 - x);
    Poly<F> quad = both / lin;
    SeededRng rng(0x7175616473ULL);
    detail::split_quadratics(quad, rng, out);
    std::sort(out.begin(), out.end(), [&](const Poly<F>& a, const Poly<F>& b) {
      if (!(a.coeff(1) == b.coeff(1))) return f.less(a.coeff(1), b.coeff(1));
      return f.less(a.coeff(0), b.coeff(0));
    });
    return out;
  }
}

}  // namespace g2k
