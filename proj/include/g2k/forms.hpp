#pragma once

// Fixed monomial bases for quartic forms in four variables and for
// biquadratic forms in two sets of four variables.
//
// quartic4: the 35 monomials k1^a k2^b k3^c k4^d with a+b+c+d = 4, in
//   lexicographically decreasing exponent order (k1 > k2 > k3 > k4), so index
//   0 is k1^4 and index 34 is k4^4.
// biquadratic44: the 100 products q_i(x) q_j(y) of the ten quadratic
//   monomials (same order: x1^2, x1x2, x1x3, x1x4, x2^2, ..., x4^2), stored at
//   index 10*i + j.
//
// Serialization and synthesis both use exactly these orders.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "g2k/field.hpp"

namespace g2k {

enum class BasisKind { Quartic4, Biquadratic44 };

inline size_t basis_size(BasisKind k) { return k == BasisKind::Quartic4 ? 35 : 100; }
inline std::string basis_name(BasisKind k) { return k == BasisKind::Quartic4 ? "quartic4" : "biquadratic44"; }

using Exponent4 = std::array<int, 4>;

namespace detail {

inline std::vector<Exponent4> make_exponents(int degree) {
  std::vector<Exponent4> out;
  for (int a = degree; a >= 0; --a)
    for (int b = degree - a; b >= 0; --b)
      for (int c = degree - a - b; c >= 0; --c) out.push_back({a, b, c, degree - a - b - c});
  return out;
}

}  // namespace detail

inline const std::vector<Exponent4>& quadratic_exponents() {
  static const std::vector<Exponent4> e = detail::make_exponents(2);
  return e;
}

inline const std::vector<Exponent4>& quartic_exponents() {
  static const std::vector<Exponent4> e = detail::make_exponents(4);
  return e;
}

/// Index of a degree-4 exponent vector in the quartic4 basis.
inline size_t quartic_index(const Exponent4& e) {
  const auto& all = quartic_exponents();
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i] == e) return i;
  fail(ErrorCode::LengthMismatch, "exponent vector is not of total degree 4");
}

inline size_t quadratic_index(int i, int j) {
  Exponent4 e{0, 0, 0, 0};
  ++e[static_cast<size_t>(i)];
  ++e[static_cast<size_t>(j)];
  const auto& all = quadratic_exponents();
  for (size_t k = 0; k < all.size(); ++k)
    if (all[k] == e) return k;
  return 0;
}

/// Tally of field operations spent by the evaluators below.
struct OpCounter {
  uint64_t mul = 0;
  uint64_t sqr = 0;
  uint64_t inv = 0;
  uint64_t add = 0;

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
  OpCounter& operator+=(const OpCounter& o) {
    mul += o.mul;
    sqr += o.sqr;
    inv += o.inv;
    add += o.add;
    return *this;
  }
};

// The two-factor decomposition of each quartic monomial used by the fast
// evaluator: quartic k = quadratic[first] * quadratic[second].
inline const std::vector<std::pair<size_t, size_t>>& quartic_split() {
  static const auto table = [] {
    std::vector<std::pair<size_t, size_t>> t;
    const auto& q = quadratic_exponents();
    for (const auto& e : quartic_exponents()) {
      bool found = false;
      for (size_t a = 0; a < q.size() && !found; ++a)
        for (size_t b = a; b < q.size() && !found; ++b) {
          Exponent4 s{q[a][0] + q[b][0], q[a][1] + q[b][1], q[a][2] + q[b][2], q[a][3] + q[b][3]};
          if (s == e) {
            t.emplace_back(a, b);
            found = true;
          }
        }
    }
    return t;
  }();
  return table;
}

template <class E>
std::vector<E> quadratic_monomials(std::span<const E> x, OpCounter* ops = nullptr) {
  std::vector<E> out;
  out.reserve(10);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i; j < 4; ++j) out.push_back(x[i] * x[j]);
  if (ops) {
    ops->sqr += 4;
    ops->mul += 6;
  }
  return out;
}

template <class E>
std::vector<E> quartic_monomials(std::span<const E> x, OpCounter* ops = nullptr) {
  auto q = quadratic_monomials<E>(x, ops);
  std::vector<E> out;
  out.reserve(35);
  for (auto [a, b] : quartic_split()) {
    out.push_back(q[a] * q[b]);
    if (ops) (a == b ? ops->sqr : ops->mul) += 1;
  }
  return out;
}

template <class E>
std::vector<E> biquadratic_monomials(std::span<const E> x, std::span<const E> y, OpCounter* ops = nullptr) {
  auto qx = quadratic_monomials<E>(x, ops);
  auto qy = quadratic_monomials<E>(y, ops);
  std::vector<E> out;
  out.reserve(100);
  for (size_t i = 0; i < 10; ++i)
    for (size_t j = 0; j < 10; ++j) out.push_back(qx[i] * qy[j]);
  if (ops) ops->mul += 100;
  return out;
}

/// sum_k coeffs[k] * monomials[k]; multiplications by 0 and 1 are skipped.
template <class E>
E dot_skip(std::span<const E> coeffs, std::span<const E> monomials, const E& zero, OpCounter* ops = nullptr) {
  E acc = zero;
  bool first = true;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    if (coeffs[k].is_one()) {
      acc += monomials[k];
    } else {
      acc += coeffs[k] * monomials[k];
      if (ops) ++ops->mul;
    }
    if (ops && !first) ++ops->add;
    first = false;
  }
  return acc;
}

template <FieldType F>
typename F::Element eval_quartic(const F& f, std::span<const typename F::Element> coeffs,
                                 std::span<const typename F::Element> x) {
  if (coeffs.size() != 35) fail(ErrorCode::LengthMismatch, "quartic4 form needs 35 coefficients");
  if (x.size() != 4) fail(ErrorCode::LengthMismatch, "quartic4 form takes a quadruple");
  auto mons = quartic_monomials<typename F::Element>(x);
  return dot_skip<typename F::Element>(coeffs, mons, f.zero());
}

template <FieldType F>
typename F::Element eval_biquadratic(const F& f, std::span<const typename F::Element> coeffs,
                                     std::span<const typename F::Element> x,
                                     std::span<const typename F::Element> y) {
  if (coeffs.size() != 100) fail(ErrorCode::LengthMismatch, "biquadratic44 form needs 100 coefficients");
  if (x.size() != 4 || y.size() != 4) fail(ErrorCode::LengthMismatch, "biquadratic44 form takes two quadruples");
  auto mons = biquadratic_monomials<typename F::Element>(x, y);
  return dot_skip<typename F::Element>(coeffs, mons, f.zero());
}

/// Coefficient vector of B(y, x) given that of B(x, y).
template <class E>
std::vector<E> swap_biquadratic_arguments(const std::vector<E>& c) {
  std::vector<E> out = c;
  for (size_t i = 0; i < 10; ++i)
    for (size_t j = 0; j < 10; ++j) out[10 * j + i] = c[10 * i + j];
  return out;
}

}  // namespace g2k
