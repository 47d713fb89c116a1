#pragma once

// Coefficient fields: odd prime fields GF(p) with p < 2^64, binary fields
// GF(2^m) in polynomial basis for m <= 63, and the rationals (GMP backed).
//
// Every element carries the identity of its field (modulus or modulus
// pattern) and refuses to combine with elements of another field. The
// field objects themselves are small values and are cheap to copy.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <concepts>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include "g2k/error.hpp"
#include "g2k/rng.hpp"

namespace g2k {

namespace detail {

inline uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    uint64_t x = powmod64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline int gf2_degree(uint64_t a) { return a == 0 ? -1 : 63 - std::countl_zero(a); }

// Shift-and-add product of two residues modulo an m-bit-degree pattern.
#if defined(__x86_64__) && defined(__GNUC__)
__attribute__((target("pclmul,sse4.1"))) inline uint64_t gf2_mulmod_clmul(uint64_t a, uint64_t b, uint64_t mod, int m) {
  const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
  const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
  const __m128i p = _mm_clmulepi64_si128(va, vb, 0);
  unsigned __int128 r = static_cast<unsigned __int128>(static_cast<uint64_t>(_mm_extract_epi64(p, 1))) << 64 |
                        static_cast<uint64_t>(_mm_cvtsi128_si64(p));
  const uint64_t low = mod ^ (1ULL << m);
  const __m128i vl = _mm_set_epi64x(0, static_cast<long long>(low));
  const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << m) - 1;
  while (r >> m) {
    const uint64_t hi = static_cast<uint64_t>(r >> m);
    const __m128i q = _mm_clmulepi64_si128(_mm_set_epi64x(0, static_cast<long long>(hi)), vl, 0);
    const unsigned __int128 f = static_cast<unsigned __int128>(static_cast<uint64_t>(_mm_extract_epi64(q, 1))) << 64 |
                                static_cast<uint64_t>(_mm_cvtsi128_si64(q));
    r = (r & mask) ^ f;
  }
  return static_cast<uint64_t>(r);
}

inline bool have_clmul() {
  static const bool ok = __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
  return ok;
}
#endif

inline uint64_t gf2_mulmod(uint64_t a, uint64_t b, uint64_t mod, int m) {
#if defined(__x86_64__) && defined(__GNUC__)
  if (have_clmul()) return gf2_mulmod_clmul(a, b, mod, m);
#endif
  uint64_t r = 0;
  const uint64_t top = 1ULL << m;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= mod;
  }
  return r;
}

inline uint64_t gf2_polymod(uint64_t a, uint64_t mod) {
  const int dm = gf2_degree(mod);
  for (int d = gf2_degree(a); d >= dm; d = gf2_degree(a)) a ^= mod << (d - dm);
  return a;
}

inline uint64_t gf2_gcd(uint64_t a, uint64_t b) {
  while (b) {
    a = gf2_polymod(a, b);
    std::swap(a, b);
  }
  return a;
}

/// Ben-Or irreducibility test for a GF(2)[x] polynomial of degree <= 63.
inline bool gf2_is_irreducible(uint64_t mod) {
  const int m = gf2_degree(mod);
  if (m < 1) return false;
  if (m == 1) return true;
  if ((mod & 1) == 0) return false;
  uint64_t xp = 2;  // x^(2^i) mod f
  for (int i = 1; i <= m / 2; ++i) {
    xp = gf2_mulmod(xp, xp, mod, m);
    if (gf2_degree(gf2_gcd(mod, xp ^ 2)) != 0) return false;
  }
  return true;
}

/// Lowest-weight-first search: the first irreducible polynomial of degree m
/// in increasing numeric order of its pattern.
inline uint64_t gf2_first_irreducible(int m) {
  const uint64_t top = 1ULL << m;
  for (uint64_t low = 1; low < top; low += 2) {
    if (gf2_is_irreducible(top | low)) return top | low;
  }
  fail(ErrorCode::InvalidFieldSpec, "no irreducible polynomial of degree " + std::to_string(m));
}

inline uint64_t parse_u64(std::string_view s) {
  uint64_t v = 0;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail(ErrorCode::ParseError, "bad integer '" + std::string(s) + "'");
  return v;
}

inline std::string hex(uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GF(p)

class PrimeField;

class PrimeElement {
 public:
  PrimeElement() = default;
  PrimeElement(uint64_t p, uint64_t v) : p_(p), v_(v) {}

  uint64_t value() const noexcept { return v_; }
  uint64_t modulus() const noexcept { return p_; }
  bool is_zero() const noexcept { return v_ == 0; }
  bool is_one() const noexcept { return v_ == 1; }

  friend PrimeElement operator+(const PrimeElement& a, const PrimeElement& b) {
    a.check(b);
    uint64_t s = a.v_ + b.v_;
    if (s >= a.p_ || s < a.v_) s -= a.p_;
    return {a.p_, s};
  }
  friend PrimeElement operator-(const PrimeElement& a, const PrimeElement& b) {
    a.check(b);
    return {a.p_, a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + (a.p_ - b.v_)};
  }
  friend PrimeElement operator*(const PrimeElement& a, const PrimeElement& b) {
    a.check(b);
    return {a.p_, detail::mulmod64(a.v_, b.v_, a.p_)};
  }
  friend PrimeElement operator/(const PrimeElement& a, const PrimeElement& b) { return a * b.inv(); }
  PrimeElement operator-() const { return {p_, v_ == 0 ? 0 : p_ - v_}; }
  PrimeElement& operator+=(const PrimeElement& o) { return *this = *this + o; }
  PrimeElement& operator-=(const PrimeElement& o) { return *this = *this - o; }
  PrimeElement& operator*=(const PrimeElement& o) { return *this = *this * o; }
  PrimeElement& operator/=(const PrimeElement& o) { return *this = *this / o; }
  friend bool operator==(const PrimeElement& a, const PrimeElement& b) {
    a.check(b);
    return a.v_ == b.v_;
  }

  PrimeElement square() const { return *this * *this; }

  PrimeElement inv() const {
    if (v_ == 0) fail(ErrorCode::DivisionByZero, "inverse of zero in GF(" + std::to_string(p_) + ")");
    // extended Euclid on (v, p)
    __int128 t = 0, nt = 1;
    uint64_t r = p_, nr = v_;
    while (nr) {
      uint64_t q = r / nr;
      __int128 tmp = t - static_cast<__int128>(q) * nt;
      t = nt;
      nt = tmp;
      uint64_t rr = r - q * nr;
      r = nr;
      nr = rr;
    }
    if (t < 0) t += p_;
    return {p_, static_cast<uint64_t>(t)};
  }

  PrimeElement pow(uint64_t e) const { return {p_, detail::powmod64(v_, e, p_)}; }

 private:
  void check(const PrimeElement& o) const {
    if (p_ != o.p_) fail(ErrorCode::FieldMismatch, "GF(" + std::to_string(p_) + ") vs GF(" + std::to_string(o.p_) + ")");
  }

  uint64_t p_ = 0;
  uint64_t v_ = 0;
};

class PrimeField {
 public:
  using Element = PrimeElement;

  explicit PrimeField(uint64_t p) : p_(p) {
    if (p < 3 || !detail::is_prime_u64(p))
      fail(ErrorCode::InvalidFieldSpec, "prime field modulus must be an odd prime, got " + std::to_string(p));
  }

  uint64_t modulus() const noexcept { return p_; }
  uint64_t characteristic() const noexcept { return p_; }
  uint64_t order() const noexcept { return p_; }
  static constexpr bool is_finite() { return true; }

  Element zero() const { return {p_, 0}; }
  Element one() const { return {p_, 1}; }
  Element from_int(int64_t n) const {
    if (n >= 0) return {p_, static_cast<uint64_t>(n) % p_};
    uint64_t m = static_cast<uint64_t>(-(n + 1)) % p_;  // avoids overflow at INT64_MIN
    return -Element(p_, (m + 1) % p_);
  }
  Element from_u64(uint64_t n) const { return {p_, n % p_}; }
  Element element_at(uint64_t index) const { return {p_, index % p_}; }
  uint64_t index_of(const Element& e) const { return e.value(); }
  bool contains(const Element& e) const { return e.modulus() == p_; }
  bool less(const Element& a, const Element& b) const { return a.value() < b.value(); }

  Element random(SeededRng& rng) const { return {p_, rng.below(p_)}; }

  bool is_square(const Element& a) const {
    return a.is_zero() || detail::powmod64(a.value(), (p_ - 1) / 2, p_) == 1;
  }

  /// Tonelli-Shanks. Returns the smaller of the two roots.
  std::optional<Element> sqrt(const Element& a) const {
    if (a.is_zero()) return zero();
    if (!is_square(a)) return std::nullopt;
    uint64_t q = p_ - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    uint64_t z = 2;
    while (detail::powmod64(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
    uint64_t m = static_cast<uint64_t>(s);
    uint64_t c = detail::powmod64(z, q, p_);
    uint64_t t = detail::powmod64(a.value(), q, p_);
    uint64_t r = detail::powmod64(a.value(), (q + 1) / 2, p_);
    while (t != 1) {
      uint64_t i = 0, tt = t;
      while (tt != 1) {
        tt = detail::mulmod64(tt, tt, p_);
        ++i;
      }
      uint64_t b = c;
      for (uint64_t j = 0; j + 1 < m - i; ++j) b = detail::mulmod64(b, b, p_);
      m = i;
      c = detail::mulmod64(b, b, p_);
      t = detail::mulmod64(t, c, p_);
      r = detail::mulmod64(r, b, p_);
    }
    return Element(p_, std::min(r, p_ - r));
  }

  /// All y with y^2 + b*y = c, in increasing order.
  std::vector<Element> quad_solve(const Element& b, const Element& c) const {
    const Element two = from_int(2);
    Element disc = b * b + from_int(4) * c;
    auto s = sqrt(disc);
    if (!s) return {};
    if (s->is_zero()) return {-b / two};
    Element y1 = (-b + *s) / two, y2 = (-b - *s) / two;
    if (y2.value() < y1.value()) std::swap(y1, y2);
    return {y1, y2};
  }

  std::string format(const Element& e) const { return std::to_string(e.value()); }
  Element parse(std::string_view s) const {
    bool neg = !s.empty() && s[0] == '-';
    if (neg) s.remove_prefix(1);
    Element v{p_, detail::parse_u64(s) % p_};
    return neg ? -v : v;
  }
  std::string spec() const { return "prime:p=" + std::to_string(p_); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  uint64_t p_;
};

// ---------------------------------------------------------------------------
// GF(2^m), polynomial basis

class BinaryElement {
 public:
  BinaryElement() = default;
  BinaryElement(uint64_t mod, uint64_t v) : mod_(mod), v_(v) {}

  uint64_t value() const noexcept { return v_; }
  uint64_t modulus() const noexcept { return mod_; }
  int degree() const noexcept { return detail::gf2_degree(mod_); }
  bool is_zero() const noexcept { return v_ == 0; }
  bool is_one() const noexcept { return v_ == 1; }

  friend BinaryElement operator+(const BinaryElement& a, const BinaryElement& b) {
    a.check(b);
    return {a.mod_, a.v_ ^ b.v_};
  }
  friend BinaryElement operator-(const BinaryElement& a, const BinaryElement& b) { return a + b; }
  friend BinaryElement operator*(const BinaryElement& a, const BinaryElement& b) {
    a.check(b);
    return {a.mod_, detail::gf2_mulmod(a.v_, b.v_, a.mod_, a.degree())};
  }
  friend BinaryElement operator/(const BinaryElement& a, const BinaryElement& b) { return a * b.inv(); }
  BinaryElement operator-() const { return *this; }
  BinaryElement& operator+=(const BinaryElement& o) { return *this = *this + o; }
  BinaryElement& operator-=(const BinaryElement& o) { return *this = *this + o; }
  BinaryElement& operator*=(const BinaryElement& o) { return *this = *this * o; }
  BinaryElement& operator/=(const BinaryElement& o) { return *this = *this / o; }
  friend bool operator==(const BinaryElement& a, const BinaryElement& b) {
    a.check(b);
    return a.v_ == b.v_;
  }

  BinaryElement square() const { return *this * *this; }

  BinaryElement inv() const {
    if (v_ == 0) fail(ErrorCode::DivisionByZero, "inverse of zero in GF(2^" + std::to_string(degree()) + ")");
    // binary extended Euclid: g1*v == u and g2*v == w (mod mod_) throughout
    uint64_t u = v_, w = mod_, g1 = 1, g2 = 0;
    while (u != 1) {
      int j = detail::gf2_degree(u) - detail::gf2_degree(w);
      if (j < 0) {
        std::swap(u, w);
        std::swap(g1, g2);
        j = -j;
      }
      u ^= w << j;
      g1 ^= g2 << j;
    }
    return {mod_, g1};
  }

  BinaryElement pow(uint64_t e) const {
    BinaryElement r{mod_, 1}, a = *this;
    while (e) {
      if (e & 1) r *= a;
      a *= a;
      e >>= 1;
    }
    return r;
  }

 private:
  void check(const BinaryElement& o) const {
    if (mod_ != o.mod_)
      fail(ErrorCode::FieldMismatch, "GF(2^m) modulus " + detail::hex(mod_) + " vs " + detail::hex(o.mod_));
  }

  uint64_t mod_ = 0;
  uint64_t v_ = 0;
};

class BinaryField {
 public:
  using Element = BinaryElement;

  explicit BinaryField(uint64_t mod) : mod_(mod), m_(detail::gf2_degree(mod)) {
    if (m_ < 1 || m_ > 63) fail(ErrorCode::InvalidFieldSpec, "binary field degree must be in [1,63]");
    if (!detail::gf2_is_irreducible(mod))
      fail(ErrorCode::InvalidFieldSpec, "modulus " + detail::hex(mod) + " is not irreducible over GF(2)");
  }

  /// GF(2^m) with the first irreducible modulus in numeric order.
  static BinaryField with_degree(int m) { return BinaryField(detail::gf2_first_irreducible(m)); }

  uint64_t modulus() const noexcept { return mod_; }
  int degree() const noexcept { return m_; }
  uint64_t characteristic() const noexcept { return 2; }
  uint64_t order() const noexcept { return 1ULL << m_; }
  static constexpr bool is_finite() { return true; }

  Element zero() const { return {mod_, 0}; }
  Element one() const { return {mod_, 1}; }
  Element from_int(int64_t n) const { return {mod_, static_cast<uint64_t>(n) & 1}; }
  /// Bit pattern, interpreted as a polynomial in the generator t.
  Element from_bits(uint64_t bits) const {
    if (bits >> m_) fail(ErrorCode::ParseError, "bit pattern " + detail::hex(bits) + " exceeds field degree");
    return {mod_, bits};
  }
  Element generator() const { return m_ == 1 ? one() : Element(mod_, 2); }
  Element element_at(uint64_t index) const { return {mod_, index & (order() - 1)}; }
  uint64_t index_of(const Element& e) const { return e.value(); }
  bool contains(const Element& e) const { return e.modulus() == mod_; }
  bool less(const Element& a, const Element& b) const { return a.value() < b.value(); }

  Element random(SeededRng& rng) const { return {mod_, rng.below(order())}; }

  /// Absolute trace to GF(2), returned as 0 or 1.
  int trace(const Element& a) const {
    Element t = a, s = a;
    for (int i = 1; i < m_; ++i) {
      s = s.square();
      t += s;
    }
    return static_cast<int>(t.value());
  }

  /// Squaring is a bijection; the unique square root is a^(2^(m-1)).
  Element frobenius_inverse(const Element& a) const {
    Element r = a;
    for (int i = 1; i < m_; ++i) r = r.square();
    return r;
  }

  std::optional<Element> sqrt(const Element& a) const { return frobenius_inverse(a); }
  bool is_square(const Element&) const { return true; }

  /// One solution z of z^2 + z = d, requires trace(d) == 0.
  Element artin_schreier(const Element& d) const {
    Element z = zero();
    if (m_ % 2 == 1) {
      Element t = d;  // half-trace: sum of d^(4^i), i = 0..(m-1)/2
      z = d;
      for (int i = 1; i <= (m_ - 1) / 2; ++i) {
        t = t.square().square();
        z += t;
      }
    } else {
      Element tau = zero();
      for (int i = 0; i < m_; ++i) {
        if (trace(element_at(1ULL << i)) == 1) {
          tau = element_at(1ULL << i);
          break;
        }
      }
      // z = sum_i (sum_{j>i} tau^(2^j)) d^(2^i)
      std::vector<Element> tpow(m_), dpow(m_);
      tpow[0] = tau;
      dpow[0] = d;
      for (int i = 1; i < m_; ++i) {
        tpow[i] = tpow[i - 1].square();
        dpow[i] = dpow[i - 1].square();
      }
      Element suffix = zero();
      for (int i = m_ - 1; i >= 0; --i) {
        z += suffix * dpow[i];
        suffix += tpow[i];
      }
    }
    return z;
  }

  std::vector<Element> quad_solve(const Element& b, const Element& c) const {
    if (b.is_zero()) return {frobenius_inverse(c)};
    Element d = c / b.square();
    if (trace(d) != 0) return {};
    Element z = artin_schreier(d);
    Element y1 = b * z, y2 = b * (z + one());
    if (y2.value() < y1.value()) std::swap(y1, y2);
    return {y1, y2};
  }

  std::string format(const Element& e) const { return detail::hex(e.value()); }
  Element parse(std::string_view s) const { return from_bits(detail::parse_u64(s)); }
  std::string spec() const { return "binary:m=" + std::to_string(m_) + ",mod=" + detail::hex(mod_); }

  friend bool operator==(const BinaryField& a, const BinaryField& b) { return a.mod_ == b.mod_; }

 private:
  uint64_t mod_;
  int m_;
};

// ---------------------------------------------------------------------------
// Q

class RationalElement {
 public:
  RationalElement() = default;
  explicit RationalElement(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const mpq_class& value() const noexcept { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  friend RationalElement operator+(const RationalElement& a, const RationalElement& b) {
    return RationalElement(mpq_class(a.v_ + b.v_));
  }
  friend RationalElement operator-(const RationalElement& a, const RationalElement& b) {
    return RationalElement(mpq_class(a.v_ - b.v_));
  }
  friend RationalElement operator*(const RationalElement& a, const RationalElement& b) {
    return RationalElement(mpq_class(a.v_ * b.v_));
  }
  friend RationalElement operator/(const RationalElement& a, const RationalElement& b) {
    if (b.is_zero()) fail(ErrorCode::DivisionByZero, "rational division by zero");
    return RationalElement(mpq_class(a.v_ / b.v_));
  }
  RationalElement operator-() const { return RationalElement(mpq_class(-v_)); }
  RationalElement& operator+=(const RationalElement& o) { return *this = *this + o; }
  RationalElement& operator-=(const RationalElement& o) { return *this = *this - o; }
  RationalElement& operator*=(const RationalElement& o) { return *this = *this * o; }
  RationalElement& operator/=(const RationalElement& o) { return *this = *this / o; }
  friend bool operator==(const RationalElement& a, const RationalElement& b) { return a.v_ == b.v_; }

  RationalElement square() const { return *this * *this; }
  RationalElement inv() const { return RationalElement(mpq_class(1)) / *this; }
  RationalElement pow(uint64_t e) const {
    RationalElement r(mpq_class(1)), a = *this;
    while (e) {
      if (e & 1) r *= a;
      a *= a;
      e >>= 1;
    }
    return r;
  }

 private:
  mpq_class v_{0};
};

class RationalField {
 public:
  using Element = RationalElement;

  uint64_t characteristic() const noexcept { return 0; }
  uint64_t order() const noexcept { return 0; }
  static constexpr bool is_finite() { return false; }

  Element zero() const { return Element(mpq_class(0)); }
  Element one() const { return Element(mpq_class(1)); }
  Element from_int(int64_t n) const { return Element(mpq_class(static_cast<long>(n))); }
  Element from_ratio(int64_t n, int64_t d) const {
    if (d == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
    return Element(mpq_class(static_cast<long>(n), static_cast<long>(d)));
  }
  bool contains(const Element&) const { return true; }
  bool less(const Element& a, const Element& b) const { return a.value() < b.value(); }

  Element random(SeededRng&) const { fail(ErrorCode::UnsupportedField, "no uniform distribution on Q"); }

  std::optional<Element> sqrt(const Element& a) const {
    if (sgn(a.value()) < 0) return std::nullopt;
    mpz_class n = a.value().get_num(), d = a.value().get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Element(mpq_class(rn, rd));
  }
  bool is_square(const Element& a) const { return sqrt(a).has_value(); }

  /// Only exact perfect-square discriminants are attempted.
  std::vector<Element> quad_solve(const Element& b, const Element& c) const {
    Element disc = b * b + from_int(4) * c;
    auto s = sqrt(disc);
    if (!s) fail(ErrorCode::NoSolutionCertificate, "discriminant is not a rational square");
    const Element two = from_int(2);
    if (s->is_zero()) return {-b / two};
    Element y1 = (-b - *s) / two, y2 = (-b + *s) / two;
    return {y1, y2};
  }

  std::string format(const Element& e) const { return e.value().get_str(); }
  Element parse(std::string_view s) const {
    mpq_class v;
    if (v.set_str(std::string(s), 10) != 0) fail(ErrorCode::ParseError, "bad rational '" + std::string(s) + "'");
    return Element(v);
  }
  std::string spec() const { return "rational"; }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

// ---------------------------------------------------------------------------

template <class F>
concept FieldType = requires(const F& f, const typename F::Element& a, int64_t n) {
  { f.zero() } -> std::same_as<typename F::Element>;
  { f.one() } -> std::same_as<typename F::Element>;
  { f.from_int(n) } -> std::same_as<typename F::Element>;
  { f.characteristic() } -> std::convertible_to<uint64_t>;
  { f.spec() } -> std::convertible_to<std::string>;
  { a + a } -> std::same_as<typename F::Element>;
  { a * a } -> std::same_as<typename F::Element>;
  { a / a } -> std::same_as<typename F::Element>;
  { a.is_zero() } -> std::convertible_to<bool>;
};

template <class F>
concept FiniteFieldType = FieldType<F> && F::is_finite();

/// Runtime field selection, as written in files and on the command line:
/// `prime:p=1009`, `binary:m=16,mod=0x1002b`, `rational`.
using AnyField = std::variant<PrimeField, BinaryField, RationalField>;

inline AnyField parse_field_spec(std::string_view text) {
  auto kv = [&](std::string_view body, std::string_view key) -> std::optional<std::string_view> {
    size_t pos = 0;
    while (pos <= body.size()) {
      size_t comma = body.find(',', pos);
      std::string_view item = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      if (item.substr(0, key.size() + 1) == std::string(key) + "=") return item.substr(key.size() + 1);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return std::nullopt;
  };
  if (text == "rational") return RationalField{};
  if (text.starts_with("prime:")) {
    auto p = kv(text.substr(6), "p");
    if (!p) fail(ErrorCode::InvalidFieldSpec, "prime spec needs p=...");
    return PrimeField(detail::parse_u64(*p));
  }
  if (text.starts_with("binary:")) {
    auto body = text.substr(7);
    auto m = kv(body, "m");
    auto mod = kv(body, "mod");
    if (!m) fail(ErrorCode::InvalidFieldSpec, "binary spec needs m=...");
    int deg = static_cast<int>(detail::parse_u64(*m));
    if (!mod) return BinaryField::with_degree(deg);
    uint64_t pattern = detail::parse_u64(*mod);
    if (detail::gf2_degree(pattern) != deg)
      fail(ErrorCode::InvalidFieldSpec, "modulus degree does not match m in '" + std::string(text) + "'");
    return BinaryField(pattern);
  }
  fail(ErrorCode::InvalidFieldSpec, "unknown field spec '" + std::string(text) + "'");
}

inline std::string format_field_spec(const AnyField& f) {
  return std::visit([](const auto& x) { return x.spec(); }, f);
}

}  // namespace g2k
