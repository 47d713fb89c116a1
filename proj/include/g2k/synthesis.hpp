#pragma once

// Per-curve reconstruction of the duplication quartics delta_1..4, the
// biquadratic forms B_ij and (odd characteristic) the translation matrices W
// by exact linear algebra on samples drawn from the Jacobian oracle.
//
// Conventions:
//   B_ij(x, y) = w_i z_j + w_j z_i for i < j, B_ii(x, y) = w_i z_i.
//   delta is canonical: each delta_i has zero coefficient on k2^2 k4^2
//   (K has coefficient 1 there) and the first nonzero coefficient of the
//   concatenation delta_1 | ... | delta_4 is 1. B is scaled so that the
//   first nonzero coefficient of B_11 is 1. W has first nonzero entry 1
//   in row-major order.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "g2k/jacobian.hpp"

namespace g2k {

inline constexpr const char* kDiagonalConvention = "B_ii=w_i*z_i";

/// Index pairs (i, j), i <= j, in storage order 11,12,13,14,22,...,44.
inline const std::array<std::pair<int, int>, 10>& bqf_pairs() {
  static const std::array<std::pair<int, int>, 10> p{{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};
  return p;
}

inline size_t bqf_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  for (size_t k = 0; k < 10; ++k)
    if (bqf_pairs()[k].first == i && bqf_pairs()[k].second == j) return k;
  return 0;
}

template <FieldType F>
struct FormulaSet {
  using Element = typename F::Element;
  F field;
  Poly<F> f, h;
  std::optional<std::array<std::vector<Element>, 4>> delta;
  std::optional<std::array<std::vector<Element>, 10>> bqf;
  struct Translation {
    std::string id;
    KummerPoint<F> kq;
    Matrix<F> w;
  };
  std::vector<Translation> w;

  friend bool operator==(const FormulaSet& a, const FormulaSet& b) {
    if (!(a.field == b.field) || !(a.f == b.f) || !(a.h == b.h)) return false;
    if (a.delta.has_value() != b.delta.has_value() || a.bqf.has_value() != b.bqf.has_value()) return false;
    if (a.delta && *a.delta != *b.delta) return false;
    if (a.bqf && *a.bqf != *b.bqf) return false;
    if (a.w.size() != b.w.size()) return false;
    for (size_t i = 0; i < a.w.size(); ++i)
      if (a.w[i].id != b.w[i].id || a.w[i].kq != b.w[i].kq || !(a.w[i].w == b.w[i].w)) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Fingerprint and KFS1 text format

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <FieldType F>
std::string curve_fingerprint(const F& fld, const Poly<F>& f, const Poly<F>& h) {
  std::string key = fld.spec() + "\n" + format_coeffs(fld, f, 7) + "\n" + format_coeffs(fld, h, 4) + "\n" +
                    kDiagonalConvention;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return buf;
}

template <FieldType F>
std::string curve_fingerprint(const CurveModel<F>& c) {
  return curve_fingerprint(c.field(), c.f(), c.h());
}

template <FieldType F>
std::string join_elements(const F& fld, const std::vector<typename F::Element>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fld.format(v[i]);
  }
  return s;
}

template <FieldType F>
std::string serialize(const FormulaSet<F>& fs) {
  const F& fld = fs.field;
  std::ostringstream os;
  os << "KFS1\n";
  os << "field " << fld.spec() << "\n";
  os << "f " << format_coeffs(fld, fs.f, 7) << "\n";
  os << "h " << format_coeffs(fld, fs.h, 4) << "\n";
  os << "convention " << kDiagonalConvention << "\n";
  os << "fingerprint " << curve_fingerprint(fld, fs.f, fs.h) << "\n";
  if (fs.delta)
    for (size_t i = 0; i < 4; ++i) os << "delta" << i + 1 << " quartic4 " << join_elements(fld, (*fs.delta)[i]) << "\n";
  if (fs.bqf)
    for (size_t k = 0; k < 10; ++k)
      os << "B" << bqf_pairs()[k].first + 1 << bqf_pairs()[k].second + 1 << " biquadratic44 "
         << join_elements(fld, (*fs.bqf)[k]) << "\n";
  for (const auto& t : fs.w) {
    os << t.id << " kummer4 " << join_elements(fld, std::vector<typename F::Element>(t.kq.begin(), t.kq.end()))
       << "\n";
    std::vector<typename F::Element> flat;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) flat.push_back(t.w(i, j));
    os << "W" << t.id.substr(1) << " matrix4x4 " << join_elements(fld, flat) << "\n";
  }
  return os.str();
}

/// Field spec written in a KFS1 text, without parsing the rest.
inline std::string kfs_field_spec(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind("field ", 0) == 0) return line.substr(6);
  fail(ErrorCode::ParseError, "KFS1 text has no field line");
}

/// Parses a KFS1 text; when `expect` is given the file's fingerprint must
/// match that curve.
template <FieldType F>
FormulaSet<F> deserialize(const F& fld, const std::string& text, const CurveModel<F>* expect = nullptr) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "KFS1") fail(ErrorCode::ParseError, "missing KFS1 header");
  FormulaSet<F> fs{fld, Poly<F>(fld), Poly<F>(fld), std::nullopt, std::nullopt, {}};
  std::string fp, convention;
  std::array<std::vector<typename F::Element>, 4> delta;
  std::array<std::vector<typename F::Element>, 10> bqf;
  int nd = 0, nb = 0;
  std::map<std::string, KummerPoint<F>> qs;
  auto parse_list = [&](const std::string& s, size_t n) {
    std::vector<typename F::Element> v;
    for (const auto& t : split_csv(s)) v.push_back(fld.parse(t));
    if (v.size() != n) fail(ErrorCode::LengthMismatch, "KFS1 line has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
    return v;
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, a, b;
    ls >> key >> a;
    std::getline(ls, b);
    if (!b.empty() && b[0] == ' ') b.erase(0, 1);
    if (key == "field") {
      if (a != fld.spec()) fail(ErrorCode::FingerprintMismatch, "KFS1 field " + a + " differs from " + fld.spec());
    } else if (key == "f") {
      fs.f = Poly<F>(fld, parse_list(a, 7));
    } else if (key == "h") {
      fs.h = Poly<F>(fld, parse_list(a, 4));
    } else if (key == "convention") {
      convention = a;
    } else if (key == "fingerprint") {
      fp = a;
    } else if (key.rfind("delta", 0) == 0 && a == "quartic4") {
      int i = std::stoi(key.substr(5)) - 1;
      if (i < 0 || i > 3) fail(ErrorCode::ParseError, "bad form id " + key);
      delta[static_cast<size_t>(i)] = parse_list(b, 35);
      ++nd;
    } else if (key.size() == 3 && key[0] == 'B' && a == "biquadratic44") {
      size_t slot = bqf_slot(key[1] - '1', key[2] - '1');
      bqf[slot] = parse_list(b, 100);
      ++nb;
    } else if (key[0] == 'Q' && a == "kummer4") {
      auto v = parse_list(b, 4);
      qs[key] = {v[0], v[1], v[2], v[3]};
    } else if (key[0] == 'W' && a == "matrix4x4") {
      auto v = parse_list(b, 16);
      Matrix<F> m(fld, 4, 4);
      for (size_t i = 0; i < 16; ++i) m(i / 4, i % 4) = v[i];
      std::string id = "Q" + key.substr(1);
      if (!qs.count(id)) fail(ErrorCode::ParseError, "matrix " + key + " precedes its point " + id);
      fs.w.push_back({id, qs[id], m});
    } else {
      fail(ErrorCode::ParseError, "unknown KFS1 line '" + key + "'");
    }
  }
  if (convention != kDiagonalConvention) fail(ErrorCode::FingerprintMismatch, "unknown diagonal convention " + convention);
  if (fp != curve_fingerprint(fld, fs.f, fs.h)) fail(ErrorCode::FingerprintMismatch, "fingerprint does not match the stored curve");
  if (expect && fp != curve_fingerprint(*expect))
    fail(ErrorCode::FingerprintMismatch, "formula file belongs to a different curve");
  if (nd == 4) fs.delta = delta;
  if (nb == 10) fs.bqf = bqf;
  return fs;
}

// ---------------------------------------------------------------------------
// Oracle sampling

/// Source of random divisor classes. Finite fields sample uniformly; over Q a
/// pool of small rational points is combined.
template <FieldType F>
class Oracle {
 public:
  using Element = typename F::Element;

  Oracle(const CurveModel<F>& c, uint64_t seed) : wm_(working_model(c)), rng_(seed) {
    if constexpr (!FiniteFieldType<F>) build_pool();
  }

  const WorkingModel<F>& wm() const { return wm_; }
  const CurveModel<F>& curve() const { return wm_.user; }
  SeededRng& rng() { return rng_; }

  MumfordDivisor<F> random_class() {
    if constexpr (FiniteFieldType<F>) {
      return g2k::random_class(wm_, rng_);
    } else {
      MumfordDivisor<F> D = MumfordDivisor<F>::zero(wm_.work.field());
      const int terms = 2 + static_cast<int>(rng_.below(2));
      for (int i = 0; i < terms; ++i) {
        const auto& B = pool_[rng_.below(pool_.size())];
        D = add(wm_, D, rng_.below(2) ? B : negate(wm_, B));
      }
      return D;
    }
  }

  KummerPoint<F> kappa_of(const MumfordDivisor<F>& D) const { return g2k::kappa_of(wm_, D); }

  const std::vector<MumfordDivisor<F>>& pool() const { return pool_; }

 private:
  void build_pool() {
    const F& fld = wm_.work.field();
    for (int64_t d = 1; d <= 6 && pool_.size() < 12; ++d)
      for (int64_t n = -12; n <= 12 && pool_.size() < 12; ++n) {
        if (std::gcd(n, d) != 1) continue;
        auto x = fld.from_ratio(n, d);
        std::vector<Element> ys;
        try {
          ys = fld.quad_solve(wm_.work.h()(x), wm_.work.f()(x));
        } catch (const Error&) {
          continue;
        }
        if (!ys.empty()) pool_.push_back(point_divisor(fld, x, ys[0]));
      }
    if (pool_.size() < 2) fail(ErrorCode::ExhaustedRetries, "too few small rational points for the sample pool");
  }

  WorkingModel<F> wm_;
  SeededRng rng_;
  std::vector<MumfordDivisor<F>> pool_;
};

struct SynthesisOptions {
  size_t delta_samples = 140;
  size_t bqf_samples = 340;
  size_t w_samples = 24;
};

namespace detail {

template <FieldType F>
std::vector<typename F::Element> monomials4(const KummerPoint<F>& k) {
  return quartic_monomials<typename F::Element>(std::span<const typename F::Element>(k.data(), 4));
}

template <FieldType F>
std::vector<typename F::Element> monomials44(const KummerPoint<F>& x, const KummerPoint<F>& y) {
  using E = typename F::Element;
  return biquadratic_monomials<E>(std::span<const E>(x.data(), 4), std::span<const E>(y.data(), 4));
}

template <class Fn>
auto retry_unsupported(Fn&& fn) {
  for (int i = 0;; ++i) {
    try {
      return fn();
    } catch (const Error& e) {
      if ((e.code() != ErrorCode::UnsupportedDivisor && e.code() != ErrorCode::NonGenericDivisor) || i > 1000) throw;
    }
  }
}

}  // namespace detail

/// Evaluates delta at a quadruple.
template <FieldType F>
KummerPoint<F> eval_delta(const F& fld, const std::array<std::vector<typename F::Element>, 4>& d,
                          const KummerPoint<F>& k, OpCounter* ops = nullptr) {
  using E = typename F::Element;
  auto m = quartic_monomials<E>(std::span<const E>(k.data(), 4), ops);
  KummerPoint<F> out;
  for (size_t i = 0; i < 4; ++i) out[i] = dot_skip<E>(d[i], m, fld.zero(), ops);
  return out;
}

/// All ten B_ij(x, y) as a symmetric 4x4 array.
template <FieldType F>
std::array<std::array<typename F::Element, 4>, 4> eval_bqf(const F& fld,
                                                          const std::array<std::vector<typename F::Element>, 10>& b,
                                                          const KummerPoint<F>& x, const KummerPoint<F>& y,
                                                          OpCounter* ops = nullptr) {
  using E = typename F::Element;
  auto m = biquadratic_monomials<E>(std::span<const E>(x.data(), 4), std::span<const E>(y.data(), 4), ops);
  std::array<std::array<E, 4>, 4> out;
  for (size_t k = 0; k < 10; ++k) {
    auto [i, j] = bqf_pairs()[k];
    out[static_cast<size_t>(i)][static_cast<size_t>(j)] = out[static_cast<size_t>(j)][static_cast<size_t>(i)] =
        dot_skip<E>(b[k], m, fld.zero(), ops);
  }
  return out;
}

/// Right-hand side of the B identity for given w, z.
template <FieldType F>
std::array<std::array<typename F::Element, 4>, 4> bqf_target(const KummerPoint<F>& w, const KummerPoint<F>& z) {
  std::array<std::array<typename F::Element, 4>, 4> t;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) t[i][j] = i == j ? w[i] * z[i] : w[i] * z[j] + w[j] * z[i];
  return t;
}

/// Is there a nonzero scalar c with a = c * b entrywise (b not all zero)?
template <class E>
bool proportional_arrays(const std::vector<E>& a, const std::vector<E>& b) {
  size_t piv = a.size();
  for (size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_zero()) {
      piv = i;
      break;
    }
  if (piv == a.size() || a[piv].is_zero()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] * b[piv] == b[i] * a[piv])) return false;
  return true;
}

template <FieldType F>
std::vector<typename F::Element> flatten(const std::array<std::array<typename F::Element, 4>, 4>& m) {
  std::vector<typename F::Element> v;
  for (const auto& r : m) v.insert(v.end(), r.begin(), r.end());
  return v;
}

// ---------------------------------------------------------------------------
// delta

template <FieldType F>
std::array<std::vector<typename F::Element>, 4> synthesize_delta(Oracle<F>& oracle, size_t samples) {
  const CurveModel<F>& c = oracle.curve();
  const F& fld = c.field();
  using E = typename F::Element;
  const auto K = quartic_from_curve(c);
  const size_t kslot = quartic_index({0, 2, 0, 2});
  for (size_t n = samples;; n *= 2) {
    Matrix<F> M(fld, 0, 140);
    for (size_t s = 0; s < n; ++s) {
      auto [x, t] = detail::retry_unsupported([&] {
        auto D = oracle.random_class();
        return std::pair{oracle.kappa_of(D), normalize<F>(oracle.kappa_of(add(oracle.wm(), D, D)))};
      });
      auto m = detail::monomials4<F>(x);
      size_t p = 0;
      while (t[p].is_zero()) ++p;
      for (size_t i = 0; i < 4; ++i) {
        if (i == p) continue;
        std::vector<E> row(140, fld.zero());
        for (size_t k = 0; k < 35; ++k) {
          row[35 * i + k] = m[k] * t[p];
          row[35 * p + k] = -(m[k] * t[i]);
        }
        M.append_row(row);
      }
    }
    auto ker = solve_kernel(M);
    if (ker.size() != 5) {
      if (n >= 4 * samples)
        fail(ErrorCode::KernelDimensionUnexpected, "delta kernel has dimension " + std::to_string(ker.size()) + ", expected 5");
      continue;
    }
    // remove the multiples of K, keep the one remaining direction
    Matrix<F> R(fld, 0, 140);
    for (auto& v : ker) {
      for (size_t i = 0; i < 4; ++i) {
        const E lead = v[35 * i + kslot];
        for (size_t k = 0; k < 35; ++k) v[35 * i + k] -= lead * K.coeffs[k];
      }
      R.append_row(v);
    }
    R.rref();
    std::vector<E> best = R.row(0);
    if (R.rank() != 1) fail(ErrorCode::KernelDimensionUnexpected, "delta is not unique modulo K");
    normalize_first_nonzero<F>(best);
    std::array<std::vector<E>, 4> out;
    for (size_t i = 0; i < 4; ++i) out[i].assign(best.begin() + static_cast<long>(35 * i), best.begin() + static_cast<long>(35 * (i + 1)));
    return out;
  }
}

// ---------------------------------------------------------------------------
// B

template <FieldType F>
std::array<std::vector<typename F::Element>, 10> synthesize_bqf(Oracle<F>& oracle, size_t samples) {
  const CurveModel<F>& c = oracle.curve();
  const F& fld = c.field();
  using E = typename F::Element;
  for (size_t n = samples;; n *= 2) {
    std::vector<std::vector<E>> A;
    std::vector<std::array<E, 10>> T;
    while (A.size() < n) {
      auto [x, y, w, z] = detail::retry_unsupported([&] {
        auto P = oracle.random_class();
        auto Q = oracle.random_class();
        auto& wm = oracle.wm();
        return std::tuple{oracle.kappa_of(P), oracle.kappa_of(Q), oracle.kappa_of(add(wm, P, Q)),
                          oracle.kappa_of(add(wm, P, negate(wm, Q)))};
      });
      auto t = bqf_target<F>(w, z);
      if (t[0][0].is_zero()) continue;
      std::array<E, 10> tv;
      for (size_t k = 0; k < 10; ++k) tv[k] = t[static_cast<size_t>(bqf_pairs()[k].first)][static_cast<size_t>(bqf_pairs()[k].second)];
      A.push_back(detail::monomials44<F>(x, y));
      T.push_back(tv);
    }
    bool short_rank = false;
    Matrix<F> constraints(fld, 0, 100);
    std::vector<Matrix<F>> reduced;
    for (size_t blk = 1; blk < 10 && !short_rank; ++blk) {
      Matrix<F> M(fld, n, 200);
      for (size_t s = 0; s < n; ++s) {
        const E r = T[s][blk] / T[s][0];
        for (size_t k = 0; k < 100; ++k) {
          M(s, k) = A[s][k];
          M(s, 100 + k) = -(r * A[s][k]);
        }
      }
      auto piv = M.rref();
      size_t head = 0;
      while (head < piv.size() && piv[head] < 100) ++head;
      if (head != 100) {
        short_rank = true;
        break;
      }
      for (size_t r = head; r < piv.size(); ++r) {
        std::vector<E> row(100);
        for (size_t k = 0; k < 100; ++k) row[k] = M(r, 100 + k);
        constraints.append_row(row);
      }
      reduced.push_back(std::move(M));
    }
    std::vector<std::vector<E>> ker;
    if (!short_rank) ker = solve_kernel(constraints);
    if (short_rank || ker.size() != 1) {
      if (n >= 4 * samples)
        fail(ErrorCode::KernelDimensionUnexpected,
             "B kernel has dimension " + std::to_string(short_rank ? 0 : ker.size()) + ", expected 1");
      continue;
    }
    std::array<std::vector<E>, 10> out;
    out[0] = ker[0];
    for (size_t blk = 1; blk < 10; ++blk) {
      const Matrix<F>& M = reduced[blk - 1];
      std::vector<E> v(100, fld.zero());
      for (size_t r = 0; r < 100; ++r) {
        E acc = fld.zero();
        for (size_t k = 0; k < 100; ++k) acc += M(r, 100 + k) * out[0][k];
        v[r] = -acc;
      }
      out[blk] = v;
    }
    return out;
  }
}

// ---------------------------------------------------------------------------
// W, odd characteristic

template <FieldType F>
Matrix<F> synthesize_w_oddchar(Oracle<F>& oracle, const TwoTorsionClass<F>& Q, size_t samples) {
  const CurveModel<F>& c = oracle.curve();
  const F& fld = c.field();
  using E = typename F::Element;
  if (fld.characteristic() == 2) fail(ErrorCode::CharacteristicTwo, "use the printed W matrix in characteristic 2");
  auto DQ = from_point_pair(oracle.wm(), Q.pair);
  for (size_t n = samples;; n *= 2) {
    Matrix<F> M(fld, 0, 16);
    for (size_t s = 0; s < n; ++s) {
      auto [x, t] = detail::retry_unsupported([&] {
        auto D = oracle.random_class();
        return std::pair{oracle.kappa_of(D), normalize<F>(oracle.kappa_of(add(oracle.wm(), D, DQ)))};
      });
      size_t p = 0;
      while (t[p].is_zero()) ++p;
      for (size_t i = 0; i < 4; ++i) {
        if (i == p) continue;
        std::vector<E> row(16, fld.zero());
        for (size_t j = 0; j < 4; ++j) {
          row[4 * i + j] = x[j] * t[p];
          row[4 * p + j] = -(x[j] * t[i]);
        }
        M.append_row(row);
      }
    }
    auto ker = solve_kernel(M);
    if (ker.size() != 1) {
      if (n >= 4 * samples)
        fail(ErrorCode::KernelDimensionUnexpected, "W kernel has dimension " + std::to_string(ker.size()) + ", expected 1");
      continue;
    }
    Matrix<F> W(fld, 4, 4);
    for (size_t k = 0; k < 16; ++k) W(k / 4, k % 4) = ker[0][k];
    return W;
  }
}

// ---------------------------------------------------------------------------
// Tiny binary fields: synthesize over an extension, then descend

struct BinaryEmbedding {
  BinaryField small, big;
  std::vector<uint64_t> image;  // image[v] = embedding of small element v

  BinaryEmbedding(BinaryField s, BinaryField b) : small(s), big(b) {
    if (big.degree() % small.degree() != 0)
      fail(ErrorCode::InvalidFieldSpec, "extension degree is not a multiple of the subfield degree");
    std::vector<BinaryElement> mc;
    for (int i = 0; i <= small.degree(); ++i) mc.push_back(big.from_int(static_cast<int64_t>((small.modulus() >> i) & 1)));
    auto rts = roots(Poly<BinaryField>(big, mc));
    if (rts.empty()) fail(ErrorCode::NotInSubfield, "subfield modulus has no root in the extension");
    const auto theta = rts.front().first;
    for (uint64_t v = 0; v < small.order(); ++v) {
      BinaryElement acc = big.zero(), pw = big.one();
      for (int i = 0; i < small.degree(); ++i) {
        if ((v >> i) & 1) acc += pw;
        pw *= theta;
      }
      image.push_back(acc.value());
    }
  }

  BinaryElement up(const BinaryElement& a) const { return big.from_bits(image[a.value()]); }
  BinaryElement down(const BinaryElement& a) const {
    for (uint64_t v = 0; v < image.size(); ++v)
      if (image[v] == a.value()) return small.from_bits(v);
    fail(ErrorCode::NotInSubfield, "coefficient " + big.format(a) + " is not in " + small.spec());
  }
  Poly<BinaryField> up(const Poly<BinaryField>& p) const {
    std::vector<BinaryElement> c;
    for (const auto& e : p.coeffs()) c.push_back(up(e));
    return Poly<BinaryField>(big, c);
  }
};

/// Degree of the extension used for curves over GF(2^m): the smallest
/// multiple of m that is at least 16.
inline int synthesis_extension_degree(int m) {
  int M = m;
  while (M < 16) M += m;
  return M;
}

inline BinaryEmbedding extension_for(const BinaryField& small) {
  return BinaryEmbedding(small, BinaryField::with_degree(synthesis_extension_degree(small.degree())));
}

inline FormulaSet<BinaryField> descend_coefficients(const FormulaSet<BinaryField>& fs, const BinaryEmbedding& emb) {
  auto down = [&](const std::vector<BinaryElement>& v) {
    std::vector<BinaryElement> o;
    for (const auto& e : v) o.push_back(emb.down(e));
    return o;
  };
  auto downp = [&](const Poly<BinaryField>& p) { return Poly<BinaryField>(emb.small, down(p.coeffs())); };
  FormulaSet<BinaryField> out{emb.small, downp(fs.f), downp(fs.h), std::nullopt, std::nullopt, {}};
  if (fs.delta) {
    std::array<std::vector<BinaryElement>, 4> d;
    for (size_t i = 0; i < 4; ++i) d[i] = down((*fs.delta)[i]);
    out.delta = d;
  }
  if (fs.bqf) {
    std::array<std::vector<BinaryElement>, 10> b;
    for (size_t i = 0; i < 10; ++i) b[i] = down((*fs.bqf)[i]);
    out.bqf = b;
  }
  for (const auto& t : fs.w) {
    Matrix<BinaryField> m(emb.small, 4, 4);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) m(i, j) = emb.down(t.w(i, j));
    out.w.push_back({t.id, {emb.down(t.kq[0]), emb.down(t.kq[1]), emb.down(t.kq[2]), emb.down(t.kq[3])}, m});
  }
  return out;
}

/// Identity on prime fields.
inline FormulaSet<PrimeField> descend_coefficients(const FormulaSet<PrimeField>& fs, const PrimeField& sub) {
  if (!(fs.field == sub)) fail(ErrorCode::NotInSubfield, "a prime field has no proper subfield");
  return fs;
}

inline bool needs_extension(const BinaryField& f) { return f.degree() < 16; }
inline bool needs_extension(const PrimeField&) { return false; }
inline bool needs_extension(const RationalField&) { return false; }

// ---------------------------------------------------------------------------
// Q by reduction modulo several primes

namespace detail {

inline PrimeElement reduce_mod(const RationalElement& a, const PrimeField& p) {
  mpz_class m(static_cast<unsigned long>(0));
  mpz_class num = a.value().get_num(), den = a.value().get_den();
  const uint64_t pv = p.modulus();
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(uint64_t), 0, 0, &pv);
  mpz_class nr, dr;
  mpz_mod(nr.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
  mpz_mod(dr.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
  auto to64 = [](const mpz_class& z) {
    uint64_t v = 0;
    size_t cnt = 0;
    mpz_export(&v, &cnt, 1, sizeof(uint64_t), 0, 0, z.get_mpz_t());
    return v;
  };
  if (dr == 0) fail(ErrorCode::DivisionByZero, "denominator vanishes modulo p");
  return p.from_u64(to64(nr)) / p.from_u64(to64(dr));
}

inline mpz_class to_mpz(uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(uint64_t), 0, 0, &v);
  return z;
}

/// n/d with |n|, |d| <= sqrt(m/2) and n = r d (mod m), if one exists.
inline std::optional<mpq_class> rational_reconstruct(const mpz_class& r, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class out(r1, t1);
  out.canonicalize();
  return out;
}

inline std::vector<uint64_t> reduction_primes() {
  std::vector<uint64_t> ps;
  for (uint64_t p = (1ULL << 60) - 1; ps.size() < 64; p -= 2)
    if (detail::is_prime_u64(p)) ps.push_back(p);
  return ps;
}

inline CurveModel<PrimeField> reduce_curve(const CurveModel<RationalField>& c, const PrimeField& p) {
  std::vector<PrimeElement> f, h;
  for (int i = 0; i <= 6; ++i) f.push_back(reduce_mod(c.fc(i), p));
  for (int i = 0; i <= 3; ++i) h.push_back(reduce_mod(c.hc(i), p));
  return CurveModel<PrimeField>(p, f, h);
}

// Flattened canonical data of a formula set modulo one prime.
inline std::vector<uint64_t> flatten_mod(const FormulaSet<PrimeField>& fs) {
  std::vector<uint64_t> v;
  if (fs.delta)
    for (const auto& d : *fs.delta)
      for (const auto& e : d) v.push_back(e.value());
  if (fs.bqf)
    for (const auto& d : *fs.bqf)
      for (const auto& e : d) v.push_back(e.value());
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Driver

struct SynthesisRequest {
  bool delta = true;
  bool bqf = true;
  bool w = true;
  uint64_t seed = 1;
  SynthesisOptions options;
};

template <FieldType F>
FormulaSet<F> synthesize(const CurveModel<F>& c, const SynthesisRequest& req);

namespace detail {

template <FieldType F>
FormulaSet<F> synthesize_direct(const CurveModel<F>& c, const SynthesisRequest& req) {
  auto v = validate(c);
  if (!v.valid) fail(ErrorCode::SingularCurve, v.reason);
  FormulaSet<F> fs{c.field(), c.f(), c.h(), std::nullopt, std::nullopt, {}};
  SeededRng master(req.seed);
  if (req.delta) {
    Oracle<F> o(c, master.fork(1).next());
    fs.delta = synthesize_delta(o, req.options.delta_samples);
  }
  if (req.bqf) {
    Oracle<F> o(c, master.fork(2).next());
    fs.bqf = synthesize_bqf(o, req.options.bqf_samples);
  }
  if (req.w) {
    if constexpr (FiniteFieldType<F>) {
      if (c.field().characteristic() != 2) {
        Oracle<F> o(c, master.fork(3).next());
        for (const auto& Q : two_torsion_classes(c)) fs.w.push_back({Q.id, Q.kq, synthesize_w_oddchar(o, Q, req.options.w_samples)});
      }
    }
  }
  return fs;
}

}  // namespace detail

inline FormulaSet<PrimeField> synthesize_impl(const CurveModel<PrimeField>& c, const SynthesisRequest& req) {
  if (c.field().modulus() < 1000)
    fail(ErrorCode::UnsupportedField, "synthesis needs p >= 1000 (no odd-characteristic extension fields)");
  return detail::synthesize_direct(c, req);
}

inline FormulaSet<BinaryField> synthesize_impl(const CurveModel<BinaryField>& c, const SynthesisRequest& req) {
  if (!needs_extension(c.field())) return detail::synthesize_direct(c, req);
  BinaryEmbedding emb = extension_for(c.field());
  CurveModel<BinaryField> big(emb.big, emb.up(c.f()), emb.up(c.h()));
  SynthesisRequest r2 = req;
  r2.w = false;
  auto fs = detail::synthesize_direct(big, r2);
  return descend_coefficients(fs, emb);
}

inline FormulaSet<RationalField> synthesize_impl(const CurveModel<RationalField>& c, const SynthesisRequest& req) {
  auto v = validate(c);
  if (!v.valid) fail(ErrorCode::SingularCurve, v.reason);
  RationalField q;
  SynthesisRequest r2 = req;
  r2.w = false;
  mpz_class modulus = 1;
  std::vector<mpz_class> acc;
  std::optional<std::vector<mpq_class>> previous;
  size_t used = 0;
  for (uint64_t p : detail::reduction_primes()) {
    PrimeField fp(p);
    CurveModel<PrimeField> cp = [&] {
      try {
        return detail::reduce_curve(c, fp);
      } catch (const Error&) {
        return CurveModel<PrimeField>(fp, Poly<PrimeField>(fp), Poly<PrimeField>(fp));
      }
    }();
    if (!validate(cp).valid) continue;
    auto fs = detail::synthesize_direct(cp, r2);
    auto flat = detail::flatten_mod(fs);
    const mpz_class pz = detail::to_mpz(p);
    if (acc.empty()) {
      for (uint64_t x : flat) acc.push_back(detail::to_mpz(x));
    } else {
      if (flat.size() != acc.size()) fail(ErrorCode::LengthMismatch, "inconsistent formula shapes across primes");
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
      for (size_t i = 0; i < acc.size(); ++i) {
        // x = acc + modulus * ((r - acc) * modulus^-1 mod p)
        mpz_class t = (detail::to_mpz(flat[i]) - acc[i]) * inv;
        mpz_mod(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t());
        acc[i] += modulus * t;
      }
    }
    modulus *= pz;
    ++used;
    std::vector<mpq_class> rec;
    bool ok = true;
    for (const auto& a : acc) {
      auto r = detail::rational_reconstruct(a, modulus);
      if (!r) {
        ok = false;
        break;
      }
      rec.push_back(*r);
    }
    if (ok && previous && *previous == rec) {
      FormulaSet<RationalField> out{q, c.f(), c.h(), std::nullopt, std::nullopt, {}};
      size_t pos = 0;
      auto take = [&](size_t n) {
        std::vector<RationalElement> v;
        for (size_t i = 0; i < n; ++i) v.emplace_back(rec[pos++]);
        return v;
      };
      if (req.delta) {
        std::array<std::vector<RationalElement>, 4> d;
        for (auto& x : d) x = take(35);
        out.delta = d;
      }
      if (req.bqf) {
        std::array<std::vector<RationalElement>, 10> b;
        for (auto& x : b) x = take(100);
        out.bqf = b;
      }
      return out;
    }
    previous = ok ? std::optional(rec) : std::nullopt;
    if (used > 40) break;
  }
  fail(ErrorCode::KernelDimensionUnexpected, "rational reconstruction did not stabilize");
}

template <FieldType F>
FormulaSet<F> synthesize(const CurveModel<F>& c, const SynthesisRequest& req) {
  return synthesize_impl(c, req);
}

// ---------------------------------------------------------------------------
// Checks against the printed relations on the simplified model

struct CrossCheckReport {
  bool ok = true;
  size_t checked = 0;
  size_t failures = 0;
  std::string cfit;
  size_t printed_b44_failures = 0;
  size_t block3_failures = 0;
  std::string detail;
};

/// tau(delta(k)) ~ delta'(tau(k)) at `n` oracle points.
template <FieldType F>
CrossCheckReport crosscheck_tau_delta(const CurveModel<F>& c, const FormulaSet<F>& fs, const FormulaSet<F>& fs_simpl,
                                      uint64_t seed, size_t n = 200) {
  if (!fs.delta || !fs_simpl.delta) fail(ErrorCode::FormulaSetMissing, "delta missing");
  const F& fld = c.field();
  const Matrix<F> T = tau_matrix(c);
  Oracle<F> o(c, seed);
  CrossCheckReport rep;
  for (size_t s = 0; s < n; ++s) {
    auto k = detail::retry_unsupported([&] { return o.kappa_of(o.random_class()); });
    auto lhs = apply_matrix(T, eval_delta(fld, *fs.delta, k));
    auto rhs = eval_delta(fld, *fs_simpl.delta, apply_matrix(T, k));
    ++rep.checked;
    if (!proportional<F>(lhs, rhs)) ++rep.failures;
  }
  rep.ok = rep.failures == 0;
  return rep;
}

/// Predicted B(x, y) from b' = B'(tau x, tau y) under B_ii = w_i z_i.
template <FieldType F>
std::array<std::array<typename F::Element, 4>, 4> convert_bprime(const CurveModel<F>& c,
                                                                 const std::array<std::array<typename F::Element, 4>, 4>& bp,
                                                                 bool printed_b44 = false) {
  const F& fld = c.field();
  using E = typename F::Element;
  const std::array<E, 3> cc{c.hc(0) * c.hc(2), c.hc(0) * c.hc(3), c.hc(1) * c.hc(3)};
  const E quarter = fld.from_int(4).inv(), half = fld.from_int(2).inv(), eighth = fld.from_int(8).inv(),
          sixteenth = fld.from_int(16).inv();
  auto out = bp;
  for (size_t j = 0; j < 3; ++j) {
    E acc = quarter * bp[j][3];
    for (size_t k = 0; k < 3; ++k) acc += half * cc[k] * (k == j ? fld.from_int(2) * bp[j][j] : bp[j][k]);
    out[j][3] = out[3][j] = acc;
  }
  E lin = fld.zero(), sq = fld.zero(), cross = fld.zero();
  for (size_t k = 0; k < 3; ++k) {
    lin += cc[k] * bp[k][3];
    sq += cc[k] * cc[k] * bp[k][k];
  }
  cross = cc[0] * cc[1] * bp[0][1] + cc[0] * cc[2] * bp[0][2] + cc[1] * cc[2] * bp[1][2];
  if (printed_b44)
    out[3][3] = quarter * (lin + sq) + eighth * cross + sixteenth * bp[3][3];
  else
    out[3][3] = eighth * lin + quarter * (sq + cross) + sixteenth * bp[3][3];
  return out;
}

/// B(x, y) = cfit * Convert(B'(tau x, tau y)) with one scalar for all entries
/// and samples; also counts the samples where the printed B44 variant or the
/// upper 3x3 block relation fail.
template <FieldType F>
CrossCheckReport crosscheck_b_conversion(const CurveModel<F>& c, const FormulaSet<F>& fs, const FormulaSet<F>& fs_simpl,
                                         uint64_t seed, size_t n = 200) {
  if (!fs.bqf || !fs_simpl.bqf) fail(ErrorCode::FormulaSetMissing, "B missing");
  const F& fld = c.field();
  using E = typename F::Element;
  const Matrix<F> T = tau_matrix(c);
  Oracle<F> o(c, seed);
  CrossCheckReport rep;
  std::optional<E> cfit;
  for (size_t s = 0; s < n; ++s) {
    auto [x, y] = detail::retry_unsupported([&] {
      return std::pair{o.kappa_of(o.random_class()), o.kappa_of(o.random_class())};
    });
    auto B = eval_bqf(fld, *fs.bqf, x, y);
    auto bp = eval_bqf(fld, *fs_simpl.bqf, apply_matrix(T, x), apply_matrix(T, y));
    auto pred = convert_bprime(c, bp);
    auto pred_printed = convert_bprime(c, bp, true);
    ++rep.checked;
    if (!cfit) {
      for (size_t i = 0; i < 4 && !cfit; ++i)
        for (size_t j = 0; j < 4 && !cfit; ++j)
          if (!pred[i][j].is_zero()) cfit = B[i][j] / pred[i][j];
      if (!cfit || cfit->is_zero()) {
        ++rep.failures;
        cfit.reset();
        continue;
      }
    }
    bool good = true, good_printed = true, good_block = true;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        if (!(B[i][j] == *cfit * pred[i][j])) good = false;
        if (!(B[i][j] == *cfit * pred_printed[i][j])) good_printed = false;
        if (i < 3 && j < 3 && !(B[i][j] == *cfit * bp[i][j])) good_block = false;
      }
    if (!good) ++rep.failures;
    if (!good_printed) ++rep.printed_b44_failures;
    if (!good_block) ++rep.block3_failures;
  }
  rep.ok = rep.failures == 0 && rep.block3_failures == 0 && cfit.has_value();
  if (cfit) rep.cfit = fld.format(*cfit);
  return rep;
}

}  // namespace g2k
