#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "g2k/forms.hpp"
#include "g2k/matrix.hpp"
#include "g2k/poly.hpp"

using namespace g2k;

namespace {

const PrimeField gf7(7);
const PrimeField gf1009(1009);
const BinaryField gf4(0x7);
const BinaryField gf16(0x13);

template <class F>
std::set<uint64_t> brute_quad_roots(const F& f, const typename F::Element& b, const typename F::Element& c) {
  std::set<uint64_t> out;
  for (uint64_t i = 0; i < f.order(); ++i) {
    auto y = f.element_at(i);
    if (y * y + b * y - c == f.zero()) out.insert(f.index_of(y));
  }
  return out;
}

template <class F>
std::set<uint64_t> indices(const F& f, const std::vector<typename F::Element>& v) {
  std::set<uint64_t> out;
  for (const auto& e : v) out.insert(f.index_of(e));
  return out;
}

template <class F>
void field_axioms(const F& f, uint64_t seed) {
  SeededRng rng(seed);
  for (int i = 0; i < 1000; ++i) {
    auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, f.zero());
    if (!a.is_zero()) EXPECT_EQ(a * a.inv(), f.one());
  }
}

}  // namespace

TEST(PrimeField, SmallProducts) {
  EXPECT_EQ(gf7.from_int(3) * gf7.from_int(5), gf7.one());
  EXPECT_EQ(gf7.parse("-1"), gf7.from_int(6));
  EXPECT_EQ(gf7.format(gf7.from_int(-2)), "5");
}

TEST(PrimeField, Axioms) {
  field_axioms(gf1009, 1);
  field_axioms(PrimeField(1152921504606846883ULL), 2);
}

TEST(PrimeField, DivisionByZeroThrows) {
  try {
    (void)gf7.zero().inv();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(PrimeField, MixedModuliThrow) {
  try {
    (void)(gf7.one() + gf1009.one());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
  }
}

TEST(PrimeField, QuadSolve) {
  EXPECT_EQ(indices(gf7, gf7.quad_solve(gf7.zero(), gf7.from_int(2))), (std::set<uint64_t>{3, 4}));
  for (uint64_t b = 0; b < 7; ++b)
    for (uint64_t c = 0; c < 7; ++c)
      EXPECT_EQ(indices(gf7, gf7.quad_solve(gf7.from_u64(b), gf7.from_u64(c))),
                brute_quad_roots(gf7, gf7.from_u64(b), gf7.from_u64(c)));
}

TEST(PrimeField, RandomInRangeAndUniform) {
  const PrimeField gf3(3);
  SeededRng rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_LT(gf3.random(rng).value(), 3u);

  const PrimeField f(101);
  std::vector<int> hist(101);
  for (int i = 0; i < 10000; ++i) ++hist[f.random(rng).value()];
  const double mean = 10000.0 / 101, sd = std::sqrt(mean * (1 - 1.0 / 101));
  for (int h : hist) EXPECT_LT(std::abs(h - mean), 5 * sd);
}

TEST(BinaryField, SmallProducts) {
  const auto t = gf4.from_bits(2);
  EXPECT_EQ(t * t, gf4.from_bits(3));
  EXPECT_EQ(gf4.format(t * t), "0x3");
}

TEST(BinaryField, Axioms) {
  field_axioms(gf16, 3);
  field_axioms(BinaryField(0x1002b), 4);
  field_axioms(BinaryField::with_degree(61), 5);
}

TEST(BinaryField, QuadSolveExamples) {
  const auto t = gf4.from_bits(2), one = gf4.one();
  EXPECT_EQ(indices(gf4, gf4.quad_solve(one, one)), (std::set<uint64_t>{2, 3}));
  EXPECT_TRUE(gf4.quad_solve(one, t).empty());
}

TEST(BinaryField, QuadSolveExhaustive) {
  for (const auto& f : {BinaryField(0x3), gf4, BinaryField(0xb), gf16})
    for (uint64_t b = 0; b < f.order(); ++b)
      for (uint64_t c = 0; c < f.order(); ++c)
        EXPECT_EQ(indices(f, f.quad_solve(f.element_at(b), f.element_at(c))),
                  brute_quad_roots(f, f.element_at(b), f.element_at(c)));
}

TEST(BinaryField, SquaringIsBijective) {
  std::set<uint64_t> squares;
  for (uint64_t i = 0; i < gf16.order(); ++i) squares.insert(gf16.index_of(gf16.element_at(i).square()));
  EXPECT_EQ(squares.size(), gf16.order());
  for (uint64_t i = 0; i < gf16.order(); ++i) EXPECT_EQ(gf16.quad_solve(gf16.zero(), gf16.element_at(i)).size(), 1u);
}

TEST(BinaryField, RandomIsReproducible) {
  SeededRng a(9), b(9);
  auto x1 = gf16.random(a), x2 = gf16.random(a);
  EXPECT_EQ(x1, gf16.random(b));
  EXPECT_EQ(x2, gf16.random(b));
}

TEST(RationalField, Sum) {
  const RationalField q;
  EXPECT_EQ(q.parse("1/2") + q.parse("1/3"), q.parse("5/6"));
  EXPECT_EQ(q.format(q.parse("2/4")), "1/2");
}

TEST(FieldSpec, RoundTrip) {
  for (const char* s : {"prime:p=1009", "binary:m=16,mod=0x1002b", "rational"})
    EXPECT_EQ(std::visit([](const auto& f) { return f.spec(); }, parse_field_spec(s)), s);
  EXPECT_THROW(parse_field_spec("prime:p=1008"), Error);
  EXPECT_THROW(parse_field_spec("binary:m=4,mod=0x15"), Error);
  EXPECT_THROW(parse_field_spec("complex"), Error);
}

TEST(Poly, GcdAndDivrem) {
  using P = Poly<PrimeField>;
  auto c = [](int64_t v) { return gf7.from_int(v); };
  P a(gf7, {c(-1), c(0), c(1)}), b(gf7, {c(-1), c(1)});
  EXPECT_EQ(gcd(a, b), b);
  P x3 = P::monomial(gf7, c(1), 3), x2 = P::monomial(gf7, c(1), 2);
  auto [q, r] = divrem(x3, x2);
  EXPECT_EQ(q, P::x(gf7));
  EXPECT_TRUE(r.is_zero());
}

TEST(Poly, SquarefreeSexticIsCoprimeToDerivative) {
  using P = Poly<PrimeField>;
  std::vector<PrimeElement> c;
  for (int64_t v : {5, 17, 3, 902, 44, 1, 7}) c.push_back(gf1009.from_int(v));
  P f(gf1009, c);
  EXPECT_EQ(gcd(f, f.derivative()).degree(), 0);
}

TEST(Poly, RootsSmallExamples) {
  using P = Poly<PrimeField>;
  P a(gf7, {gf7.from_int(-1), gf7.zero(), gf7.one()});
  auto rs = roots(a);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].first.value(), 1u);
  EXPECT_EQ(rs[1].first.value(), 6u);
  EXPECT_EQ(rs[0].second, 1);

  const BinaryField f(0x1002b);
  auto br = roots(Poly<BinaryField>(f, {f.zero(), f.one(), f.one()}));
  ASSERT_EQ(br.size(), 2u);
  EXPECT_EQ(br[0].first, f.zero());
  EXPECT_EQ(br[1].first, f.one());
}

TEST(Poly, RootsMatchExhaustiveScan) {
  SeededRng rng(11);
  for (int t = 0; t < 20; ++t) {
    std::vector<PrimeElement> c;
    for (int i = 0; i < 3; ++i) c.push_back(gf1009.random(rng));
    c.push_back(gf1009.one());
    Poly<PrimeField> p(gf1009, c);
    std::set<uint64_t> want;
    for (uint64_t x = 0; x < 1009; ++x)
      if (p(gf1009.from_u64(x)).is_zero()) want.insert(x);
    std::set<uint64_t> got;
    for (const auto& [r, m] : roots(p)) got.insert(r.value());
    EXPECT_EQ(got, want);
  }
}

TEST(Poly, RootMultiplicity) {
  using P = Poly<PrimeField>;
  P lin = P::linear_root(gf1009, gf1009.from_int(3));
  auto rs = roots(lin * lin * lin * P::linear_root(gf1009, gf1009.from_int(5)));
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].second, 3);
  EXPECT_EQ(rs[1].second, 1);
}

TEST(Poly, RationalRoots) {
  const RationalField q;
  Poly<RationalField> p(q, {q.parse("-1"), q.parse("0"), q.parse("4")});
  auto rs = rational_roots(p);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].first, q.parse("-1/2"));
  EXPECT_EQ(rs[1].first, q.parse("1/2"));
}

TEST(Matrix, KernelTrivialCases) {
  EXPECT_TRUE(solve_kernel(Matrix<PrimeField>::identity(gf7, 4)).empty());
  EXPECT_EQ(solve_kernel(Matrix<PrimeField>(gf7, 3, 5)).size(), 5u);
}

TEST(Matrix, KernelOfConstructedSystem) {
  SeededRng rng(21);
  const size_t rows = 200, cols = 150;
  std::vector<PrimeElement> v(cols);
  for (auto& e : v) e = gf1009.random(rng);
  v[0] = gf1009.one();
  Matrix<PrimeField> m(gf1009, rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    PrimeElement acc = gf1009.zero();
    for (size_t c = 1; c < cols; ++c) {
      m(r, c) = gf1009.random(rng);
      acc += m(r, c) * v[c];
    }
    m(r, 0) = -acc;
  }
  auto ker = solve_kernel(m);
  ASSERT_EQ(ker.size(), 1u);
  for (size_t r = 0; r < rows; ++r) {
    PrimeElement acc = gf1009.zero();
    for (size_t c = 0; c < cols; ++c) acc += m(r, c) * ker[0][c];
    EXPECT_TRUE(acc.is_zero());
  }
}

TEST(Matrix, Inverse) {
  SeededRng rng(4);
  Matrix<PrimeField> m(gf1009, 4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) m(i, j) = gf1009.random(rng);
  EXPECT_EQ(m * m.inverse(), (Matrix<PrimeField>::identity(gf1009, 4)));
}

TEST(Forms, QuarticTrivialEvaluations) {
  std::vector<PrimeElement> zero(35, gf7.zero()), k44(35, gf7.zero());
  k44[quartic_index({0, 0, 0, 4})] = gf7.one();
  std::vector<PrimeElement> x{gf7.zero(), gf7.zero(), gf7.zero(), gf7.one()};
  EXPECT_TRUE(eval_quartic<PrimeField>(gf7, zero, x).is_zero());
  EXPECT_EQ(eval_quartic<PrimeField>(gf7, k44, x), gf7.one());
}

TEST(Forms, QuarticMatchesNaiveProduct) {
  SeededRng rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<PrimeElement> c(35), x(4);
    for (auto& e : c) e = gf1009.random(rng);
    for (auto& e : x) e = gf1009.random(rng);
    PrimeElement naive = gf1009.zero();
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b)
        for (int cc = 0; a + b + cc <= 4; ++cc) {
          const int d = 4 - a - b - cc;
          auto term = c[quartic_index({a, b, cc, d})];
          for (int i = 0; i < a; ++i) term *= x[0];
          for (int i = 0; i < b; ++i) term *= x[1];
          for (int i = 0; i < cc; ++i) term *= x[2];
          for (int i = 0; i < d; ++i) term *= x[3];
          naive += term;
        }
    EXPECT_EQ(eval_quartic<PrimeField>(gf1009, c, x), naive);
  }
}

TEST(Forms, BiquadraticMatchesNaiveProduct) {
  SeededRng rng(9);
  std::vector<PrimeElement> c(100), x(4), y(4);
  for (auto& e : c) e = gf1009.random(rng);
  for (auto& e : x) e = gf1009.random(rng);
  for (auto& e : y) e = gf1009.random(rng);
  std::vector<PrimeElement> qx, qy;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      qx.push_back(x[i] * x[j]);
      qy.push_back(y[i] * y[j]);
    }
  PrimeElement naive = gf1009.zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = k; l < 4; ++l)
          naive += c[10 * quadratic_index(i, j) + quadratic_index(k, l)] * x[i] * x[j] * y[k] * y[l];
  EXPECT_EQ(eval_biquadratic<PrimeField>(gf1009, c, x, y), naive);
  EXPECT_THROW(eval_biquadratic<PrimeField>(gf1009, std::vector<PrimeElement>(99, gf1009.zero()), x, y), Error);
}
