#include <gtest/gtest.h>

#include "g2k/ladder.hpp"

using namespace g2k;

namespace {

const PrimeField gf1009(1009);
const PrimeField gfp60(1152921504606846883ULL);
const BinaryField gf2_16(0x1002b);

template <class F>
CurveModel<F> curve(const F& f, std::vector<int64_t> fc, std::vector<int64_t> hc) {
  std::vector<typename F::Element> a, b;
  for (auto v : fc) a.push_back(f.from_int(v));
  for (auto v : hc) b.push_back(f.from_int(v));
  return CurveModel<F>(f, a, b);
}

CurveModel<BinaryField> binary_curve(const BinaryField& f, std::vector<uint64_t> fc, std::vector<uint64_t> hc) {
  std::vector<BinaryElement> a, b;
  for (auto v : fc) a.push_back(f.from_bits(v));
  for (auto v : hc) b.push_back(f.from_bits(v));
  return CurveModel<BinaryField>(f, a, b);
}

template <class F>
struct Fixture {
  CurveModel<F> curve;
  LadderContext<F> ctx;
  explicit Fixture(CurveModel<F> c)
      : curve(c), ctx(make_ladder_context(c, synthesize(c, SynthesisRequest{true, true, true, 31, {}}))) {}
};

const Fixture<PrimeField>& odd() {
  static const Fixture<PrimeField> f(curve(gf1009, {-1, 5, 7, 1, 2, 1, 0}, {2, 2, 4, 3}));
  return f;
}

const Fixture<BinaryField>& even() {
  static const Fixture<BinaryField> f(binary_curve(gf2_16, {0, 3, 0, 5, 0, 9, 0}, {0, 1, 1, 0}));
  return f;
}

const Fixture<PrimeField>& big() {
  static const Fixture<PrimeField> f(curve(gfp60, {-1, 5, 7, 1, 2, 1, 4}, {2, 2, 4, 3}));
  return f;
}

template <class F>
MumfordDivisor<F> sample(Oracle<F>& o) {
  return detail::retry_unsupported([&] { return o.random_class(); });
}

template <class F>
void doubling_against_oracle(const Fixture<F>& fx, uint64_t seed) {
  Oracle<F> o(fx.curve, seed);
  for (int i = 0; i < 1000; ++i) {
    auto [x, x2] = detail::retry_unsupported([&] {
      auto D = o.random_class();
      return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, D))};
    });
    EXPECT_TRUE(proportional<F>(xdbl(fx.ctx, x), x2));
  }
}

template <class F>
void addition_against_oracle(const Fixture<F>& fx, uint64_t seed) {
  Oracle<F> o(fx.curve, seed);
  auto ctx = fx.ctx;
  ctx.cross_check = true;
  for (int i = 0; i < 1000; ++i) {
    auto [xp, xq, xd, xs] = detail::retry_unsupported([&] {
      auto P = o.random_class(), Q = o.random_class();
      return std::array{o.kappa_of(P), o.kappa_of(Q), o.kappa_of(add(o.wm(), P, negate(o.wm(), Q))),
                        o.kappa_of(add(o.wm(), P, Q))};
    });
    EXPECT_TRUE(proportional<F>(xadd(ctx, xp, xq, xd), xs));
  }
}

template <class F>
void translation_against_oracle(const Fixture<F>& fx, uint64_t seed) {
  Oracle<F> o(fx.curve, seed);
  size_t used = 0;
  for (const auto& q : two_torsion_classes(fx.curve)) {
    bool have = false;
    for (const auto& t : fx.ctx.translations) have |= t.id == q.id;
    if (!have) continue;
    ++used;
    EXPECT_TRUE(proportional<F>(translate(fx.ctx, q.id, kummer_zero(fx.curve.field())), q.kq));
    EXPECT_TRUE(proportional<F>(xdbl(fx.ctx, q.kq), kummer_zero(fx.curve.field())));
    auto DQ = from_point_pair(o.wm(), q.pair);
    for (int i = 0; i < 1000; ++i) {
      auto [x, want] = detail::retry_unsupported([&] {
        auto D = o.random_class();
        return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, DQ))};
      });
      auto y = translate(fx.ctx, q.id, x);
      EXPECT_TRUE(proportional<F>(y, want));
      EXPECT_TRUE(proportional<F>(translate(fx.ctx, q.id, y), x));
    }
  }
  EXPECT_GT(used, 0u);
}

}  // namespace

TEST(Xdbl, ZeroIsFixed) {
  const auto z = kummer_zero(gf1009);
  EXPECT_TRUE(proportional<PrimeField>(xdbl(odd().ctx, z), z));
}

TEST(Xdbl, MatchesOracleOddChar) { doubling_against_oracle(odd(), 1); }
TEST(Xdbl, MatchesOracleCharTwo) { doubling_against_oracle(even(), 2); }

TEST(Xdbl, ZeroQuadrupleIsAnError) {
  KummerPoint<PrimeField> zero{gf1009.zero(), gf1009.zero(), gf1009.zero(), gf1009.zero()};
  try {
    (void)xdbl(odd().ctx, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroOutput);
  }
}

TEST(Xadd, DegenerateDifferences) {
  Oracle<PrimeField> o(odd().curve, 3);
  const auto z = kummer_zero(gf1009);
  for (int i = 0; i < 100; ++i) {
    auto x = o.kappa_of(sample(o));
    EXPECT_TRUE(proportional<PrimeField>(xadd(odd().ctx, x, x, z), xdbl(odd().ctx, x)));
    EXPECT_TRUE(proportional<PrimeField>(xadd(odd().ctx, x, z, x), x));
  }
}

TEST(Xadd, MatchesOracleOddChar) { addition_against_oracle(odd(), 4); }
TEST(Xadd, MatchesOracleCharTwo) { addition_against_oracle(even(), 5); }

TEST(Xadd, ZeroDifferenceIsAnError) {
  Oracle<PrimeField> o(odd().curve, 6);
  auto x = o.kappa_of(sample(o));
  KummerPoint<PrimeField> zero{gf1009.zero(), gf1009.zero(), gf1009.zero(), gf1009.zero()};
  try {
    (void)xadd(odd().ctx, x, x, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllPivotsFailed);
  }
}

TEST(Ladder, SmallScalars) {
  Oracle<PrimeField> o(odd().curve, 7);
  auto x = o.kappa_of(sample(o));
  EXPECT_TRUE(proportional<PrimeField>(ladder(odd().ctx, x, uint64_t{0}), kummer_zero(gf1009)));
  EXPECT_TRUE(proportional<PrimeField>(ladder(odd().ctx, x, uint64_t{1}), x));
  EXPECT_TRUE(proportional<PrimeField>(ladder(odd().ctx, x, uint64_t{2}), xdbl(odd().ctx, x)));
  EXPECT_THROW(ladder(odd().ctx, x, mpz_class(-1)), Error);
}

TEST(Ladder, MatchesOracleLargePrime) {
  Oracle<PrimeField> o(big().curve, 8);
  for (int i = 0; i < 20; ++i) {
    const uint64_t n = o.rng().below(1ULL << 40);
    auto [x, want] = detail::retry_unsupported([&] {
      auto D = o.random_class();
      return std::pair{o.kappa_of(D), o.kappa_of(scalar_mul(o.wm(), D, n))};
    });
    EXPECT_TRUE(proportional<PrimeField>(ladder(big().ctx, x, n), want));
  }
}

TEST(Ladder, MatchesOracleCharTwo) {
  Oracle<BinaryField> o(even().curve, 9);
  for (int i = 0; i < 20; ++i) {
    const uint64_t n = o.rng().below(1ULL << 40);
    auto [x, want] = detail::retry_unsupported([&] {
      auto D = o.random_class();
      return std::pair{o.kappa_of(D), o.kappa_of(scalar_mul(o.wm(), D, n))};
    });
    EXPECT_TRUE(proportional<BinaryField>(ladder(even().ctx, x, n), want));
  }
}

TEST(Ladder, MatchesOracleBigScalar) {
  Oracle<PrimeField> o(big().curve, 10);
  auto D = sample(o);
  mpz_class n("123456789012345678901234567890");
  mpz_class m = n;
  MumfordDivisor<PrimeField> acc = MumfordDivisor<PrimeField>::zero(gfp60), pw = D;
  while (m > 0) {
    if (mpz_odd_p(m.get_mpz_t())) acc = add(o.wm(), acc, pw);
    pw = add(o.wm(), pw, pw);
    m >>= 1;
  }
  EXPECT_TRUE(proportional<PrimeField>(ladder(big().ctx, o.kappa_of(D), n), o.kappa_of(acc)));
}

TEST(Translate, MatchesOracleOddChar) { translation_against_oracle(odd(), 11); }
TEST(Translate, MatchesOracleCharTwo) { translation_against_oracle(even(), 12); }

TEST(Translate, UnknownClass) { EXPECT_THROW(translate(odd().ctx, "Q99", kummer_zero(gf1009)), Error); }

TEST(Context, RejectsForeignFormulas) {
  auto other = curve(gf1009, {-1, 5, 7, 1, 2, 1, 0}, {2, 2, 4, 4});
  try {
    (void)make_ladder_context(other, odd().ctx.formulas);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FingerprintMismatch);
  }
}

TEST(Bench, CountsAreExactAndRegular) {
  auto r1 = bench(big().ctx, 3, 64, 5);
  auto r2 = bench(big().ctx, 3, 64, 6);
  EXPECT_TRUE(r1.counts_stable);
  EXPECT_EQ(r1.step.inv, 0u);
  EXPECT_EQ(r1.total.inv, 0u);
  EXPECT_EQ(r1.total, r2.total);
  EXPECT_EQ(r1.step, r2.step);

  SeededRng rng(7);
  auto x = random_surface_point(big().ctx.quartic, rng);
  const uint64_t n = 0xB00000000000001DULL;
  uint64_t rev = 0;
  for (int i = 0; i < 64; ++i) rev |= ((n >> i) & 1) << (63 - i);
  OpCounter a, b;
  (void)ladder(big().ctx, x, n, &a);
  (void)ladder(big().ctx, x, rev, &b);
  EXPECT_EQ(a, b);
}

TEST(Bench, RandomSurfacePoints) {
  SeededRng rng(8);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(on_surface(even().ctx.quartic, random_surface_point(even().ctx.quartic, rng)));
}
