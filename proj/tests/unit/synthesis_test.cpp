#include <gtest/gtest.h>

#include "g2k/synthesis.hpp"

using namespace g2k;

namespace {

const PrimeField gf1009(1009);
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
std::pair<KummerPoint<F>, KummerPoint<F>> doubling_sample(Oracle<F>& o) {
  return detail::retry_unsupported([&] {
    auto D = o.random_class();
    return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, D))};
  });
}

template <class F>
size_t delta_failures(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Oracle<F> o(c, seed);
  size_t bad = 0;
  for (size_t i = 0; i < n; ++i) {
    auto [x, t] = doubling_sample(o);
    bad += !proportional<F>(eval_delta(c.field(), *fs.delta, x), t);
  }
  return bad;
}

template <class F>
size_t bqf_failures(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Oracle<F> o(c, seed);
  size_t bad = 0;
  for (size_t i = 0; i < n; ++i) {
    auto [x, y, w, z] = detail::retry_unsupported([&] {
      auto P = o.random_class(), Q = o.random_class();
      return std::tuple{o.kappa_of(P), o.kappa_of(Q), o.kappa_of(add(o.wm(), P, Q)),
                        o.kappa_of(add(o.wm(), P, negate(o.wm(), Q)))};
    });
    auto B = eval_bqf(c.field(), *fs.bqf, x, y);
    bad += !proportional_arrays(flatten<F>(B), flatten<F>(bqf_target<F>(w, z)));
  }
  return bad;
}

const CurveModel<PrimeField>& cubic_h_curve() {
  static const auto c = curve(gf1009, {-1, 5, 7, 1, 2, 1, 0}, {2, 2, 4, 3});
  return c;
}

const FormulaSet<PrimeField>& cubic_h_formulas() {
  static const auto fs = synthesize(cubic_h_curve(), SynthesisRequest{true, true, true, 77, {}});
  return fs;
}

const CurveModel<BinaryField>& char2_curve() {
  static const auto c = binary_curve(gf2_16, {9, 3, 4, 5, 1, 7, 2}, {0, 1, 1, 1});
  return c;
}

const FormulaSet<BinaryField>& char2_formulas() {
  static const auto fs = synthesize(char2_curve(), SynthesisRequest{true, true, true, 78, {}});
  return fs;
}

}  // namespace

TEST(Delta, FixesTheZeroClass) {
  const auto& fs = cubic_h_formulas();
  const auto z = kummer_zero(gf1009);
  EXPECT_TRUE(proportional<PrimeField>(eval_delta(gf1009, *fs.delta, z), z));
}

TEST(Delta, FreshSamplesOddChar) { EXPECT_EQ(delta_failures(cubic_h_curve(), cubic_h_formulas(), 1001, 500), 0u); }

TEST(Delta, FreshSamplesCharTwo) { EXPECT_EQ(delta_failures(char2_curve(), char2_formulas(), 1002, 500), 0u); }

TEST(Delta, ZeroHAgreesThroughTau) {
  auto c = curve(gf1009, {3, 1, 0, 4, 0, 1, 0}, {0, 0, 0, 0});
  SynthesisRequest req{true, false, false, 5, {}};
  auto fs = synthesize(c, req);
  auto fss = synthesize(simplified_model(c).first, req);
  auto rep = crosscheck_tau_delta(c, fs, fss, 6, 500);
  EXPECT_EQ(rep.failures, 0u);
  EXPECT_EQ(rep.checked, 500u);
}

TEST(Bqf, IdentityAnchor) {
  const auto& c = cubic_h_curve();
  const auto& fs = cubic_h_formulas();
  Oracle<PrimeField> o(c, 1003);
  for (int i = 0; i < 100; ++i) {
    auto x = detail::retry_unsupported([&] { return o.kappa_of(o.random_class()); });
    auto B = eval_bqf(gf1009, *fs.bqf, x, kummer_zero(gf1009));
    EXPECT_TRUE(proportional_arrays(flatten<PrimeField>(B), flatten<PrimeField>(bqf_target<PrimeField>(x, x))));
  }
}

TEST(Bqf, FreshSamplesOddChar) { EXPECT_EQ(bqf_failures(cubic_h_curve(), cubic_h_formulas(), 1004, 500), 0u); }

TEST(Bqf, FreshSamplesCharTwo) { EXPECT_EQ(bqf_failures(char2_curve(), char2_formulas(), 1005, 500), 0u); }

TEST(Bqf, SymmetricInItsArguments) {
  for (const auto& b : *cubic_h_formulas().bqf) EXPECT_EQ(swap_biquadratic_arguments(b), b);
  for (const auto& b : *char2_formulas().bqf) EXPECT_EQ(swap_biquadratic_arguments(b), b);
}

TEST(TranslationSynthesis, OddChar) {
  const auto& c = cubic_h_curve();
  const auto& fs = cubic_h_formulas();
  const auto classes = two_torsion_classes(c);
  ASSERT_EQ(fs.w.size(), classes.size());
  ASSERT_FALSE(classes.empty());
  Oracle<PrimeField> o(c, 1006);
  for (size_t k = 0; k < classes.size(); ++k) {
    const auto& W = fs.w[k].w;
    EXPECT_EQ(fs.w[k].id, classes[k].id);
    EXPECT_TRUE(squares_to_scalar(W));
    EXPECT_TRUE(proportional<PrimeField>(apply_matrix(W, kummer_zero(gf1009)), classes[k].kq));
    auto DQ = from_point_pair(o.wm(), classes[k].pair);
    for (int i = 0; i < 500; ++i) {
      auto [x, t] = detail::retry_unsupported([&] {
        auto D = o.random_class();
        return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, DQ))};
      });
      EXPECT_TRUE(proportional<PrimeField>(apply_matrix(W, x), t));
    }
  }
}

TEST(Extension, DegreeChoice) {
  EXPECT_EQ(synthesis_extension_degree(1), 16);
  EXPECT_EQ(synthesis_extension_degree(3), 18);
  EXPECT_EQ(synthesis_extension_degree(5), 20);
  EXPECT_EQ(synthesis_extension_degree(16), 16);
}

TEST(Extension, GF2CoefficientsDescendToBits) {
  const BinaryField gf2(0x3);
  auto c = binary_curve(gf2, {0, 1, 0, 1, 0, 1, 0}, {0, 1, 0, 0});
  SynthesisRequest req{true, false, false, 9, {80, 130, 24}};
  auto fs = synthesize(c, req);
  EXPECT_EQ(fs.field, gf2);
  for (const auto& d : *fs.delta)
    for (const auto& e : d) EXPECT_LE(e.value(), 1u);

  auto emb = extension_for(gf2);
  auto big = CurveModel<BinaryField>(emb.big, emb.up(c.f()), emb.up(c.h()));
  FormulaSet<BinaryField> lifted = fs;
  lifted.field = emb.big;
  for (auto& d : *lifted.delta)
    for (auto& e : d) e = emb.up(e);
  EXPECT_EQ(delta_failures(big, lifted, 10, 200), 0u);
}

TEST(Extension, PrimeFieldDescentIsIdentity) {
  EXPECT_EQ(descend_coefficients(cubic_h_formulas(), gf1009), cubic_h_formulas());
}

TEST(Synthesis, SmallPrimeFieldsAreRejected) {
  const PrimeField gf101(101);
  try {
    (void)synthesize(curve(gf101, {3, 1, 0, 4, 0, 1, 0}, {0, 0, 0, 0}), SynthesisRequest{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedField);
  }
}

TEST(Synthesis, Deterministic) {
  auto c = curve(gf1009, {3, 1, 0, 4, 0, 1, 0}, {1, 0, 0, 1});
  SynthesisRequest req{true, true, true, 42, {}};
  EXPECT_EQ(serialize(synthesize(c, req)), serialize(synthesize(c, req)));
}

TEST(Synthesis, Rationals) {
  const RationalField q;
  auto c = curve(q, {1, -1, 0, 2, -3, 1, 0}, {0, 1, 1, 0});
  auto fs = synthesize(c, SynthesisRequest{true, true, false, 3, {}});
  Oracle<RationalField> o(c, 4);
  for (int i = 0; i < 10; ++i) {
    auto [x, t] = doubling_sample(o);
    EXPECT_TRUE(proportional<RationalField>(eval_delta(q, *fs.delta, x), t));
  }
  auto P = o.random_class(), Q = o.random_class();
  auto B = eval_bqf(q, *fs.bqf, o.kappa_of(P), o.kappa_of(Q));
  auto T = bqf_target<RationalField>(o.kappa_of(add(o.wm(), P, Q)), o.kappa_of(add(o.wm(), P, negate(o.wm(), Q))));
  EXPECT_TRUE(proportional_arrays(flatten<RationalField>(B), flatten<RationalField>(T)));
}

TEST(CrossCheck, ZeroH) {
  auto c = curve(gf1009, {3, 1, 0, 4, 0, 1, 0}, {0, 0, 0, 0});
  SynthesisRequest req{true, true, false, 11, {}};
  auto fs = synthesize(c, req);
  auto fss = synthesize(simplified_model(c).first, req);
  auto rep = crosscheck_b_conversion(c, fs, fss, 12, 100);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.printed_b44_failures, 0u);
}

TEST(CrossCheck, CubicH) {
  const auto& c = cubic_h_curve();
  SynthesisRequest req{true, true, false, 13, {}};
  auto fss = synthesize(simplified_model(c).first, req);
  auto ra = crosscheck_tau_delta(c, cubic_h_formulas(), fss, 14, 200);
  auto rb = crosscheck_b_conversion(c, cubic_h_formulas(), fss, 15, 200);
  EXPECT_EQ(ra.failures, 0u);
  EXPECT_TRUE(rb.ok);
  EXPECT_EQ(rb.block3_failures, 0u);
  EXPECT_FALSE(rb.cfit.empty());
}

TEST(Kfs, RoundTrip) {
  for (const auto* fs : {&cubic_h_formulas()}) {
    auto text = serialize(*fs);
    EXPECT_EQ(kfs_field_spec(text), "prime:p=1009");
    auto back = deserialize(gf1009, text, &cubic_h_curve());
    EXPECT_EQ(back, *fs);
    EXPECT_EQ(serialize(back), text);
  }
  auto text = serialize(char2_formulas());
  EXPECT_EQ(deserialize(gf2_16, text, &char2_curve()), char2_formulas());
}

TEST(Kfs, FingerprintMismatchIsRejected) {
  auto other = curve(gf1009, {-1, 5, 7, 1, 2, 1, 0}, {2, 2, 4, 4});
  try {
    (void)deserialize(gf1009, serialize(cubic_h_formulas()), &other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FingerprintMismatch);
  }
}

TEST(Kfs, TamperedFileIsRejected) {
  auto text = serialize(cubic_h_formulas());
  auto pos = text.find("delta1");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_THROW(deserialize(gf1009, text.substr(0, pos + 30), &cubic_h_curve()), Error);
  auto bad = text;
  bad.replace(bad.find("fingerprint ") + 12, 4, "zzzz");
  EXPECT_THROW(deserialize(gf1009, bad, &cubic_h_curve()), Error);
  EXPECT_THROW(deserialize(gf1009, std::string("KFS0\n")), Error);
}
