#pragma once

// Pseudo-arithmetic on the Kummer surface: doubling through delta,
// differential addition through B, the Montgomery ladder, translation by
// 2-torsion and operation-count benchmarks.

#include <chrono>

#include "g2k/synthesis.hpp"

namespace g2k {

template <FieldType F>
struct LadderContext {
  CurveModel<F> curve;
  KummerQuartic<F> quartic;
  FormulaSet<F> formulas;
  std::vector<typename FormulaSet<F>::Translation> translations;
  bool cross_check = false;
};

/// Binds a formula set to its curve. Characteristic-2 contexts also carry
/// the printed W matrix of every 2-torsion class with usable data.
template <FieldType F>
LadderContext<F> make_ladder_context(const CurveModel<F>& c, const FormulaSet<F>& fs) {
  if (curve_fingerprint(c) != curve_fingerprint(fs.field, fs.f, fs.h))
    fail(ErrorCode::FingerprintMismatch, "formula set belongs to a different curve");
  LadderContext<F> ctx{c, quartic_from_curve(c), fs, fs.w, false};
  if constexpr (FiniteFieldType<F>) {
    if (c.field().characteristic() == 2 && ctx.translations.empty())
      for (const auto& q : two_torsion_classes(c))
        if (q.data) ctx.translations.push_back({q.id, q.kq, w_matrix_char2(c, *q.data)});
  }
  return ctx;
}

template <FieldType F>
KummerPoint<F> xdbl(const LadderContext<F>& ctx, const KummerPoint<F>& x, OpCounter* ops = nullptr) {
  if (!ctx.formulas.delta) fail(ErrorCode::FormulaSetMissing, "no duplication formulas");
  auto out = eval_delta(ctx.curve.field(), *ctx.formulas.delta, x, ops);
  if (is_zero_quadruple<F>(out)) fail(ErrorCode::ZeroOutput, "delta vanished at " + format_kummer(ctx.curve.field(), x));
  return out;
}

namespace detail {

template <FieldType F>
KummerPoint<F> recover_w(const std::array<std::array<typename F::Element, 4>, 4>& B, const KummerPoint<F>& z,
                         size_t j, OpCounter* ops) {
  KummerPoint<F> w;
  w[j] = B[j][j] * z[j];
  for (size_t i = 0; i < 4; ++i)
    if (i != j) w[i] = B[i][j] * z[j] - B[j][j] * z[i];
  if (ops) {
    ops->mul += 7;
    ops->add += 3;
  }
  return w;
}

}  // namespace detail

/// kappa(P+Q) from x = kappa(P), y = kappa(Q), z = kappa(P-Q).
template <FieldType F>
KummerPoint<F> xadd(const LadderContext<F>& ctx, const KummerPoint<F>& x, const KummerPoint<F>& y,
                    const KummerPoint<F>& z, OpCounter* ops = nullptr) {
  if (!ctx.formulas.bqf) fail(ErrorCode::FormulaSetMissing, "no biquadratic forms");
  const auto B = eval_bqf(ctx.curve.field(), *ctx.formulas.bqf, x, y, ops);
  std::optional<KummerPoint<F>> first;
  for (size_t j = 0; j < 4; ++j) {
    if (z[j].is_zero()) continue;
    auto w = detail::recover_w<F>(B, z, j, first ? nullptr : ops);
    if (is_zero_quadruple<F>(w)) continue;
    if (!first) {
      first = w;
      if (!ctx.cross_check) break;
    } else if (!proportional<F>(*first, w)) {
      fail(ErrorCode::CrossCheckFailed, "pivots disagree in differential addition");
    }
  }
  if (!first) fail(ErrorCode::AllPivotsFailed, "every pivot gave the zero quadruple");
  return *first;
}

/// kappa(nP) from x = kappa(P).
template <FieldType F>
KummerPoint<F> ladder(const LadderContext<F>& ctx, const KummerPoint<F>& x, const mpz_class& n,
                      OpCounter* ops = nullptr) {
  if (n < 0) fail(ErrorCode::ParseError, "negative scalar");
  KummerPoint<F> R0 = kummer_zero(ctx.curve.field()), R1 = x;
  if (n == 0) return R0;
  const size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    if (mpz_tstbit(n.get_mpz_t(), i)) {
      R0 = xadd(ctx, R0, R1, x, ops);
      R1 = xdbl(ctx, R1, ops);
    } else {
      R1 = xadd(ctx, R0, R1, x, ops);
      R0 = xdbl(ctx, R0, ops);
    }
  }
  return R0;
}

template <FieldType F>
KummerPoint<F> ladder(const LadderContext<F>& ctx, const KummerPoint<F>& x, uint64_t n, OpCounter* ops = nullptr) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof n, 0, 0, &n);
  return ladder(ctx, x, z, ops);
}

/// W * k for the 2-torsion class `id`.
template <FieldType F>
KummerPoint<F> translate(const LadderContext<F>& ctx, const std::string& id, const KummerPoint<F>& k) {
  for (const auto& t : ctx.translations)
    if (t.id == id) return apply_matrix(t.w, k);
  fail(ErrorCode::FormulaSetMissing, "no translation matrix for " + id);
}

/// Surface point with random k1, k2, k3, without reference to the Jacobian.
template <FieldType F>
KummerPoint<F> random_surface_point(const KummerQuartic<F>& K, SeededRng& rng, int max_tries = 10000) {
  const F& fld = K.field;
  for (int t = 0; t < max_tries; ++t) {
    const auto k1 = fld.random(rng), k2 = fld.random(rng), k3 = fld.random(rng);
    auto pieces = K.pieces(k1, k2, k3);
    if (pieces[2].is_zero()) continue;
    auto inv = pieces[2].inv();
    auto sol = fld.quad_solve(pieces[1] * inv, -(pieces[0] * inv));
    if (sol.empty()) continue;
    return {k1, k2, k3, sol[rng.below(sol.size())]};
  }
  fail(ErrorCode::ExhaustedRetries, "no random surface point found");
}

struct BenchReport {
  std::string field;
  OpCounter xdbl, xadd, step, total;
  size_t bits = 0;
  size_t trials = 0;
  double seconds = 0;
  double seconds_per_bit = 0;
  bool counts_stable = true;
};

/// Deterministic op counts of one xdbl, one xadd and a full ladder over
/// `bits`-bit scalars, plus wall time.
template <FieldType F>
BenchReport bench(const LadderContext<F>& ctx, size_t trials, size_t bits, uint64_t seed) {
  BenchReport r;
  r.field = ctx.curve.field().spec();
  r.bits = bits;
  r.trials = trials;
  SeededRng rng(seed);
  const auto x = random_surface_point(ctx.quartic, rng);
  const auto y = random_surface_point(ctx.quartic, rng);
  (void)xdbl(ctx, x, &r.xdbl);
  (void)xadd(ctx, x, y, x, &r.xadd);
  r.step = r.xdbl;
  r.step += r.xadd;
  std::optional<OpCounter> ref;
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t t = 0; t < trials; ++t) {
    mpz_class n = 1;
    for (size_t i = 1; i < bits; ++i) n = 2 * n + static_cast<long>(rng.below(2));
    OpCounter ops;
    (void)ladder(ctx, x, n, &ops);
    if (ref && !(*ref == ops)) r.counts_stable = false;
    if (!ref) ref = ops;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.seconds_per_bit = trials ? r.seconds / static_cast<double>(trials * bits) : 0;
  if (ref) r.total = *ref;
  return r;
}

}  // namespace g2k
