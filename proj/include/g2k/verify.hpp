#pragma once

// Executable forms of the duplication and biquadratic-form lemmas
// (exhaustive over tiny binary fields) and the randomized identity suites
// over a corpus of curves.

#include <chrono>
#include <functional>

#include "g2k/ladder.hpp"
#include "json.hpp"

namespace g2k {

// ---------------------------------------------------------------------------
// Lemma searches

enum class LemmaKind { Delta, B };

inline std::string lemma_name(LemmaKind k) { return k == LemmaKind::Delta ? "delta" : "b"; }

struct LemmaReport {
  std::string lemma;
  char normal_case = 'a';
  std::string field;
  std::string coeffs;  // f1,f3,f5
  uint64_t search_space = 0;
  uint64_t surface_points = 0;
  std::vector<std::string> counterexamples;
  std::string detail;
  double seconds = 0;
  bool passed() const { return counterexamples.empty(); }
};

/// Sample counts for formula synthesis on lemma curves; the kernel-dimension
/// checks keep the result exact.
inline SynthesisOptions lemma_synthesis_options() { return {80, 130, 24}; }

namespace detail {

template <class Fn>
void for_each_quadruple(const BinaryField& fld, Fn&& fn) {
  const uint64_t q = fld.order();
  for (uint64_t a = 0; a < q; ++a)
    for (uint64_t b = 0; b < q; ++b)
      for (uint64_t c = 0; c < q; ++c)
        for (uint64_t d = 0; d < q; ++d)
          fn(KummerPoint<BinaryField>{fld.element_at(a), fld.element_at(b), fld.element_at(c), fld.element_at(d)});
}

inline std::string format_coeff_triple(const BinaryField& fld, const BinaryElement& f1, const BinaryElement& f3,
                                       const BinaryElement& f5) {
  return fld.format(f1) + "," + fld.format(f3) + "," + fld.format(f5);
}

// Re-checks the synthesized forms of a lemma curve against the oracle over
// the synthesis extension; used to say which identity a counterexample
// indicts.
inline std::string recheck_over_extension(const CurveModel<BinaryField>& c, const FormulaSet<BinaryField>& fs,
                                          uint64_t seed) {
  BinaryEmbedding emb = extension_for(c.field());
  CurveModel<BinaryField> big(emb.big, emb.up(c.f()), emb.up(c.h()));
  Oracle<BinaryField> o(big, seed);
  size_t bad_delta = 0, bad_b = 0;
  auto up = [&](const std::vector<BinaryElement>& v) {
    std::vector<BinaryElement> r;
    for (const auto& e : v) r.push_back(emb.up(e));
    return r;
  };
  std::array<std::vector<BinaryElement>, 4> d;
  std::array<std::vector<BinaryElement>, 10> b;
  if (fs.delta)
    for (size_t i = 0; i < 4; ++i) d[i] = up((*fs.delta)[i]);
  if (fs.bqf)
    for (size_t i = 0; i < 10; ++i) b[i] = up((*fs.bqf)[i]);
  for (int s = 0; s < 100; ++s) {
    auto P = o.random_class(), Q = o.random_class();
    auto x = o.kappa_of(P), y = o.kappa_of(Q);
    if (fs.delta && !proportional<BinaryField>(eval_delta(emb.big, d, x), o.kappa_of(add(o.wm(), P, P)))) ++bad_delta;
    if (fs.bqf) {
      auto w = o.kappa_of(add(o.wm(), P, Q)), z = o.kappa_of(add(o.wm(), P, negate(o.wm(), Q)));
      if (!proportional_arrays(flatten<BinaryField>(eval_bqf(emb.big, b, x, y)), flatten<BinaryField>(bqf_target<BinaryField>(w, z))))
        ++bad_b;
    }
  }
  return "oracle re-check over " + emb.big.spec() + ": delta failures " + std::to_string(bad_delta) +
         "/100, B failures " + std::to_string(bad_b) + "/100";
}

}  // namespace detail

/// Checks that delta vanishes on no nonzero surface quadruple over `fld`.
/// `fs` must hold delta for the normal-form curve; pass nullptr to synthesize.
inline LemmaReport lemma_delta_search(NormalCase k, const BinaryField& fld, const BinaryElement& f1,
                                      const BinaryElement& f3, const BinaryElement& f5, uint64_t seed,
                                      const FormulaSet<BinaryField>* fs = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!normal_form_condition<BinaryField>(k, f1, f3, f5))
    fail(ErrorCode::SingularCurve, std::string("normal-form condition for case (") + case_letter(k) + ") fails");
  const auto c = normal_form_model(fld, k, f1, f3, f5);
  LemmaReport r{"delta", case_letter(k), fld.spec(), detail::format_coeff_triple(fld, f1, f3, f5), 0, 0, {}, "", 0};
  std::optional<FormulaSet<BinaryField>> own;
  if (!fs) {
    SynthesisRequest req{true, false, false, seed, lemma_synthesis_options()};
    own = synthesize(c, req);
    fs = &*own;
  }
  const auto K = quartic_from_curve(c);
  detail::for_each_quadruple(fld, [&](const KummerPoint<BinaryField>& x) {
    ++r.search_space;
    if (K(x) != fld.zero()) return;
    ++r.surface_points;
    if (is_zero_quadruple<BinaryField>(x)) return;
    if (is_zero_quadruple<BinaryField>(eval_delta(fld, *fs->delta, x))) r.counterexamples.push_back(format_kummer(fld, x));
  });
  if (!r.passed()) r.detail = detail::recheck_over_extension(c, *fs, seed + 1);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Checks that all B_ij(x, y) vanish only if x = 0 or y = 0, over all pairs
/// of surface quadruples in fld^4.
inline LemmaReport lemma_b_search(NormalCase k, const BinaryField& fld, const BinaryElement& f1,
                                  const BinaryElement& f3, const BinaryElement& f5, uint64_t seed,
                                  const FormulaSet<BinaryField>* fs = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!normal_form_condition<BinaryField>(k, f1, f3, f5))
    fail(ErrorCode::SingularCurve, std::string("normal-form condition for case (") + case_letter(k) + ") fails");
  const auto c = normal_form_model(fld, k, f1, f3, f5);
  LemmaReport r{"b", case_letter(k), fld.spec(), detail::format_coeff_triple(fld, f1, f3, f5), 0, 0, {}, "", 0};
  std::optional<FormulaSet<BinaryField>> own;
  if (!fs) {
    SynthesisRequest req{false, true, false, seed, lemma_synthesis_options()};
    own = synthesize(c, req);
    fs = &*own;
  }
  const auto K = quartic_from_curve(c);
  std::vector<KummerPoint<BinaryField>> pts;
  detail::for_each_quadruple(fld, [&](const KummerPoint<BinaryField>& x) {
    if (K(x) == fld.zero() && !is_zero_quadruple<BinaryField>(x)) pts.push_back(x);
  });
  r.surface_points = pts.size() + 1;
  const uint64_t n = pts.size() + 1;
  r.search_space = n * n;
  for (const auto& x : pts)
    for (const auto& y : pts) {
      auto B = eval_bqf(fld, *fs->bqf, x, y);
      bool all_zero = true;
      for (const auto& row : B)
        for (const auto& e : row) all_zero = all_zero && e.is_zero();
      if (all_zero) r.counterexamples.push_back(format_kummer(fld, x) + " ; " + format_kummer(fld, y));
    }
  if (!r.passed()) r.detail = detail::recheck_over_extension(c, *fs, seed + 1);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Every coefficient triple (f1, f3, f5) over fld passing the case condition.
inline std::vector<std::array<BinaryElement, 3>> valid_normal_form_coeffs(NormalCase k, const BinaryField& fld) {
  std::vector<std::array<BinaryElement, 3>> out;
  const uint64_t q = fld.order();
  for (uint64_t a = 0; a < q; ++a)
    for (uint64_t b = 0; b < q; ++b)
      for (uint64_t c = 0; c < q; ++c) {
        auto f1 = fld.element_at(a), f3 = fld.element_at(b), f5 = fld.element_at(c);
        if (normal_form_condition<BinaryField>(k, f1, f3, f5)) out.push_back({f1, f3, f5});
      }
  return out;
}

/// Runs the selected lemmas on every valid normal-form curve of case `k`
/// over `fld`, synthesizing each curve's formulas once.
inline std::vector<LemmaReport> lemma_sweep(NormalCase k, const BinaryField& fld, bool delta, bool b, uint64_t seed) {
  std::vector<LemmaReport> out;
  for (const auto& [f1, f3, f5] : valid_normal_form_coeffs(k, fld)) {
    const auto c = normal_form_model(fld, k, f1, f3, f5);
    SynthesisRequest req{delta, b, false, seed, lemma_synthesis_options()};
    const auto fs = synthesize(c, req);
    if (delta) out.push_back(lemma_delta_search(k, fld, f1, f3, f5, seed, &fs));
    if (b) out.push_back(lemma_b_search(k, fld, f1, f3, f5, seed, &fs));
  }
  return out;
}

inline std::string format_lemma_report(const LemmaReport& r) {
  std::ostringstream os;
  os << "lemma " << r.lemma << " case (" << r.normal_case << ") field " << r.field << " coeffs " << r.coeffs
     << " searched " << r.search_space << " surface " << r.surface_points << " counterexamples "
     << r.counterexamples.size();
  for (const auto& w : r.counterexamples) os << "\n  witness " << w;
  if (!r.detail.empty()) os << "\n  " << r.detail;
  return os.str();
}

inline nlohmann::json lemma_report_json(const LemmaReport& r) {
  return {{"lemma", r.lemma},
          {"case", std::string(1, r.normal_case)},
          {"field", r.field},
          {"coeffs", r.coeffs},
          {"search_space", r.search_space},
          {"surface_points", r.surface_points},
          {"counterexamples", r.counterexamples},
          {"detail", r.detail},
          {"seconds", r.seconds},
          {"passed", r.passed()}};
}

// ---------------------------------------------------------------------------
// Corpus

struct NamedCurve {
  std::string name;
  CurveText text;
};

/// Blocks introduced by `curve <name>` followed by field, f and h lines.
inline std::vector<NamedCurve> parse_corpus(std::istream& in) {
  std::vector<NamedCurve> out;
  std::string line, name, block;
  auto flush = [&] {
    if (name.empty()) return;
    std::istringstream bs(block);
    out.push_back({name, parse_curve_text(bs)});
    block.clear();
  };
  while (std::getline(in, line)) {
    if (line.rfind("curve ", 0) == 0) {
      flush();
      name = line.substr(6);
    } else if (!line.empty() && line[0] != '#') {
      if (name.empty()) fail(ErrorCode::ParseError, "corpus line before the first 'curve' header");
      block += line + "\n";
    }
  }
  flush();
  if (out.empty()) fail(ErrorCode::ParseError, "empty corpus");
  return out;
}

inline std::vector<NamedCurve> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open corpus file " + path);
  return parse_corpus(in);
}

inline const char* default_corpus_text() {
  return R"(curve p60-h0
field prime:p=1152921504606846883
f 7,-2,0,3,0,1,0
h 0,0,0,0

curve p60-cubic-h
field prime:p=1152921504606846883
f -1,5,7,1,2,1,4
h 2,2,4,3

curve p60-linear-h
field prime:p=1152921504606846883
f 0,1,-3,2,5,-1,0
h 0,1,0,0

curve p1009-h0
field prime:p=1009
f 3,1,0,0,0,1,0
h 0,0,0,0

curve p1009-cubic-h
field prime:p=1009
f -1,5,7,1,2,1,0
h 2,2,4,3

curve p1009-sextic
field prime:p=1009
f 252,3,1,4,1,2,5
h 1,0,1,0

curve b16-case-a
field binary:m=16,mod=0x1002b
f 0x0,0x3,0x0,0x5,0x0,0x7,0x0
h 0x1,0x0,0x0,0x0

curve b16-case-b
field binary:m=16,mod=0x1002b
f 0x0,0x3,0x0,0x5,0x0,0x7,0x0
h 0x0,0x1,0x0,0x0

curve b16-case-c
field binary:m=16,mod=0x1002b
f 0x0,0x3,0x0,0x5,0x0,0x9,0x0
h 0x0,0x1,0x1,0x0

curve b16-cubic-h
field binary:m=16,mod=0x1002b
f 0x9,0x3,0x4,0x5,0x1,0x7,0x2
h 0x0,0x1,0x1,0x1

curve b16-sextic
field binary:m=16,mod=0x1002b
f 0x9,0x3,0x4,0x5,0x1,0x7,0x2
h 0x0,0x3,0x1,0x0

curve q-small
field rational
f 1,-1,0,2,-3,1,0
h 0,1,1,0
)";
}

inline std::vector<NamedCurve> default_corpus() {
  std::istringstream is(default_corpus_text());
  return parse_corpus(is);
}

// ---------------------------------------------------------------------------
// Proposition suites

struct SuiteOptions {
  size_t surface_samples = 1000;
  size_t delta_samples = 500;
  size_t bqf_samples = 500;
  size_t translation_samples = 1000;
  size_t crosscheck_samples = 200;
  size_t chain_pairs = 100;
  size_t ladder_scalars = 20;
  bool crosscheck = true;
  SynthesisOptions synthesis;
};

struct SuiteResult {
  std::string name;
  size_t checked = 0;
  size_t failures = 0;
  bool skipped = false;
  std::string detail;
  double seconds = 0;
  bool passed() const { return skipped || failures == 0; }
};

struct CurveReport {
  std::string name;
  std::string field;
  bool skipped = false;
  std::string skip_reason;
  std::vector<SuiteResult> suites;
  std::string kfs;
  double seconds = 0;
  bool passed() const {
    for (const auto& s : suites)
      if (!s.passed()) return false;
    return true;
  }
  const SuiteResult* find(const std::string& n) const {
    for (const auto& s : suites)
      if (s.name == n) return &s;
    return nullptr;
  }
};

struct SuiteReport {
  uint64_t seed = 0;
  std::vector<CurveReport> curves;
  bool passed() const {
    for (const auto& c : curves)
      if (!c.passed()) return false;
    return true;
  }
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

template <FieldType F>
SuiteResult surface_suite(const CurveModel<F>& c, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"surface", 0, 0, false, "", 0};
  Oracle<F> o(c, seed);
  const auto K = quartic_from_curve(c);
  for (size_t i = 0; i < n; ++i) {
    auto k = retry_unsupported([&] { return o.kappa_of(o.random_class()); });
    ++r.checked;
    if (!on_surface(K, k)) ++r.failures;
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
SuiteResult delta_suite(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"delta", 0, 0, false, "", 0};
  Oracle<F> o(c, seed);
  for (size_t i = 0; i < n; ++i) {
    auto [x, t] = retry_unsupported([&] {
      auto D = o.random_class();
      return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, D))};
    });
    ++r.checked;
    if (!proportional<F>(eval_delta(c.field(), *fs.delta, x), t)) ++r.failures;
  }
  if (!proportional<F>(eval_delta(c.field(), *fs.delta, kummer_zero(c.field())), kummer_zero(c.field()))) {
    ++r.failures;
    r.detail = "delta(0,0,0,1) is not (0,0,0,1)";
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
SuiteResult bqf_suite(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"bqf", 0, 0, false, "", 0};
  Oracle<F> o(c, seed);
  const F& fld = c.field();
  for (size_t i = 0; i < n; ++i) {
    auto [x, y, w, z] = retry_unsupported([&] {
      auto P = o.random_class(), Q = o.random_class();
      return std::tuple{o.kappa_of(P), o.kappa_of(Q), o.kappa_of(add(o.wm(), P, Q)),
                        o.kappa_of(add(o.wm(), P, negate(o.wm(), Q)))};
    });
    ++r.checked;
    if (!proportional_arrays(flatten<F>(eval_bqf(fld, *fs.bqf, x, y)), flatten<F>(bqf_target<F>(w, z)))) ++r.failures;
  }
  size_t asym = 0;
  for (size_t k = 0; k < 10; ++k)
    if (swap_biquadratic_arguments((*fs.bqf)[k]) != (*fs.bqf)[k]) ++asym;
  if (asym) {
    r.failures += asym;
    r.detail = std::to_string(asym) + " forms not symmetric in their arguments";
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
SuiteResult translation_suite(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"translation", 0, 0, false, "", 0};
  if constexpr (!FiniteFieldType<F>) {
    r.skipped = true;
    r.detail = "no translation matrices over Q";
  } else {
    const bool char2 = c.field().characteristic() == 2;
    Oracle<F> o(c, seed);
    const auto K = quartic_from_curve(c);
    std::vector<std::pair<TwoTorsionClass<F>, Matrix<F>>> todo;
    size_t no_data = 0;
    const auto classes = two_torsion_classes(c);
    for (const auto& q : classes) {
      if (char2) {
        if (q.data)
          todo.push_back({q, w_matrix_char2(c, *q.data)});
        else
          ++no_data;
      } else {
        for (const auto& t : fs.w)
          if (t.id == q.id) todo.push_back({q, t.w});
      }
    }
    std::ostringstream det;
    det << classes.size() << " classes, " << todo.size() << " matrices";
    if (no_data) det << ", " << no_data << " skipped (k2 = 0)";
    if (!char2 && todo.size() != classes.size()) {
      ++r.failures;
      det << ", synthesized matrices missing";
    }
    for (const auto& [q, W] : todo) {
      if (!squares_to_scalar(W)) {
        ++r.failures;
        det << ", W^2 not scalar for " << q.id;
      }
      const auto DQ = from_point_pair(o.wm(), q.pair);
      if (!proportional<F>(apply_matrix(W, kummer_zero(c.field())), q.kq)) {
        ++r.failures;
        det << ", W(0) != Q for " << q.id;
      }
      for (size_t i = 0; i < n; ++i) {
        auto [x, t] = retry_unsupported([&] {
          auto D = o.random_class();
          return std::pair{o.kappa_of(D), o.kappa_of(add(o.wm(), D, DQ))};
        });
        auto y = apply_matrix(W, x);
        ++r.checked;
        if (!proportional<F>(y, t) || !on_surface(K, y)) ++r.failures;
      }
    }
    if (todo.empty()) r.skipped = true;
    r.detail = det.str();
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
std::vector<SuiteResult> crosscheck_suites(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed,
                                           const SuiteOptions& opt) {
  Stopwatch sw;
  SuiteResult a{"tau-delta", 0, 0, false, "", 0}, b{"b-conversion", 0, 0, false, "", 0};
  bool applicable = true;
  if constexpr (!FiniteFieldType<F>) applicable = false;
  else applicable = c.field().characteristic() != 2;
  if (!applicable || !opt.crosscheck) {
    a.skipped = b.skipped = true;
    a.detail = b.detail = "odd prime fields only";
    return {a, b};
  }
  const auto simpl = simplified_model(c).first;
  SynthesisRequest req{true, true, false, seed + 7, opt.synthesis};
  const auto fss = synthesize(simpl, req);
  auto ra = crosscheck_tau_delta(c, fs, fss, seed + 8, opt.crosscheck_samples);
  auto rb = crosscheck_b_conversion(c, fs, fss, seed + 9, opt.crosscheck_samples);
  a.checked = ra.checked;
  a.failures = ra.failures;
  b.checked = rb.checked;
  b.failures = rb.failures + rb.block3_failures + (rb.cfit.empty() ? 1 : 0);
  b.detail = "cfit " + rb.cfit + ", upper block failures " + std::to_string(rb.block3_failures) +
             ", literal printed B44 failures " + std::to_string(rb.printed_b44_failures) + "/" +
             std::to_string(rb.checked);
  a.seconds = b.seconds = sw.seconds();
  return {a, b};
}

template <FieldType F>
SuiteResult chain_suite(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"chain", 0, 0, false, "", 0};
  if constexpr (!FiniteFieldType<F>) {
    r.skipped = true;
    r.detail = "finite fields only";
  } else {
    auto ctx = make_ladder_context(c, fs);
    SeededRng rng(seed);
    const auto x = random_surface_point(ctx.quartic, rng);
    for (size_t i = 0; i < n; ++i) {
      const uint64_t m = rng.below(1ULL << 20), k = rng.below(1ULL << 20);
      auto lhs = ladder(ctx, x, m + k);
      auto rhs = xadd(ctx, ladder(ctx, x, m), ladder(ctx, x, k), ladder(ctx, x, m > k ? m - k : k - m));
      ++r.checked;
      if (!proportional<F>(lhs, rhs)) ++r.failures;
    }
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
SuiteResult ladder_suite(const CurveModel<F>& c, const FormulaSet<F>& fs, uint64_t seed, size_t n) {
  Stopwatch sw;
  SuiteResult r{"ladder", 0, 0, false, "", 0};
  if constexpr (!FiniteFieldType<F>) {
    r.skipped = true;
    r.detail = "finite fields only";
  } else {
    auto ctx = make_ladder_context(c, fs);
    ctx.cross_check = true;
    Oracle<F> o(c, seed);
    for (size_t i = 0; i < n; ++i) {
      const uint64_t k = o.rng().below(1ULL << 40);
      auto [x, t] = retry_unsupported([&] {
        auto D = o.random_class();
        return std::pair{o.kappa_of(D), o.kappa_of(scalar_mul(o.wm(), D, k))};
      });
      ++r.checked;
      if (!proportional<F>(ladder(ctx, x, k), t)) ++r.failures;
    }
  }
  r.seconds = sw.seconds();
  return r;
}

template <FieldType F>
SuiteResult roundtrip_suite(const FormulaSet<F>& fs, const CurveModel<F>& c) {
  SuiteResult r{"roundtrip", 1, 0, false, "", 0};
  const std::string text = serialize(fs);
  const auto back = deserialize(c.field(), text, &c);
  if (!(back == fs) || serialize(back) != text) r.failures = 1;
  return r;
}

template <FieldType F>
CurveReport run_curve(const std::string& name, const CurveModel<F>& c, uint64_t seed, const SuiteOptions& opt) {
  Stopwatch sw;
  CurveReport rep;
  rep.name = name;
  rep.field = c.field().spec();
  const auto v = validate(c);
  if (!v.valid) {
    rep.skipped = true;
    rep.skip_reason = v.reason;
    return rep;
  }
  try {
    (void)working_model(c);
  } catch (const Error& e) {
    rep.skipped = true;
    rep.skip_reason = e.what();
    return rep;
  }
  SeededRng master(seed);
  rep.suites.push_back(surface_suite(c, master.fork(1).next(), opt.surface_samples));
  SynthesisRequest req{true, true, true, master.fork(2).next(), opt.synthesis};
  Stopwatch synth_sw;
  const auto fs = synthesize(c, req);
  SuiteResult synth{"synthesis", 1, 0, false, "", synth_sw.seconds()};
  rep.suites.push_back(synth);
  rep.kfs = serialize(fs);
  rep.suites.push_back(delta_suite(c, fs, master.fork(3).next(), opt.delta_samples));
  rep.suites.push_back(bqf_suite(c, fs, master.fork(4).next(), opt.bqf_samples));
  rep.suites.push_back(translation_suite(c, fs, master.fork(5).next(), opt.translation_samples));
  for (auto& s : crosscheck_suites(c, fs, master.fork(6).next(), opt)) rep.suites.push_back(s);
  rep.suites.push_back(chain_suite(c, fs, master.fork(7).next(), opt.chain_pairs));
  rep.suites.push_back(ladder_suite(c, fs, master.fork(8).next(), opt.ladder_scalars));
  rep.suites.push_back(roundtrip_suite(fs, c));
  rep.seconds = sw.seconds();
  return rep;
}

}  // namespace detail

/// Runs every suite on one named curve; invalid curves are reported as
/// skipped. `on_curve` is called after each curve when given.
inline SuiteReport proposition_suites(const std::vector<NamedCurve>& corpus, uint64_t seed, const SuiteOptions& opt,
                                      const std::function<void(const CurveReport&)>& on_curve = {}) {
  SuiteReport rep;
  rep.seed = seed;
  SeededRng master(seed);
  for (size_t i = 0; i < corpus.size(); ++i) {
    const uint64_t s = master.fork(100 + i).next();
    CurveReport cr;
    try {
      cr = std::visit(
          [&](const auto& fld) {
            auto c = curve_from_text(fld, corpus[i].text);
            return detail::run_curve(corpus[i].name, c, s, opt);
          },
          parse_field_spec(corpus[i].text.field));
    } catch (const Error& e) {
      cr.name = corpus[i].name;
      cr.field = corpus[i].text.field;
      cr.suites.push_back({"error", 1, 1, false, e.what(), 0});
    }
    if (on_curve) on_curve(cr);
    rep.curves.push_back(std::move(cr));
  }
  return rep;
}

inline std::string format_curve_report(const CurveReport& c) {
  std::ostringstream os;
  os << "curve " << c.name << " (" << c.field << ")";
  if (c.skipped) {
    os << " SKIPPED: " << c.skip_reason << "\n";
    return os.str();
  }
  os << "\n";
  for (const auto& s : c.suites) {
    os << "  " << s.name << ": ";
    if (s.skipped)
      os << "skipped";
    else
      os << s.checked << " checked, " << s.failures << " failures";
    if (!s.detail.empty()) os << " [" << s.detail << "]";
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.2fs)", s.seconds);
    os << buf << "\n";
  }
  return os.str();
}

inline std::string format_suite_report(const SuiteReport& r) {
  std::ostringstream os;
  os << "seed " << r.seed << "\n";
  for (const auto& c : r.curves) os << format_curve_report(c);
  os << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

inline nlohmann::json suite_report_json(const SuiteReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  j["curves"] = nlohmann::json::array();
  for (const auto& c : r.curves) {
    nlohmann::json jc{{"name", c.name}, {"field", c.field}, {"skipped", c.skipped}, {"seconds", c.seconds}};
    if (c.skipped) jc["skip_reason"] = c.skip_reason;
    jc["suites"] = nlohmann::json::array();
    for (const auto& s : c.suites)
      jc["suites"].push_back({{"name", s.name},
                              {"checked", s.checked},
                              {"failures", s.failures},
                              {"skipped", s.skipped},
                              {"detail", s.detail},
                              {"passed", s.passed()}});
    j["curves"].push_back(jc);
  }
  return j;
}

// ---------------------------------------------------------------------------
// 2-torsion count against the root structure of h (characteristic 2)

/// Number of rational 2-torsion classes predicted from the factorization
/// pattern of the homogenized h: the Galois-stable subsets of size 0 or 2 of
/// its distinct roots.
inline size_t expected_two_torsion(const CurveModel<BinaryField>& c) {
  Poly<BinaryField> h = c.h();
  size_t linear = 0, quadratic = 0;
  for ([[maybe_unused]] const auto& r : roots(h.monic())) ++linear;
  if (c.hc(3).is_zero()) ++linear;  // root at infinity
  quadratic = irreducible_quadratic_factors(h.monic()).size();
  return 1 + linear * (linear - 1) / 2 + quadratic;
}

}  // namespace g2k
