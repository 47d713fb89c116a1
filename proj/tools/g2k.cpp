// Command-line front end for the g2k library.
//
// Exit codes: 0 success, 1 verification failure or library error, 2 usage
// error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "g2k/g2k.hpp"

namespace {

using namespace g2k;

constexpr uint64_t kDefaultSeed = 20240601;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

template <class Fn>
int with_curve(const std::string& path, Fn&& fn) {
  const CurveText text = read_curve_file(path);
  return std::visit([&](const auto& fld) { return fn(curve_from_text(fld, text)); }, parse_field_spec(text.field));
}

template <FieldType F>
CurvePoint<F> parse_point(const CurveModel<F>& c, const std::string& s) {
  const F& fld = c.field();
  if (s.rfind("inf", 0) == 0) {
    const auto branches = infinity_branches(c);
    if (branches.empty()) throw UsageError("the curve has no rational point at infinity");
    typename F::Element r = branches.front();
    if (s.size() > 4 && s[3] == ':') r = fld.parse(s.substr(4));
    auto P = infinity_point(c, r);
    if (!P) throw UsageError("'" + s + "' is not a point at infinity of this curve");
    return *P;
  }
  auto xy = split_csv(s);
  if (xy.size() != 2) throw UsageError("point '" + s + "' must be x,y or inf[:r]");
  auto P = CurvePoint<F>::affine(fld.parse(xy[0]), fld.parse(xy[1]));
  if (!on_curve(c, P)) throw UsageError("point (" + s + ") is not on the curve");
  return P;
}

template <FieldType F>
PointPair<F> parse_pair(const CurveModel<F>& c, const std::string& s) {
  if (s.empty() || s == "0") return PointPair<F>::zero(c.field());
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ';')) parts.push_back(item);
  if (parts.size() != 2) throw UsageError("--points needs two points separated by ';'");
  return pair_from_points(c, parse_point(c, parts[0]), parse_point(c, parts[1]));
}

template <FieldType F>
FormulaSet<F> load_formulas(const CurveModel<F>& c, const std::string& path) {
  if (path.empty()) throw UsageError("--formulas is required");
  const std::string text = slurp(path);
  if (kfs_field_spec(text) != c.field().spec())
    fail(ErrorCode::FingerprintMismatch, "formula file " + path + " is for field " + kfs_field_spec(text));
  return deserialize(c.field(), text, &c);
}

void print_seed(uint64_t seed) { std::cerr << "seed " << seed << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kummer surface arithmetic for genus-2 curves"};
  app.require_subcommand(1);

  std::string curve_path, formulas_path, out_path, points, point, class_id, scalar = "0", corpus = "default";
  std::string lemma_case = "a", field_spec, coeffs;
  uint64_t seed = kDefaultSeed;
  size_t samples = 0, trials = 20, bits = 128, times = 1;
  bool json = false, quick = false;

  auto* validate_cmd = app.add_subcommand("validate", "check that a curve file defines a genus-2 curve");
  validate_cmd->add_option("curve", curve_path, "curve file")->required();

  auto* synth_cmd = app.add_subcommand("synth", "synthesize delta, B and W for a curve");
  synth_cmd->add_option("curve", curve_path, "curve file")->required();
  synth_cmd->add_option("--out", out_path, "output KFS1 file")->required();
  synth_cmd->add_option("--samples", samples, "samples per solve (delta needs >= 60, B >= 120)");
  synth_cmd->add_option("--seed", seed, "random seed");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a map at explicit input");
  std::string eval_what;
  eval_cmd->add_option("what", eval_what, "kappa")->required()->check(CLI::IsMember({"kappa"}));
  eval_cmd->add_option("curve", curve_path, "curve file")->required();
  eval_cmd->add_option("--points", points, "\"x1,y1;x2,y2\" (inf or inf:r for a point at infinity, 0 for zero)");
  eval_cmd->add_option("--times", times, "multiply the divisor class by this before applying kappa");

  auto add_formula_cmd = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("curve", curve_path, "curve file")->required();
    cmd->add_option("--formulas", formulas_path, "KFS1 file from synth")->required();
    cmd->add_option("--point", point, "Kummer point k1:k2:k3:k4");
    cmd->add_option("--points", points, "divisor \"x1,y1;x2,y2\" instead of --point");
    return cmd;
  };
  auto* dbl_cmd = add_formula_cmd("dbl", "duplicate a Kummer point");
  auto* translate_cmd = add_formula_cmd("translate", "translate a Kummer point by a 2-torsion class");
  translate_cmd->add_option("--class", class_id, "2-torsion class id (see twotorsion)")->required();
  auto* ladder_cmd = add_formula_cmd("ladder", "scalar multiple of a Kummer point");
  ladder_cmd->add_option("--n", scalar, "nonnegative scalar")->required();

  auto* tt_cmd = app.add_subcommand("twotorsion", "list the rational 2-torsion classes");
  tt_cmd->add_option("curve", curve_path, "curve file")->required();

  auto* lemma_cmd = app.add_subcommand("lemma", "exhaustive lemma search on a characteristic-2 normal form");
  std::string lemma_what;
  lemma_cmd->add_option("which", lemma_what, "delta or b")->required()->check(CLI::IsMember({"delta", "b"}));
  lemma_cmd->add_option("--case", lemma_case, "normal form a, b or c")->required()->check(CLI::IsMember({"a", "b", "c"}));
  lemma_cmd->add_option("--field", field_spec, "binary field spec")->required();
  lemma_cmd->add_option("--coeffs", coeffs, "f1,f3,f5")->required();
  lemma_cmd->add_option("--seed", seed, "random seed");
  lemma_cmd->add_flag("--json", json, "JSON output");

  auto* verify_cmd = app.add_subcommand("verify", "run the identity suites over a corpus");
  verify_cmd->add_option("corpus", corpus, "corpus file, or 'default'");
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_flag("--json", json, "JSON output");
  verify_cmd->add_flag("--quick", quick, "smaller sample counts");

  auto* bench_cmd = app.add_subcommand("bench", "operation counts and timing of the ladder");
  bench_cmd->add_option("curve", curve_path, "curve file")->required();
  bench_cmd->add_option("--formulas", formulas_path, "KFS1 file from synth")->required();
  bench_cmd->add_option("--trials", trials, "ladder runs");
  bench_cmd->add_option("--bits", bits, "scalar bit length");
  bench_cmd->add_option("--seed", seed, "random seed");
  bench_cmd->add_flag("--json", json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      return with_curve(curve_path, [&](const auto& c) {
        const auto v = validate(c);
        if (v.valid) {
          std::cout << "valid\n";
          return 0;
        }
        std::cout << "invalid: " << v.reason << "\n";
        return 1;
      });
    }

    if (*synth_cmd) {
      print_seed(seed);
      return with_curve(curve_path, [&](const auto& c) {
        SynthesisRequest req;
        req.seed = seed;
        if (samples) {
          if (samples < 120) throw UsageError("--samples must be at least 120");
          req.options.delta_samples = samples;
          req.options.bqf_samples = samples;
        }
        const auto fs = synthesize(c, req);
        write_file(out_path, serialize(fs));
        std::cout << "wrote " << out_path << " fingerprint " << curve_fingerprint(c) << "\n";
        return 0;
      });
    }

    if (*eval_cmd) {
      return with_curve(curve_path, [&](const auto& c) {
        using F = std::decay_t<decltype(c.field())>;
        auto pp = parse_pair(c, points);
        KummerPoint<F> k;
        if (times == 1) {
          k = kappa(c, pp);
        } else {
          const auto wm = working_model(c);
          k = kappa_of(wm, scalar_mul(wm, from_point_pair(wm, pp), times));
        }
        std::cout << format_kummer(c.field(), normalize<F>(k)) << "\n";
        return 0;
      });
    }

    if (*dbl_cmd || *translate_cmd || *ladder_cmd) {
      return with_curve(curve_path, [&](const auto& c) {
        using F = std::decay_t<decltype(c.field())>;
        const auto ctx = make_ladder_context(c, load_formulas(c, formulas_path));
        KummerPoint<F> x;
        if (!point.empty())
          x = parse_kummer(c.field(), point);
        else if (!points.empty())
          x = kappa(c, parse_pair(c, points));
        else
          throw UsageError("give --point or --points");
        if (!on_surface(ctx.quartic, x)) throw UsageError("the point is not on the Kummer surface");
        KummerPoint<F> y;
        if (*dbl_cmd)
          y = xdbl(ctx, x);
        else if (*translate_cmd)
          y = translate(ctx, class_id, x);
        else
          y = ladder(ctx, x, mpz_class(scalar));
        std::cout << format_kummer(c.field(), normalize<F>(y)) << "\n";
        return 0;
      });
    }

    if (*tt_cmd) {
      return with_curve(curve_path, [&](const auto& c) {
        using F = std::decay_t<decltype(c.field())>;
        if constexpr (!FiniteFieldType<F>) {
          throw UsageError("twotorsion needs a finite field");
          return 2;
        } else {
          const auto classes = two_torsion_classes(c);
          std::cout << "#J[2] " << classes.size() + 1 << "\n";
          for (const auto& q : classes) {
            std::cout << q.id << " " << format_kummer(c.field(), normalize<F>(q.kq));
            if (c.field().characteristic() == 2) {
              if (q.data) {
                const auto W = w_matrix_char2(c, *q.data);
                std::cout << " W";
                for (size_t i = 0; i < 4; ++i) {
                  std::cout << (i ? " | " : " ");
                  for (size_t j = 0; j < 4; ++j) std::cout << (j ? "," : "") << c.field().format(W(i, j));
                }
              } else {
                std::cout << " (k2 = 0, no printed W)";
              }
            }
            std::cout << "\n";
          }
          return 0;
        }
      });
    }

    if (*lemma_cmd) {
      print_seed(seed);
      auto any = parse_field_spec(field_spec);
      if (!std::holds_alternative<BinaryField>(any)) throw UsageError("lemma searches need a binary field");
      const auto fld = std::get<BinaryField>(any);
      if (fld.order() > (lemma_what == "delta" ? 64u : 8u))
        throw UsageError(std::string("field too large for an exhaustive ") + lemma_what + " search");
      const auto cs = split_csv(coeffs);
      if (cs.size() != 3) throw UsageError("--coeffs needs f1,f3,f5");
      const NormalCase k = lemma_case == "a" ? NormalCase::A : lemma_case == "b" ? NormalCase::B : NormalCase::C;
      const auto f1 = fld.parse(cs[0]), f3 = fld.parse(cs[1]), f5 = fld.parse(cs[2]);
      if (!normal_form_condition<BinaryField>(k, f1, f3, f5)) {
        std::cerr << "precondition: coefficients violate the nonsingularity condition of case (" << lemma_case
                  << ")\n";
        return 2;
      }
      const auto r = lemma_what == "delta" ? lemma_delta_search(k, fld, f1, f3, f5, seed)
                                           : lemma_b_search(k, fld, f1, f3, f5, seed);
      if (json)
        std::cout << lemma_report_json(r).dump(2) << "\n";
      else
        std::cout << format_lemma_report(r) << "\n" << (r.passed() ? "PASS" : "FAIL") << "\n";
      return r.passed() ? 0 : 1;
    }

    if (*verify_cmd) {
      print_seed(seed);
      const auto curves = corpus == "default" ? default_corpus() : read_corpus_file(corpus);
      SuiteOptions opt;
      if (quick) {
        opt.surface_samples = 100;
        opt.delta_samples = opt.bqf_samples = 50;
        opt.translation_samples = 50;
        opt.crosscheck_samples = 20;
        opt.chain_pairs = 10;
        opt.ladder_scalars = 5;
      }
      const auto rep = proposition_suites(curves, seed, opt, [&](const CurveReport& c) {
        if (!json) std::cout << format_curve_report(c) << std::flush;
      });
      if (json)
        std::cout << suite_report_json(rep).dump(2) << "\n";
      else
        std::cout << (rep.passed() ? "PASS" : "FAIL") << "\n";
      return rep.passed() ? 0 : 1;
    }

    if (*bench_cmd) {
      print_seed(seed);
      return with_curve(curve_path, [&](const auto& c) {
        using F = std::decay_t<decltype(c.field())>;
        if constexpr (!FiniteFieldType<F>) {
          throw UsageError("bench needs a finite field");
          return 2;
        } else {
          const auto ctx = make_ladder_context(c, load_formulas(c, formulas_path));
          const auto r = bench(ctx, trials, bits, seed);
          auto counts = [](const OpCounter& o) {
            return nlohmann::json{{"mul", o.mul}, {"sqr", o.sqr}, {"inv", o.inv}, {"add", o.add}};
          };
          if (json) {
            nlohmann::json j{{"field", r.field},       {"bits", r.bits},       {"trials", r.trials},
                             {"xdbl", counts(r.xdbl)}, {"xadd", counts(r.xadd)}, {"step", counts(r.step)},
                             {"ladder", counts(r.total)}, {"counts_stable", r.counts_stable},
                             {"seconds", r.seconds},   {"seconds_per_bit", r.seconds_per_bit}};
            std::cout << j.dump(2) << "\n";
          } else {
            auto line = [](const char* name, const OpCounter& o) {
              std::cout << name << " mul " << o.mul << " sqr " << o.sqr << " inv " << o.inv << " add " << o.add << "\n";
            };
            std::cout << "field " << r.field << "\n";
            line("xdbl", r.xdbl);
            line("xadd", r.xadd);
            line("step", r.step);
            std::cout << "ladder over " << r.bits << "-bit scalars:\n";
            line("ladder", r.total);
            std::cout << "counts stable across trials: " << (r.counts_stable ? "yes" : "no") << "\n";
            std::cout << "time " << r.seconds << " s for " << r.trials << " ladders, " << r.seconds_per_bit * 1e6
                      << " us per bit\n";
          }
          return r.counts_stable && r.step.inv == 0 ? 0 : 1;
        }
      });
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidFieldSpec ||
        e.code() == ErrorCode::LengthMismatch)
      return 2;
    return 1;
  }
  return 2;
}
