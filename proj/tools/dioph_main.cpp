// dioph: split reals into sums with prescribed irrationality exponents, verify, analyze.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dioph/bounds.hpp"
#include "dioph/boxdim.hpp"
#include "dioph/certificate.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/decompose.hpp"
#include "dioph/verify.hpp"

using namespace dioph;

namespace {

constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

std::vector<double> lambdas_of(const std::vector<std::string>& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(parse_lambda(s));
  return out;
}

std::vector<DigitExpansion> read_all(const std::vector<std::string>& paths) {
  std::vector<DigitExpansion> out;
  for (const auto& p : paths) out.push_back(read_digit_file(p));
  return out;
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s), 1);
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw PreconditionError("bad rational '" + s + "' (expected P/Q)");
  }
}

struct GenConfig {
  std::string kind = "random";
  unsigned base = 5;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  std::string digits;
  unsigned long radicand = 2;
  std::string out;
};

int cmd_gen(const GenConfig& c) {
  DigitExpansion x;
  if (c.kind == "random" && c.digits.empty()) x = random_expansion(c.base, c.length, c.seed);
  else if (c.kind == "random" || c.kind == "cantor") x = random_expansion(c.base, c.length, c.seed, parse_digit_set(c.digits, c.base));
  else if (c.kind == "quadratic") x = quadratic_expansion(c.radicand, c.base, c.length);
  else x = factorial_series(c.base, c.length);
  if (c.out.empty()) write_digits(std::cout, x);
  else write_digit_file(c.out, x);
  return 0;
}

struct SplitConfig {
  std::string mode;
  std::vector<std::string> in;
  std::vector<std::string> lambdas, mus;
  std::size_t budget = 0;
  unsigned base = 0;
  std::string digits;
  double epsilon = 0.1;
  std::size_t blocks = 0;
  std::string out = ".";
};

int cmd_split(const SplitConfig& c) {
  const Mode mode = mode_from_string(c.mode);
  const auto xs = read_all(c.in);
  if (xs.empty()) throw PreconditionError("split needs at least one --in file");
  const std::size_t budget = c.budget ? c.budget : xs.front().frac_len();
  const unsigned base = c.base ? c.base : xs.front().base();
  const auto lambdas = lambdas_of(c.lambdas);
  auto need_one = [&] {
    if (xs.size() != 1) throw PreconditionError(c.mode + " takes exactly one --in file");
  };
  auto need_two = [&] {
    if (lambdas.size() != 2) throw PreconditionError(c.mode + " takes exactly two --lambda values");
  };
  Decomposition d;
  switch (mode) {
    case Mode::erdos: {
      need_one();
      const std::size_t J = c.blocks ? c.blocks : factorial_blocks_within(xs.front().frac_len());
      d = erdos_split(xs.front(), J);
      break;
    }
    case Mode::liouville_n: {
      const std::size_t J = c.blocks ? c.blocks : factorial_blocks_within(xs.front().frac_len());
      d = liouville_nsplit(xs, J);
      break;
    }
    case Mode::exponent_n:
      d = exponent_nsplit(xs, lambdas, lambdas_of(c.mus), budget);
      break;
    case Mode::base_restricted:
      d = base_restricted_nsplit(xs, lambdas, base, budget);
      break;
    case Mode::sum:
      need_one();
      need_two();
      d = sum_split(xs.front(), lambdas[0], lambdas[1], budget);
      break;
    case Mode::cantor:
      need_one();
      need_two();
      if (c.digits.empty()) throw PreconditionError("cantor mode needs --digits (the set W)");
      d = cantor_sum_split(xs.front(), lambdas[0], lambdas[1], base, parse_digit_set(c.digits, base),
                           c.epsilon, budget);
      break;
  }
  write_decomposition(c.out, d);
  std::cout << certificate_summary(d);
  std::cout << "wrote " << (std::filesystem::path(c.out) / "cert.txt").string() << '\n';
  return 0;
}

struct VerifyConfig {
  std::string cert;
  Tolerances tol;
  std::size_t floor = 0;
};

int cmd_verify(VerifyConfig c) {
  std::string path = c.cert;
  if (std::filesystem::is_directory(path)) path = (std::filesystem::path(path) / "cert.txt").string();
  const Decomposition d = read_decomposition(path);
  if (c.floor) c.tol.floor_digits = c.floor;
  const VerificationReport r = verify(d, c.tol);
  write_report(std::cout, r);
  return r.pass() ? 0 : kExitCheck;
}

struct CfConfig {
  std::string in, rational;
  double trust = 0.5;
  std::size_t floor = 0;
  bool theta = false;
  std::vector<std::string> membership;
  double tolerance = 0.05;
};

int cmd_cf(const CfConfig& c) {
  if (!c.rational.empty()) {
    const ContinuedFraction cf = cf_of_rational(parse_rational(c.rational));
    std::cout << format_cf(cf) << '\n';
    for (std::size_t k = 0; k <= cf.K(); ++k)
      std::cout << k << ' ' << cf.p[k].get_str() << '/' << cf.q[k].get_str() << '\n';
    return 0;
  }
  if (c.in.empty()) throw PreconditionError("cf needs --in or --rational");
  const DigitExpansion x = frac_part(read_digit_file(c.in));
  EstimatorOptions o{c.trust, {}};
  if (c.floor) o.floor_digits = c.floor;
  write_estimate(std::cout, tau_sequence(x, o), false);
  return 0;
}

int cmd_est(const CfConfig& c) {
  if (!c.membership.empty()) {
    const auto xs = read_all(c.membership);
    const TReport t = check_T_membership(xs, xs.front().base(), xs.front().frac_len(), c.tolerance);
    for (const auto& [label, v] : t.estimates) std::cout << label << " theta_b_hat=" << v << '\n';
    std::cout << "max=" << t.max_estimate << (t.consistent ? " consistent" : " inconsistent") << '\n';
    return 0;
  }
  if (c.in.empty()) throw PreconditionError("est needs --in or --membership");
  const DigitExpansion x = frac_part(read_digit_file(c.in));
  EstimatorOptions o{c.trust, {}};
  if (c.floor) o.floor_digits = c.floor;
  write_estimate(std::cout, estimate_theta_b(x, o), true);
  return 0;
}

struct FormulaConfig {
  std::string query;
  std::vector<std::string> lambdas;
  unsigned base = 3;
  std::string digits;
  std::size_t index = 0;
};

int cmd_formulas(const FormulaConfig& c) {
  BoundQuery q;
  q.name = c.query;
  q.lambdas = lambdas_of(c.lambdas);
  q.base = c.base;
  if (!c.digits.empty()) q.digits = parse_digit_set(c.digits, c.base);
  q.index = c.index;
  std::cout << format_bound(q, evaluate_bound(q));
  return 0;
}

struct BoxConfig {
  std::string kind = "cantor";
  unsigned base = 3;
  bool base_given = false;
  std::string digits;
  std::string depths = "4:12";
  bool product = false;
  std::vector<std::string> certs;
  std::size_t count = 0;
  std::size_t length = 300;
  std::vector<std::string> lambdas{"5", "5"};
  std::uint64_t seed = 1;
};

int cmd_boxdim(BoxConfig c) {
  const auto depths = parse_depths(c.depths);
  if (c.kind == "cantor") {
    if (c.digits.empty()) throw PreconditionError("boxdim cantor needs --digits");
    const auto W = parse_digit_set(c.digits, c.base);
    const GridCount g = cantor_grid(c.base, W, depths, c.product);
    double ref = cantor_dim(c.base, W).value;
    write_grid(std::cout, g, c.product ? 2 * ref : ref);
    return 0;
  }
  std::vector<std::vector<DigitExpansion>> points;
  for (const auto& p : c.certs) {
    std::string path = p;
    if (std::filesystem::is_directory(path)) path = (std::filesystem::path(path) / "cert.txt").string();
    Decomposition d = read_decomposition(path);
    // without --base the first certificate decides
    if (!c.base_given && points.empty()) c.base = d.base;
    points.push_back(std::move(d.components));
  }
  if (c.count) {
    const auto l = lambdas_of(c.lambdas);
    if (l.size() != 2) throw PreconditionError("boxdim sampled takes exactly two --lambda values");
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.count; ++i) {
      const DigitExpansion xi = random_expansion(c.base, c.length, rng());
      points.push_back(sum_split(xi, l[0], l[1], c.length, false).components);
    }
  }
  write_grid(std::cout, count_sampled(points, c.base, depths));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dioph: decompositions of reals with prescribed irrationality exponents"};
  app.require_subcommand(1);

  GenConfig gen;
  auto* g = app.add_subcommand("gen", "generate an input digit file");
  g->add_option("--kind", gen.kind, "random, cantor, quadratic (frac sqrt D) or factorial (sum b^-j!)")
      ->check(CLI::IsMember({"random", "cantor", "quadratic", "factorial"}));
  g->add_option("--base", gen.base, "digit base")->check(CLI::Range(2, 36));
  g->add_option("--length", gen.length, "number of fractional digits")->required();
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--digits", gen.digits, "allowed digit set W, e.g. 0,2 (cantor)");
  g->add_option("--radicand", gen.radicand, "D for frac(sqrt D) (quadratic)");
  g->add_option("--out", gen.out, "output file (default stdout)");

  SplitConfig split;
  auto* s = app.add_subcommand("split", "decompose input(s) and write components plus certificate");
  s->add_option("--mode", split.mode, "erdos, liouville-n, exponent-n, base-restricted, sum, cantor")
      ->required();
  s->add_option("--in", split.in, "input digit file(s)")->required();
  s->add_option("--lambda", split.lambdas, "lambda values (inf accepted)");
  s->add_option("--mu", split.mus, "target mu values (exponent-n)");
  s->add_option("--budget", split.budget, "digit budget (default: input length)");
  s->add_option("--base", split.base, "base (base-restricted, cantor)");
  s->add_option("--digits", split.digits, "digit set W (cantor)");
  s->add_option("--epsilon", split.epsilon, "snapping slack (cantor)");
  s->add_option("--blocks", split.blocks, "factorial blocks J (erdos, liouville-n)");
  s->add_option("--out", split.out, "output directory");

  VerifyConfig ver;
  auto* v = app.add_subcommand("verify", "check a certificate");
  v->add_option("--cert", ver.cert, "cert.txt or its directory")->required();
  v->add_option("--tol", ver.tol.window, "window tolerance");
  v->add_option("--stray-tol", ver.tol.stray, "stray threshold above 2");
  v->add_option("--trust", ver.tol.trust, "trust fraction of the digits");
  v->add_option("--floor", ver.floor, "minimum denominator digits for estimates");
  v->add_option("--threads", ver.tol.threads, "thread cap (default DIOPH_THREADS)");

  CfConfig cf;
  auto* c = app.add_subcommand("cf", "continued fraction profile: tau table and mu_hat");
  c->add_option("--in", cf.in, "digit file");
  c->add_option("--rational", cf.rational, "expand P/Q instead");
  c->add_option("--trust", cf.trust, "trust fraction");
  c->add_option("--floor", cf.floor, "minimum denominator digits for mu_hat");

  CfConfig est;
  est.trust = 1.0;
  auto* e = app.add_subcommand("est", "base-restricted exponent estimate theta_b_hat");
  e->add_option("--in", est.in, "digit file");
  e->add_option("--trust", est.trust, "trust fraction");
  e->add_option("--floor", est.floor, "minimum run start");
  e->add_option("--membership", est.membership, "inputs for the T-membership report");
  e->add_option("--tolerance", est.tolerance, "T-membership tolerance");

  FormulaConfig fm;
  auto* f = app.add_subcommand("formulas", "closed-form dimension bounds");
  f->add_option("query", fm.query, "jarnik, vsets, cantor, product-upper, product-lower, complement, "
                                   "happ-bound, modif, modif2, ...")
      ->required()
      ->check(CLI::IsMember(bound_query_names()));
  f->add_option("--lambda", fm.lambdas, "lambda values (inf accepted)");
  f->add_option("--base", fm.base, "base (cantor)");
  f->add_option("--digits", fm.digits, "digit set W (cantor)");
  f->add_option("--index", fm.index, "component index (happ-bound)");

  BoxConfig box;
  auto* b = app.add_subcommand("boxdim", "box counting for Cantor sets and decomposition clouds");
  b->add_option("kind", box.kind, "cantor or sampled")->check(CLI::IsMember({"cantor", "sampled"}));
  b->add_option("--base", box.base, "base (sampled: defaults to the first certificate's)");
  b->add_option("--digits", box.digits, "digit set W");
  b->add_option("--depths", box.depths, "a:b or a,b,c");
  b->add_flag("--product", box.product, "count C x C");
  b->add_option("--cert", box.certs, "certificates contributing points (sampled)");
  b->add_option("--count", box.count, "random sum splits to sample (sampled)");
  b->add_option("--length", box.length, "digits per sampled input");
  b->add_option("--lambda", box.lambdas, "lambdas for sampled splits");
  b->add_option("--seed", box.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_split(split);
    if (*v) return cmd_verify(ver);
    if (*c) return cmd_cf(cf);
    if (*e) return cmd_est(est);
    if (*f) return cmd_formulas(fm);
    if (*b) {
      box.base_given = b->count("--base") > 0;
      return cmd_boxdim(box);
    }
  } catch (const PreconditionError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& err) {
    std::cerr << "internal inconsistency: " << err.what() << '\n';
    return kExitCheck;
  }
  return kExitUsage;
}
