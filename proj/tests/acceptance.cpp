// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dioph/bounds.hpp"
#include "dioph/boxdim.hpp"
#include "dioph/verify.hpp"

using namespace dioph;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void line(int id, bool pass, double seconds, const std::string& detail) {
  std::printf("%s criterion-%d %.1fs %s\n", pass ? "PASS" : "FAIL", id, seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void run(int id, const std::function<bool(std::ostringstream&)>& body) {
  const auto t0 = Clock::now();
  std::ostringstream detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  line(id, pass, std::chrono::duration<double>(Clock::now() - t0).count(), detail.str());
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool is_square(unsigned long D) {
  const auto r = static_cast<unsigned long>(std::llround(std::sqrt(double(D))));
  return r * r == D;
}

bool check_passes(const VerificationReport& r, const std::string& name) {
  const Check* c = r.find(name);
  return c && c->pass;
}

// q_k^{tau_k-1}/2 < q_{k+1} < q_k^{tau_k-1} with q_k^{tau_k-1} = 1/(q_k |x - p_k/q_k|), in exact arithmetic.
std::size_t kp_violations(const ContinuedFraction& cf, const mpq_class& x) {
  std::size_t bad = 0;
  for (std::size_t k = 1; k + 2 <= cf.K(); ++k) {
    if (cf.q[k] == 1) continue;
    const mpq_class d = abs(x - mpq_class(cf.p[k], cf.q[k]));
    const mpq_class t = d * cf.q[k] * cf.q[k + 1];
    if (!(2 * t > 1 && t < 1)) ++bad;
  }
  return bad;
}

}  // namespace

int main() {
  const auto start = Clock::now();

  run(1, [](std::ostringstream& out) {
    std::size_t ok = 0, runs = 0;
    double lo = INFINITY, hi = -INFINITY;
    const auto t0 = Clock::now();
    for (unsigned long D = 2; runs < 25; ++D) {
      if (is_square(D)) continue;
      ++runs;
      const Decomposition d = sum_split(quadratic_expansion(D, 5, 1000000), 5, 5, 1000000, false);
      const VerificationReport r = verify(d);
      bool good = check_passes(r, "exact-sum") && check_passes(r, "P1") && check_passes(r, "P2");
      for (const auto& w : r.mu_windows) {
        lo = std::min(lo, w.value);
        hi = std::max(hi, w.value);
        good = good && w.value >= 4.85 && w.value <= 5.15;
      }
      if (good) ++ok;
      else out << " D=" << D << ":fail";
    }
    const double t = since(t0);
    out << ok << "/25 seeds, mu_hat in [" << lo << ", " << hi << "], " << t << "s (limit 60s)";
    return ok == 25 && t < 60;
  });

  run(2, [](std::ostringstream& out) {
    const auto t0 = Clock::now();
    const DigitExpansion a = random_expansion(5, 1000000, 21), b = random_expansion(5, 1000000, 22);
    const Decomposition d = exponent_nsplit({a, b}, {6, 7, 8}, {}, 1000000);
    const VerificationReport r = verify(d);
    bool exact = check_passes(r, "exact-sum");
    double worst = 0;
    std::size_t cuts = 0;
    for (const auto& res : r.designed) {
      if (res.cut.cut < 100) continue;
      ++cuts;
      worst = std::max(worst, std::fabs(res.tau - d.lambdas[res.cut.component]));
    }
    std::size_t strays = 0;
    double top = 0;
    for (const auto& s : r.stray) {
      const double nu = happ_bound(d.lambdas, s.component).value;
      top = std::max(top, s.tau - nu);
      if (s.tau > nu + 0.25) ++strays;
    }
    const double t = since(t0);
    out << "exact=" << exact << ", " << cuts << " cuts with max |tau-lambda|=" << worst << ", "
        << r.stray.size() << " trusted strays, " << strays << " above nu+0.25, " << t << "s (limit 90s)";
    return exact && cuts > 0 && worst <= 0.15 && strays == 0 && t < 90;
  });

  run(3, [](std::ostringstream& out) {
    std::size_t ok = 0, cuts = 0;
    double tightest = INFINITY;  // digits of slack against the block bound
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DigitExpansion xi = random_expansion(10, 5040, 100 + seed);
      const Decomposition d = erdos_split(xi, 6);
      const VerificationReport r = verify(d);
      bool good = check_passes(r, "exact-sum") && check_passes(r, "liouville-trend");
      for (const auto& c : d.designed) {
        ++cuts;
        const mpq_class x = to_rational(d.components[c.component]).to_mpq();
        const mpz_class q = pow_int(10, c.cut);
        mpz_class p;
        mpz_fdiv_q(p.get_mpz_t(), mpz_class(x.get_num() * q).get_mpz_t(), x.get_den().get_mpz_t());
        if (abs(x - mpq_class(p + 1, q)) < abs(x - mpq_class(p, q))) p += 1;
        const mpq_class err = abs(x - mpq_class(p, q));
        // b_j = cut + 1 and b_{j+1} = block_end + 1
        const mpq_class bound(1, pow_int(10, c.block_end - c.cut - 1));
        good = good && err <= bound;
        if (err > 0) {
          const mpq_class ratio = bound / err;
          const double slack = double(log_ratio(ratio.get_num(), ratio.get_den())) / std::log(10.0);
          tightest = std::min(tightest, slack);
        }
      }
      if (good) ++ok;
      else out << " seed=" << seed << ":fail";
    }
    out << ok << "/10 seeds strictly increasing and within the bound, " << cuts
        << " cuts, min slack " << tightest << " digits";
    return ok == 10;
  });

  run(4, [](std::ostringstream& out) {
    std::mt19937_64 rng(4);
    std::size_t mismatches = 0, det_bad = 0, tested = 0;
    while (tested < 10000) {
      const mpz_class q = 1 + static_cast<unsigned long>(rng() % 1000000000ul);
      const mpz_class p = mpz_class(static_cast<unsigned long>(rng() % 2000000001ul)) - 1000000000;
      if (gcd(p, q) != 1) continue;
      ++tested;
      const ContinuedFraction cf = cf_of_rational(Rational(p, q));
      // Euclid with floor division
      std::vector<mpz_class> a;
      mpz_class u = p, v = q;
      for (;;) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
        a.push_back(f);
        const mpz_class rem = u - f * v;
        if (rem == 0) break;
        u = v;
        v = rem;
      }
      if (cf.a != a || cf.p.back() != p || cf.q.back() != q) ++mismatches;
      for (std::size_t k = 0; k + 1 <= cf.K(); ++k)
        if (abs(cf.p[k + 1] * cf.q[k] - cf.p[k] * cf.q[k + 1]) != 1) ++det_bad;
    }
    std::size_t counterexamples = 0, close = 0, proxies = 0;
    for (unsigned long D = 2; proxies < 20; ++D) {
      if (is_square(D)) continue;
      ++proxies;
      const mpq_class x = to_rational(quadratic_expansion(D, 10, 60)).to_mpq();
      const std::vector<BigInt> xa = cf_of_rational(Rational(x.get_num(), x.get_den())).a;
      for (long qq = 1; qq <= 1000; ++qq)
        for (long pp = 0; pp <= qq; ++pp) {
          if (gcd(mpz_class(pp), mpz_class(qq)) != 1) continue;
          if (abs(x - mpq_class(pp, qq)) * 2 * qq * qq < 1) {
            ++close;
            if (!is_convergent_of(xa, Rational(pp, qq))) ++counterexamples;
          }
        }
    }
    out << tested << " rationals, " << mismatches << " oracle mismatches, " << det_bad
        << " determinant failures; Legendre: " << close << " close fractions over 20 proxies, "
        << counterexamples << " non-convergents";
    return mismatches == 0 && det_bad == 0 && counterexamples == 0 && close > 0;
  });

  run(5, [](std::ostringstream& out) {
    std::mt19937_64 rng(5);
    std::size_t violations = 0, checked = 0, library_fail = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<BigInt> a{static_cast<unsigned long>(rng() % 3)};
      const unsigned long top = t % 2 ? 10 : 1000;
      for (int k = 0; k < 50; ++k) a.push_back(1 + static_cast<unsigned long>(rng() % top));
      if (a.back() == 1) a.back() = 2;
      const ContinuedFraction cf = cf_from_quotients(a);
      const Rational x = cf_value(cf);
      const KpReport r = kp_bounds_check(cf, x);
      checked += r.checked;
      if (!r.ok) ++library_fail;
      violations += kp_violations(cf, x.to_mpq());
    }
    out << checked << " interior convergents, " << violations << " exact violations, " << library_fail
        << " failing reports";
    return violations == 0 && library_fail == 0 && checked > 0;
  });

  run(6, [](std::ostringstream& out) {
    const std::vector<unsigned> W{0, 2};
    std::size_t ok = 0, cuts = 0;
    double worst = 0;  // deflation digits / floor(0.1 cut)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DigitExpansion xi = random_expansion(3, 100000, 600 + seed, W);
      const Decomposition d = cantor_sum_split(xi, 5, 5, 3, W, 0.1, 100000);
      bool good = d.components.size() == 2;
      for (const auto& c : d.components)
        for (auto v : c.digits()) good = good && (v == 0 || v == 2);
      for (std::size_t u = 1; u <= 100000; ++u)
        good = good && d.components[0].digit_at(u) + d.components[1].digit_at(u) == xi.digit_at(u);
      good = good && add(d.components[0], d.components[1]) == xi;
      for (const auto& c : d.designed) {
        ++cuts;
        const mpz_class p = scaled_truncation(d.components[c.component], c.cut);
        const mpz_class g = gcd(p, pow_int(3, c.cut));
        const std::size_t allowed = c.cut / 10;
        good = good && g <= pow_int(3, allowed);
        if (allowed > 0 && g > 1)
          worst = std::max(worst, std::log(g.get_d()) / std::log(3.0) / double(allowed));
      }
      if (good) ++ok;
      else out << " seed=" << seed << ":fail";
    }
    out << ok << "/10 seeds with W digits, carry-free sum and gcd <= 3^floor(0.1 h); " << cuts
        << " cuts, worst deflation " << worst << " of the allowance";
    return ok == 10;
  });

  run(7, [](std::ostringstream& out) {
    bool good = jarnik(4).exact == mpq_class(1, 2);
    for (double l = 1; l <= 50; l += 0.25) good = good && vsets(l).exact == 1 / exact_of(l);
    // bisection for complement_bound(l) = 1 on (2, 10)
    double lo = 2, hi = 10;
    for (int i = 0; i < 200; ++i) {
      const double mid = (lo + hi) / 2;
      (complement_bound(mid).value > 1 ? lo : hi) = mid;
    }
    const double cross = std::fabs(lo - sum_threshold_value().value);
    good = good && cross <= 1e-12;
    good = good && happ_bound({6, 6}, 0).exact == mpq_class(41, 5);
    good = good && modif(5, 5).exact == mpq_class(20, 9) && modif2(5).exact == mpq_class(20, 9);
    out << "jarnik(4)=" << jarnik(4).exact->get_str() << " happ(6,6)=" << happ_bound({6, 6}, 0).exact->get_str()
        << " modif=" << modif(5, 5).exact->get_str() << " modif2=" << modif2(5).exact->get_str()
        << " complement crossing off by " << cross;
    return good;
  });

  run(8, [](std::ostringstream& out) {
    const auto depths = parse_depths("4:12");
    const double ref = std::log(2.0) / std::log(3.0);
    const double s = estimate_dim(cantor_grid(3, {0, 2}, depths));
    const double p = estimate_dim(cantor_grid(3, {0, 2}, depths, true));
    out.precision(15);
    out << "slope=" << s << " product=" << p << " reference=" << ref;
    return std::fabs(s - ref) <= 1e-9 && p == 2 * s;
  });

  run(9, [](std::ostringstream& out) {
    bool good = true;
    double prev = 0, at720 = 0;
    out << "theta:";
    for (std::size_t N : {30, 60, 120, 240, 480, 720, 1500, 5040}) {
      const ExponentEstimate e = estimate_theta_b(factorial_series(5, N));
      if (e.insufficient_depth) {
        out << ' ' << N << "->untrusted";
        continue;
      }
      const double v = e.theta_b_hat;
      good = good && v >= prev;
      prev = v;
      if (N == 720) at720 = v;
      out << ' ' << N << "->" << v;
    }
    good = good && at720 > 4;
    std::size_t ok = 0;
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const ExponentEstimate e = estimate_theta_b(random_expansion(5, 1000000, 900 + seed));
      worst = std::max(worst, e.theta_b_hat);
      if (!e.rational_like && e.theta_b_hat <= 1.01) ++ok;
    }
    out << "; random " << ok << "/25 <= 1.01 (max " << worst << ")";
    return good && ok == 25;
  });

  std::printf("total %.1fs, %d failed\n", since(start), failures);
  return failures == 0 ? 0 : 1;
}
