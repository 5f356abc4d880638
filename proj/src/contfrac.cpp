#include "dioph/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dioph {

namespace {

// Below this size the recursion falls back to plain division steps.
constexpr std::size_t kBaseBits = 2048;
constexpr std::size_t kMargin = 64;
constexpr std::size_t kMinChunk = 8 * kMargin;

// (a, b)_orig = M (a, b)_now, M a product of [[q, 1], [1, 0]].
struct Mat {
  BigInt m00{1}, m01{0}, m10{0}, m11{1};
};

void push_q(Mat& M, const BigInt& q) {
  M.m01 += M.m00 * q;
  swap(M.m00, M.m01);
  M.m11 += M.m10 * q;
  swap(M.m10, M.m11);
}

// M <- M [[0, 1], [1, -q]]
void pop_q(Mat& M, const BigInt& q) {
  M.m00 -= M.m01 * q;
  swap(M.m00, M.m01);
  M.m10 -= M.m11 * q;
  swap(M.m10, M.m11);
}

// M <- M S
void mul_into(Mat& M, const Mat& S) {
  BigInt t00 = M.m00 * S.m00 + M.m01 * S.m10;
  BigInt t01 = M.m00 * S.m01 + M.m01 * S.m11;
  BigInt t10 = M.m10 * S.m00 + M.m11 * S.m10;
  BigInt t11 = M.m10 * S.m01 + M.m11 * S.m11;
  M.m00.swap(t00);
  M.m01.swap(t01);
  M.m10.swap(t10);
  M.m11.swap(t11);
}

void euclid_step(BigInt& a, BigInt& b, std::vector<BigInt>& qs, Mat* M) {
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  a.swap(b);
  b.swap(r);
  if (M) push_q(*M, q);
  qs.push_back(std::move(q));
}

std::uint64_t top_bits(const BigInt& v, std::size_t shift) {
  BigInt t;
  mpz_tdiv_q_2exp(t.get_mpz_t(), v.get_mpz_t(), shift);
  return t.get_ui();
}

// Single-word Lehmer step: quotients of the leading 64 bits, validated on the full pair.
// Returns false when no quotient could be certified.
bool lehmer_step(BigInt& a, BigInt& b, std::size_t stop, std::vector<BigInt>& qs, Mat* M) {
  const std::size_t n = bit_length(a);
  const std::size_t s = n > 64 ? n - 64 : 0;
  std::uint64_t ah = top_bits(a, s), bh = top_bits(b, s);
  const std::size_t stop_w = std::max<std::size_t>(s ? 32 : 0, stop > s ? stop - s : 0);
  // S = [[s00, s01], [s10, s11]] as in Mat.
  std::uint64_t s00 = 1, s01 = 0, s10 = 0, s11 = 1;
  std::vector<std::uint64_t> local;
  while (bh != 0 && static_cast<std::size_t>(64 - __builtin_clzll(bh)) > stop_w) {
    const std::uint64_t q = ah / bh, r = ah - q * bh;
    local.push_back(q);
    s01 += s00 * q;
    std::swap(s00, s01);
    s11 += s10 * q;
    std::swap(s10, s11);
    ah = bh;
    bh = r;
  }
  if (local.empty()) return false;
  BigInt A, B;
  auto apply = [&]() {
    // A = s11 a - s01 b, B = s00 b - s10 a, sign-corrected by the parity of k.
    mpz_mul_ui(A.get_mpz_t(), a.get_mpz_t(), s11);
    mpz_submul_ui(A.get_mpz_t(), b.get_mpz_t(), s01);
    mpz_mul_ui(B.get_mpz_t(), b.get_mpz_t(), s00);
    mpz_submul_ui(B.get_mpz_t(), a.get_mpz_t(), s10);
    if (local.size() % 2 == 1) {
      mpz_neg(A.get_mpz_t(), A.get_mpz_t());
      mpz_neg(B.get_mpz_t(), B.get_mpz_t());
    }
  };
  apply();
  while (!local.empty() && !((A > B && B > 0) || (B == 0 && A > 0 && local.back() >= 2))) {
    const std::uint64_t q = local.back();
    local.pop_back();
    s00 -= s01 * q;
    std::swap(s00, s01);
    s10 -= s11 * q;
    std::swap(s10, s11);
    BigInt nA = A * q + B;
    B.swap(A);
    A.swap(nA);
  }
  if (local.empty()) return false;
  a.swap(A);
  b.swap(B);
  if (M) {
    BigInt t00, t01, t10, t11;
    mpz_mul_ui(t00.get_mpz_t(), M->m00.get_mpz_t(), s00);
    mpz_addmul_ui(t00.get_mpz_t(), M->m01.get_mpz_t(), s10);
    mpz_mul_ui(t01.get_mpz_t(), M->m00.get_mpz_t(), s01);
    mpz_addmul_ui(t01.get_mpz_t(), M->m01.get_mpz_t(), s11);
    mpz_mul_ui(t10.get_mpz_t(), M->m10.get_mpz_t(), s00);
    mpz_addmul_ui(t10.get_mpz_t(), M->m11.get_mpz_t(), s10);
    mpz_mul_ui(t11.get_mpz_t(), M->m10.get_mpz_t(), s01);
    mpz_addmul_ui(t11.get_mpz_t(), M->m11.get_mpz_t(), s11);
    M->m00.swap(t00);
    M->m01.swap(t01);
    M->m10.swap(t10);
    M->m11.swap(t11);
  }
  for (auto q : local) qs.emplace_back(static_cast<unsigned long>(q));
  return true;
}

// Requires a > b >= 0. Emits quotients until bits(b) <= stop or b == 0.
void reduce(BigInt& a, BigInt& b, std::size_t stop, std::vector<BigInt>& qs, Mat* M) {
  while (b != 0 && bit_length(b) > stop) {
    const std::size_t n = bit_length(a);
    const std::size_t gap = n - stop;
    const std::size_t m = std::min(n / 2, 2 * (gap + kMargin));
    if (n < kBaseBits || m < kMinChunk) {
      if (!lehmer_step(a, b, stop, qs, M)) euclid_step(a, b, qs, M);
      continue;
    }
    const std::size_t sub_stop = m / 2 + kMargin;
    BigInt a0, b0;
    mpz_tdiv_q_2exp(a0.get_mpz_t(), a.get_mpz_t(), n - m);
    mpz_tdiv_q_2exp(b0.get_mpz_t(), b.get_mpz_t(), n - m);
    if (a0 == b0 || bit_length(b0) <= sub_stop) {
      euclid_step(a, b, qs, M);
      continue;
    }
    Mat S;
    const std::size_t mark = qs.size();
    reduce(a0, b0, sub_stop, qs, &S);
    std::size_t k = qs.size() - mark;
    BigInt A = S.m11 * a - S.m01 * b;
    BigInt B = S.m00 * b - S.m10 * a;
    if (k % 2 == 1) {
      A = -A;
      B = -B;
    }
    while (k > 0 && !((A > B && B > 0) || (B == 0 && A > 0 && qs.back() >= 2))) {
      BigInt q = std::move(qs.back());
      qs.pop_back();
      --k;
      BigInt nA = q * A + B;
      B.swap(A);
      A.swap(nA);
      pop_q(S, q);
    }
    if (k == 0) {
      euclid_step(a, b, qs, M);
      continue;
    }
    a.swap(A);
    b.swap(B);
    if (M) mul_into(*M, S);
  }
}


// ln(a + r) for a >= 1, 0 <= r <= 1.
long double log_plus(const BigInt& a, long double r) {
  if (mpz_fits_ulong_p(a.get_mpz_t())) return std::log(static_cast<long double>(a.get_ui()) + r);
  const long double la = log_abs(a);
  return la + std::log1p(r * std::exp(-la));
}

}  // namespace

QuotientRun partial_quotients(const BigInt& num, const BigInt& den, std::size_t stop_bits) {
  if (!(num > den && den > 0)) throw PreconditionError("partial_quotients needs num > den > 0");
  QuotientRun r{{}, num, den};
  reduce(r.a, r.b, stop_bits, r.quotients, nullptr);
  return r;
}

ContinuedFraction cf_from_quotients(std::vector<BigInt> a) {
  if (a.empty()) throw PreconditionError("continued fraction needs a_0");
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] < 1) throw PreconditionError("partial quotients a_k must be >= 1 for k >= 1");
  ContinuedFraction cf;
  cf.a = std::move(a);
  BigInt p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  cf.p.reserve(cf.a.size());
  cf.q.reserve(cf.a.size());
  for (const auto& ak : cf.a) {
    BigInt p = ak * p1 + p2, q = ak * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    cf.p.push_back(std::move(p));
    cf.q.push_back(std::move(q));
  }
  return cf;
}

ContinuedFraction cf_of_rational(const Rational& r) {
  BigInt a0;
  BigInt rem;
  mpz_fdiv_qr(a0.get_mpz_t(), rem.get_mpz_t(), r.num.get_mpz_t(), r.den.get_mpz_t());
  std::vector<BigInt> a{a0};
  if (rem != 0) {
    if (r.den > rem) {
      QuotientRun run = partial_quotients(r.den, rem, 0);
      for (auto& q : run.quotients) a.push_back(std::move(q));
    }
  }
  return cf_from_quotients(std::move(a));
}

Rational cf_value(const ContinuedFraction& cf) {
  if (cf.a.empty()) throw PreconditionError("empty continued fraction");
  return Rational(cf.p.back(), cf.q.back());
}

std::string format_cf(const ContinuedFraction& cf) {
  std::string s = "[" + cf.a.at(0).get_str();
  for (std::size_t k = 1; k < cf.a.size(); ++k) s += (k == 1 ? "; " : ", ") + cf.a[k].get_str();
  return s + "]";
}

ExponentEstimate tau_sequence(const DigitExpansion& x, const EstimatorOptions& opt) {
  const std::size_t N = x.frac_len();
  if (N < 8) throw PreconditionError("estimator needs at least 8 fractional digits");
  if (!(opt.trust > 0 && opt.trust <= 1)) throw PreconditionError("trust exponent must lie in (0, 1]");
  ExponentEstimate est;
  est.floor_digits = opt.floor_digits.value_or(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(N)))));
  const long double lb = std::log(static_cast<long double>(x.base()));
  const std::size_t t_digits = static_cast<std::size_t>(std::floor(opt.trust * double(N)));
  const long double logT = t_digits * lb + 1e-9L;
  const long double log_floor = est.floor_digits * lb - 1e-9L;

  BigInt Q = pow_int(x.base(), N);
  BigInt P = scaled_truncation(DigitExpansion(x.base(), 1, 0, x.digits()), N);
  if (P == 0) {
    est.rational_like = true;
    est.insufficient_depth = true;
    return est;
  }
  // Fast phase stops while q_k is still below T/8, then single steps cross T.
  const std::size_t qbits = bit_length(Q);
  const std::size_t tbits = static_cast<std::size_t>(std::ceil(logT / std::log(2.0L)));
  const std::size_t stop = qbits > tbits + 4 ? qbits - tbits + 4 : 0;
  QuotientRun run = partial_quotients(Q, P, stop);
  auto& qs = run.quotients;

  // log q_k forward, with rho_k = q_{k-1}/q_k. The product of small factors is kept
  // as a renormalized mantissa so each step costs one double log.
  std::vector<long double> logq{0.0L};  // q_0 = 1
  std::vector<double> rho{0.0};
  logq.reserve(qs.size() + 8);
  rho.reserve(qs.size() + 8);
  long double mant = 1.0L, extra = 0.0L;
  long exp2 = 0;
  const long double ln2 = std::log(2.0L);
  auto extend = [&](const BigInt& ak) {
    if (mpz_fits_ulong_p(ak.get_mpz_t())) {
      const long double v = static_cast<long double>(ak.get_ui()) + rho.back();
      mant *= v;
      rho.push_back(static_cast<double>(1.0L / v));
      if (mant > 0x1p256L) {
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
      }
    } else {
      const long double l = log_plus(ak, rho.back());
      extra += l;
      rho.push_back(static_cast<double>(std::exp(-l)));
    }
    logq.push_back(extra + exp2 * ln2 + std::log(static_cast<double>(mant)));
  };
  for (const auto& ak : qs) extend(ak);
  while (run.b != 0 && logq.back() <= logT) {
    euclid_step(run.a, run.b, qs, nullptr);
    extend(qs.back());
  }
  const std::size_t K = qs.size();
  if (run.b == 0 && logq.back() <= logT) est.rational_like = true;

  // Complete quotients alpha_k = a_k + 1/alpha_{k+1}, backward from alpha_{K+1} = a/b.
  // Values too large for long double are carried as logarithms.
  bool big = true;
  long double av = 0, alog = run.b == 0 ? INFINITY : log_ratio(run.a, run.b);
  if (run.b != 0 && alog < 1e4L) {
    big = false;
    av = std::exp(alog);
  }
  std::size_t last_trusted = 0;
  for (std::size_t k = 1; k < K && logq[k + 1] <= logT; ++k) last_trusted = k;
  std::vector<TauEntry> rev;
  long double best = -1;
  std::size_t used = 0;
  for (std::size_t k = K; k >= 1; --k) {
    // Here (big, av, alog) describe alpha_{k+1}.
    if (k <= last_trusted && logq[k] > 0) {
      const long double num =
          big ? (std::isinf(alog) ? alog : alog + std::log1p(rho[k] * std::exp(-alog)))
              : static_cast<long double>(std::log(static_cast<double>(av + rho[k])));
      rev.push_back({k, logq[k], 2.0L + num / logq[k]});
      if (logq[k] >= log_floor) {
        ++used;
        const long double ratio = logq[k + 1] / logq[k];
        if (ratio >= best) {
          best = ratio;
          est.mu_k = k;
        }
      }
    }
    const BigInt& ak = qs[k - 1];
    const long double inv = big ? (std::isinf(alog) ? 0.0L : std::exp(-alog)) : 1.0L / av;
    if (mpz_fits_ulong_p(ak.get_mpz_t())) {
      av = static_cast<long double>(ak.get_ui()) + inv;
      big = false;
    } else {
      const long double la = log_abs(ak);
      alog = la + std::log1p(inv * std::exp(-la));
      big = alog >= 1e4L;
      if (!big) av = std::exp(alog);
    }
  }
  est.tau.assign(rev.rbegin(), rev.rend());
  est.trust_k = last_trusted;
  est.trusted_count = used;
  if (used < 2) est.insufficient_depth = true;
  if (best > 0) est.mu_hat = static_cast<double>(1.0L + best);
  return est;
}

ExponentEstimate estimate_theta_b(const DigitExpansion& x, const EstimatorOptions& opt) {
  const std::size_t N = x.frac_len();
  if (N < 8) throw PreconditionError("estimator needs at least 8 fractional digits");
  ExponentEstimate est;
  est.floor_digits = opt.floor_digits.value_or(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(N)))));
  const std::size_t limit = static_cast<std::size_t>(std::floor(opt.trust * double(N)));
  if (std::all_of(x.digits().begin(), x.digits().end(), [](auto d) { return d == 0; })) {
    est.rational_like = true;
    return est;
  }
  std::size_t used = 0;
  for (const Run& r : run_scan(x, 1, N)) {
    const std::size_t n0 = r.start - 1;
    const std::size_t end = r.start + r.length - 1;
    if (end >= N || end > limit || n0 < est.floor_digits || n0 == 0) continue;
    ++used;
    const double cand = double(n0 + r.length) / double(n0);
    if (cand > est.theta_b_hat) {
      est.theta_b_hat = cand;
      est.theta_at = n0;
    }
  }
  // no closed run inside the zone: the default 1 carries no information
  est.insufficient_depth = used == 0;
  return est;
}

void write_estimate(std::ostream& out, const ExponentEstimate& e, bool theta) {
  std::ostringstream s;
  s << std::setprecision(10);
  if (!theta) {
    s << "# k q_bits tau_k\n";
    for (const auto& t : e.tau)
      s << t.k << ' ' << double(t.log_q / std::log(2.0L)) << ' ' << double(t.tau) << '\n';
    s << "trusted_k=" << e.trust_k << " floor_digits=" << e.floor_digits << '\n';
    if (e.rational_like) s << "mu_hat=rational-like\n";
    else s << "mu_hat=" << e.mu_hat << (e.insufficient_depth ? " insufficient-depth" : "") << '\n';
  } else {
    if (e.rational_like) s << "theta_b_hat=rational-like\n";
    else s << "theta_b_hat=" << e.theta_b_hat << " at=" << e.theta_at
           << (e.insufficient_depth ? " insufficient-depth" : "") << '\n';
  }
  out << s.str();
}

bool is_convergent_of(const std::vector<BigInt>& xa, const Rational& c) {
  ContinuedFraction cc = cf_of_rational(c);
  const auto& ca = cc.a;
  const std::size_t m = ca.size() - 1;
  if (m < xa.size()) {
    bool head = std::equal(ca.begin(), ca.begin() + m, xa.begin());
    if (head && ca[m] == xa[m]) return true;
    if (head && m + 1 < xa.size() && xa[m] + 1 == ca[m] && xa[m + 1] == 1) return true;
  }
  return false;
}

LegendrePartition legendre_filter(const Rational& x, const std::vector<Rational>& candidates) {
  const std::vector<BigInt> xa = cf_of_rational(x).a;
  const mpq_class xv = x.to_mpq();
  LegendrePartition out;
  for (const auto& c : candidates) {
    if (is_convergent_of(xa, c)) {
      out.convergents.push_back(c);
      continue;
    }
    mpq_class d = abs(xv - c.to_mpq());
    mpq_class bound(1, 2 * c.den * c.den);
    if (d < bound)
      throw ConsistencyError("Legendre violation: " + c.str() +
                             " beats 1/(2q^2) but is not a convergent");
    out.non_convergents.push_back(c);
  }
  return out;
}

KpReport kp_bounds_check(const ContinuedFraction& cf, const Rational& x) {
  if (cf.K() < 3) throw PreconditionError("kp_bounds_check needs K >= 3");
  KpReport rep;
  const mpq_class xv = x.to_mpq();
  bool first = true;
  for (std::size_t k = 1; k + 2 <= cf.K(); ++k) {
    if (cf.q[k] == 1) {
      ++rep.skipped;
      continue;
    }
    mpq_class d = abs(xv - mpq_class(cf.p[k], cf.q[k]));
    if (d == 0) {
      rep.ok = false;
      rep.fail_k = rep.fail_k.value_or(k);
      continue;
    }
    mpq_class prod = d * mpq_class(cf.q[k] * cf.q[k + 1]);
    const double lp = double(log_ratio(prod.get_num(), prod.get_den()));
    const double lower = lp + std::log(2.0);  // ln(2 q_k q_{k+1} d)
    const double upper = -lp;                 // -ln(q_k q_{k+1} d)
    const bool pass = 2 * prod > 1 && prod < 1;
    ++rep.checked;
    if (!pass && !rep.fail_k) rep.fail_k = k;
    rep.ok = rep.ok && pass;
    if (first) {
      rep.min_lower_margin = lower;
      rep.min_upper_margin = upper;
      first = false;
    } else {
      rep.min_lower_margin = std::min(rep.min_lower_margin, lower);
      rep.min_upper_margin = std::min(rep.min_upper_margin, upper);
    }
  }
  return rep;
}

}  // namespace dioph
