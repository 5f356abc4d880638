#include "dioph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "dioph/bounds.hpp"
#include "parallel.hpp"

namespace dioph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::parallel_for;

std::string first_difference(const DigitExpansion& a, const DigitExpansion& b) {
  if (a.sign() != b.sign() || a.int_part() != b.int_part()) return "integer-part";
  const std::size_t n = std::max(a.frac_len(), b.frac_len());
  for (std::size_t u = 1; u <= n; ++u) {
    const unsigned da = u <= a.frac_len() ? a.digit_at(u) : 0;
    const unsigned db = u <= b.frac_len() ? b.digit_at(u) : 0;
    if (da != db) return "digit " + std::to_string(u);
  }
  return "none";
}

bool is_prime(unsigned b) {
  if (b < 2) return false;
  for (unsigned d = 2; d * d <= b; ++d)
    if (b % d == 0) return false;
  return true;
}

double log_b_of(const BigInt& x, unsigned base) {
  return x == 0 ? -kInf : double(log_abs(x) / std::log((long double)base));
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string xname(std::size_t i) { return "x" + std::to_string(i); }

struct Tail {
  bool ok = true;
  double logE = 0;  // log_b of E = |x - p/b^cut| * b^N, -inf when E = 0
  bool roundup = false;
};

// Error of the designed fraction from the digits alone. p is the truncation at `cut`, or the
// nearest integer when `nearest`; ok iff E < b^{N+1-end}.
Tail designed_tail(const std::vector<std::uint8_t>& dg, std::size_t cut, std::size_t end, unsigned b,
                   bool nearest) {
  const std::size_t N = dg.size();
  Tail t;
  if (cut >= N) {
    t.logE = -kInf;
    return t;
  }
  if (nearest) {
    if (b % 2 == 0) {
      t.roundup = dg[cut] >= b / 2;
    } else {
      const unsigned k = (b - 1) / 2;
      std::size_t u = cut;
      while (u < N && dg[u] == k) ++u;
      t.roundup = u < N && dg[u] > k;
    }
  }
  // s_u = d_u, or b-1-d_u when rounding up (then E = C + 1)
  auto sd = [&](std::size_t u) -> unsigned { return t.roundup ? b - 1 - dg[u - 1] : dg[u - 1]; };
  std::size_t first = cut + 1;
  while (first <= N && sd(first) == 0) ++first;
  if (t.roundup) {
    // E = C + 1 < b^{N+1-end} unless C = b^{N+1-end} - 1, i.e. d vanishes on [end, N]
    bool zero_after_end = true;
    for (std::size_t u = end; u <= N && zero_after_end; ++u) zero_after_end = dg[u - 1] == 0;
    t.ok = first >= end && !zero_after_end;
  } else {
    t.ok = first >= end;
  }
  if (first > N) {
    t.logE = t.roundup ? 0.0 : -kInf;
    return t;
  }
  long double mant = 0, scale = 1;
  for (std::size_t u = first; u <= N && u < first + 18; ++u) {
    mant += scale * sd(u);
    scale /= b;
  }
  if (t.roundup) mant += std::pow((long double)b, -(long double)(N - first));
  t.logE = double((long double)(N - first) + std::log(mant) / std::log((long double)b));
  return t;
}

struct Deflation {
  double digits = 0;  // log_b gcd(p, b^cut)
  bool within = true; // gcd <= b^H
};

// gcd(p, b^cut) only depends on the last few digits of p: with B = p mod b^L, once
// v_r(B) < L v_r(b) for every prime r | b, gcd(p, b^cut) = gcd(B, b^L).
Deflation deflation(const std::vector<std::uint8_t>& dg, std::size_t cut, bool roundup, unsigned b,
                    std::size_t H) {
  std::vector<unsigned long> primes;
  for (unsigned r = 2, m = b; r <= m; ++r)
    if (m % r == 0) {
      primes.push_back(r);
      while (m % r == 0) m /= r;
    }
  static const char kChars[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  for (std::size_t L = std::min<std::size_t>(cut, 32);; L = std::min(cut, 2 * L)) {
    std::string s(L, '0');
    for (std::size_t k = 0; k < L; ++k) s[k] = kChars[dg[cut - L + k]];
    BigInt B(s, int(b));
    const BigInt bL = pow_int(b, L);
    if (roundup) {
      B += 1;
      if (B == bL) B = 0;
    }
    bool settled = L == cut && B != 0;
    if (!settled && B != 0) {
      settled = true;
      for (unsigned long r : primes) {
        std::size_t vb = valuation(BigInt(b), r);
        if (valuation(B, r) >= L * vb) settled = false;
      }
    }
    if (settled || L == cut) {
      BigInt g;
      mpz_gcd(g.get_mpz_t(), B.get_mpz_t(), bL.get_mpz_t());
      Deflation out;
      out.digits = g == 1 ? 0.0 : log_b_of(g, b);
      out.within = g <= pow_int(b, H);
      return out;
    }
  }
}

}  // namespace

unsigned thread_cap() {
  if (const char* env = std::getenv("DIOPH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool VerificationReport::pass() const {
  for (const auto& c : checks)
    if (c.mandatory && !c.pass) return false;
  return true;
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerificationReport verify(const Decomposition& d, const Tolerances& tol) {
  VerificationReport r;
  const std::size_t n = d.components.size();
  if (n < 2) throw FormatError("decomposition needs at least 2 components");
  if (d.schedule.intervals.empty()) throw FormatError("decomposition has an empty schedule");
  const unsigned b = d.base;
  const long double lnb = std::log((long double)b);
  const std::size_t N = d.components.front().frac_len();
  for (const auto& c : d.components)
    if (c.base() != b || c.frac_len() != N) throw FormatError("components differ in base or length");
  if (d.schedule.end() > N) throw FormatError("schedule runs past the component length");
  for (const auto& iv : d.schedule.intervals)
    if (iv.owner >= n || iv.g < 1 || iv.g > iv.h) throw FormatError("malformed schedule interval");
  if (d.lambdas.size() != n) throw FormatError("need one lambda per component");

  const bool corrected =
      d.mode == Mode::exponent_n || d.mode == Mode::base_restricted || d.mode == Mode::sum;
  const bool mask = d.mode == Mode::erdos || d.mode == Mode::liouville_n;
  const bool two_sum = d.mode == Mode::erdos || d.mode == Mode::sum || d.mode == Mode::cantor;
  const std::size_t complete = d.schedule.complete_count();
  r.advisory_only = complete < 4;
  const bool asym = !r.advisory_only;
  const unsigned cap = tol.threads ? tol.threads : thread_cap();
  const std::size_t floor_digits =
      tol.floor_digits.value_or(std::size_t(std::ceil(std::sqrt(double(N)))));
  const double corridor_c = 6.0 * b;

  {
    std::ostringstream h;
    h << "# verify mode=" << to_string(d.mode) << " base=" << b << " components=" << n
      << " digits=" << N << " intervals=" << complete;
    r.header.push_back(h.str());
    std::ostringstream c;
    c << "# constants: designed bound b^(1-h_j) (b^(1-e_j) at repaired cuts); corridor c=6b=" << corridor_c
      << "; stray tau>" << 2 + tol.stray << "; window tol=" << tol.window << "; trust=" << tol.trust
      << "; floor=" << floor_digits << " digits";
    r.header.push_back(c.str());
    if (r.advisory_only)
      r.header.push_back("# advisory-only exponent section: fewer than 4 schedule intervals");
  }

  // 1. exact sum identities
  {
    const std::size_t want = two_sum ? 1 : n - 1;
    if (d.targets.size() != want) throw FormatError("target count does not match the mode");
    Check c{"exact-sum", true, true, 0, "all"};
    std::size_t ok = 0;
    for (std::size_t i = 1; i < n && c.pass; ++i) {
      const DigitExpansion& t = d.targets[two_sum ? 0 : i - 1];
      if (two_sum && i > 1) break;
      const DigitExpansion s = add(d.components[0], d.components[i]);
      if (s.base() == t.base() && s == t.resized(s.frac_len()) && t.frac_len() <= s.frac_len()) {
        ++ok;
      } else {
        c.pass = false;
        c.location = "x0+" + xname(i) + " " + first_difference(s, t);
      }
    }
    c.margin = double(ok);
    r.checks.push_back(c);
  }

  std::vector<DigitExpansion> f(n);
  parallel_for(n, cap, [&](std::size_t i) { f[i] = frac_part(d.components[i]); });

  std::map<std::size_t, unsigned> corr;
  for (const auto& c : d.corrections) corr[c.j] = c.a;
  std::map<std::size_t, std::size_t> repaired;  // interval j -> position
  for (const auto& rp : d.repairs) repaired[rp.j] = rp.pos;

  // 2. (P1)/(P2) digit structure
  {
    Check p1{"P1", true, true, 0, "all"}, p2{"P2", true, true, 0, "all"};
    std::size_t n1 = 0, n2 = 0;
    auto fail = [](Check& c, const std::string& where) {
      if (c.pass) c.location = where;
      c.pass = false;
    };
    for (const auto& iv : d.schedule.intervals) {
      const std::size_t o = iv.owner;
      const auto& dg = f[o].digits();
      const std::string where = xname(o) + " I_" + std::to_string(iv.j);
      if (corrected) {
        bool zeros = true;
        for (std::size_t u = iv.g; u < iv.h && zeros; ++u) zeros = dg[u - 1] == 0;
        auto it = corr.find(iv.j);
        if (!zeros || it == corr.end() || dg[iv.h - 1] != it->second) fail(p1, where);
        else ++n1;
        const std::size_t c = (o + 1) % n;
        if (f[c].digit_at(iv.h) == 0) fail(p2, xname(c) + " pos " + std::to_string(iv.h));
        else ++n2;
      } else if (d.mode == Mode::cantor) {
        auto rp = repaired.find(iv.j);
        bool zeros = true;
        for (std::size_t u = iv.g; u < iv.h && zeros; ++u)
          zeros = dg[u - 1] == 0 || (rp != repaired.end() && rp->second == u);
        // I_0 is not snapped to a nonzero digit of xi
        const unsigned t = d.targets[0].digit_at(iv.h);
        if (!zeros || dg[iv.h - 1] != t || (t == 0 && iv.j > 0)) fail(p1, where);
        else ++n1;
      } else {
        // mask modes: owner block is constant 0, or b-1 after a borrow (Liouville n-split)
        const unsigned v = dg[iv.g - 1];
        bool flat = v == 0 || (d.mode == Mode::liouville_n && o != 0 && v == b - 1);
        for (std::size_t u = iv.g; u <= iv.h && flat; ++u) flat = dg[u - 1] == v;
        if (!flat) fail(p1, where);
        else ++n1;
      }
    }
    p1.margin = double(n1);
    r.checks.push_back(p1);
    if (corrected) {
      p2.margin = double(n2);
      r.checks.push_back(p2);
    }
    if (d.mode == Mode::cantor) {
      Check w{"W-digits", true, true, 0, "all"};
      std::vector<bool> allowed(b, false);
      for (unsigned v : d.digit_set)
        if (v < b) allowed[v] = true;
      for (std::size_t i = 0; i < n && w.pass; ++i) {
        if (d.components[i].sign() < 0 || d.components[i].int_part() != 0) {
          w.pass = false;
          w.location = xname(i) + " integer-part";
        }
        const auto& dg = d.components[i].digits();
        for (std::size_t u = 0; u < dg.size() && w.pass; ++u)
          if (!allowed[dg[u]]) {
            w.pass = false;
            w.location = xname(i) + " digit " + std::to_string(u + 1);
          }
      }
      r.checks.push_back(w);
    }
  }

  // 3./4. designed quality and gcd deflation
  for (const auto& dc : d.designed)
    if (dc.component >= n || dc.cut < 1 || dc.cut >= dc.block_end || dc.block_end > N ||
        !d.schedule.has(dc.j))
      throw FormatError("malformed designed cut");
  {
    std::map<std::pair<std::size_t, std::size_t>, int> seen;
    Check block{"block-bound", true, true, kInf, "all"};
    Check p2w{"P2'", true, true, kInf, "all"};
    Check gcd_c{"gcd", true, false, 0, "all"};
    bool unique = true;
    for (const auto& dc : d.designed) {
      if (++seen[{dc.component, dc.j}] > 1) unique = false;
      DesignedResult res;
      res.cut = dc;
      res.effective_end = dc.block_end;
      if (d.mode == Mode::cantor) {
        auto rp = repaired.find(dc.j);
        if (rp != repaired.end()) res.effective_end = rp->second;
      }
      const auto& dg = f[dc.component].digits();
      const Tail t = designed_tail(dg, dc.cut, res.effective_end, b, mask);
      res.ok = t.ok;
      res.margin_digits = double(N + 1 - res.effective_end) - t.logE;
      const std::size_t H = d.mode == Mode::cantor && d.schedule.has(dc.j - 1)
                                ? d.schedule.at(dc.j - 1).H_size() : 0;
      const Deflation g = deflation(dg, dc.cut, t.roundup, b, H);
      res.deflation_digits = g.digits;
      res.log_q = double((long double)dc.cut * lnb) - g.digits * double(lnb);
      res.tau = std::isinf(t.logE) ? kInf : (double(N) - t.logE) / double(dc.cut);
      res.tau_reduced = std::isinf(t.logE) || res.log_q <= 0
                            ? kInf : (double(N) - t.logE) * double(lnb) / res.log_q;
      const std::string where = "cut=" + std::to_string(dc.cut);
      r.checks.push_back({"designed[" + xname(dc.component) + ",j=" + std::to_string(dc.j) + "]", res.ok,
                          true, res.margin_digits, where});
      if (mask) {
        // |x - p/q| <= b^{-(b_{j+1} - b_j) + 1} with b_j = cut + 1, b_{j+1} = block_end + 1;
        // implied by the designed bound whenever that one holds
        const double m = double(N + dc.cut + 1 - dc.block_end) - t.logE;
        if (!res.ok && !(m >= 0)) {
          if (block.pass) block.location = where;
          block.pass = false;
        }
        block.margin = std::min(block.margin, m);
      }
      if (d.mode == Mode::cantor) {
        if (!g.within) {
          if (p2w.pass) p2w.location = xname(dc.component) + " " + where;
          p2w.pass = false;
        }
        p2w.margin = std::min(p2w.margin, double(H) - g.digits);
      }
      if (res.deflation_digits > gcd_c.margin) {
        gcd_c.margin = res.deflation_digits;
        gcd_c.location = xname(dc.component) + " " + where;
      }
      r.designed.push_back(res);
    }
    if (!unique) r.checks.push_back({"designed-unique", false, true, 0, "duplicate cut"});
    if (mask) r.checks.push_back(block);
    if (d.mode == Mode::cantor) r.checks.push_back(p2w);
    // prime base with (P2): designed fractions are reduced
    if (corrected && is_prime(b)) gcd_c.pass = gcd_c.margin == 0;
    r.checks.push_back(gcd_c);
  }

  // 5. profiles
  const bool theta_mode = d.mode == Mode::base_restricted;
  r.profiles.resize(n);
  parallel_for(n, cap, [&](std::size_t i) {
    EstimatorOptions o{tol.trust, floor_digits};
    if (theta_mode) {
      o.trust = 1.0;
      r.profiles[i] = estimate_theta_b(f[i], o);
    } else {
      r.profiles[i] = tau_sequence(f[i], o);
    }
  });

  auto window_upper = [&](std::size_t i, double slack) {
    if (d.mode == Mode::exponent_n) return happ_bound(d.lambdas, i).value + slack;
    // deflation up to b^|H_j| with |H_j| ~ eps h_j
    if (d.mode == Mode::cantor) return d.lambdas[i] / (1 - d.epsilon) + slack;
    return d.lambdas[i] + slack;
  };

  auto matches = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(a, b) + 1e-6; };
  // A window is only binding when some designed cut of the component lies in the measured zone.
  auto zone_cut = [&](std::size_t i) {
    if (theta_mode) {
      for (const auto& res : r.designed)
        if (res.cut.component == i && res.cut.cut >= floor_digits && res.cut.block_end < N) return true;
      return false;
    }
    for (const auto& res : r.designed) {
      if (res.cut.component != i || res.log_q < double(floor_digits) * double(lnb)) continue;
      for (const auto& t : r.profiles[i].tau)
        if (matches(double(t.log_q), res.log_q)) return true;
    }
    return false;
  };

  // 6. windows
  if (!mask) {
    for (std::size_t i = 0; i < n; ++i) {
      const ExponentEstimate& e = r.profiles[i];
      MuWindow w{i, d.lambdas[i] - tol.window, window_upper(i, tol.window),
                 theta_mode ? e.theta_b_hat : e.mu_hat, theta_mode};
      r.mu_windows.push_back(w);
      const bool binding = zone_cut(i);
      Check c{(theta_mode ? "theta-window[" : "mu-window[") + xname(i) + "]", true, asym && binding, 0, ""};
      if (e.rational_like) {
        c.pass = false;
        c.margin = -kInf;
        c.location = "rational-like";
      } else if (!theta_mode && e.insufficient_depth) {
        c.pass = false;
        c.margin = -kInf;
        c.location = "insufficient-depth";
      } else {
        c.margin = std::min(w.value - w.lower, w.upper - w.value);
        c.pass = c.margin >= 0;
        c.location = theta_mode ? "N0=" + std::to_string(e.theta_at) : "k=" + std::to_string(e.mu_k);
      }
      if (!binding) c.location += " (no designed cut in zone)";
      r.checks.push_back(c);
    }
    Check c{"designed-tau", true, asym, kInf, "none"};
    for (const auto& res : r.designed) {
      if (res.cut.cut < tol.designed_min_cut) continue;
      const double m = tol.window - std::fabs(res.tau - d.lambdas[res.cut.component]);
      if (m < c.margin) {
        c.margin = m;
        c.location = xname(res.cut.component) + " cut=" + std::to_string(res.cut.cut);
      }
    }
    c.pass = c.margin >= 0;
    r.checks.push_back(c);
  }

  // 7. Liouville trend
  if (mask) {
    std::vector<const DesignedResult*> byj;
    for (const auto& res : r.designed) byj.push_back(&res);
    std::sort(byj.begin(), byj.end(),
              [](const DesignedResult* a, const DesignedResult* b) { return a->cut.j < b->cut.j; });
    Check c{"liouville-trend", true, asym, kInf, "all"};
    for (std::size_t k = 1; k < byj.size(); ++k) {
      const double m = byj[k]->tau - byj[k - 1]->tau;
      if (m < c.margin) {
        c.margin = m;
        if (!(m > 0)) c.location = "j=" + std::to_string(byj[k]->cut.j);
      }
    }
    c.pass = byj.size() < 2 || c.margin > 0;
    if (byj.size() < 2) c.margin = 0;
    r.checks.push_back(c);
  }

  // 8. designed cuts inside the profile, and strays
  if (!theta_mode) {
    Check in_cf{"designed-in-cf", true, asym, 0, "all"};
    std::size_t found = 0;
    for (const auto& res : r.designed) {
      const auto& tau = r.profiles[res.cut.component].tau;
      if (tau.empty() || res.log_q > double(tau.back().log_q)) continue;
      // Legendre applies when the error is below 1/(2q^2)
      if (!((res.tau_reduced - 2.0) * res.log_q > std::log(2.0) + 1e-9)) continue;
      bool hit = false;
      for (const auto& t : tau) hit = hit || matches(double(t.log_q), res.log_q);
      if (hit) ++found;
      else if (in_cf.pass) {
        in_cf.pass = false;
        in_cf.location = xname(res.cut.component) + " cut=" + std::to_string(res.cut.cut);
      }
    }
    in_cf.margin = double(found);
    r.checks.push_back(in_cf);

    for (std::size_t i = 0; i < n; ++i) {
      Check c{"stray[" + xname(i) + "]", true, asym, kInf, "none"};
      const double limit = mask ? kInf : window_upper(i, tol.stray);
      for (const auto& t : r.profiles[i].tau) {
        const double lq = double(t.log_q), tv = double(t.tau);
        if (lq < double(floor_digits) * double(lnb) || !(tv > 2.0 + tol.stray)) continue;
        bool designed = false;
        for (const auto& res : r.designed)
          designed = designed || (res.cut.component == i && matches(res.log_q, lq));
        if (designed) continue;
        StrayConvergent s{i, t.k, lq, tv, limit, tv <= limit};
        r.stray.push_back(s);
        if (limit - tv < c.margin) {
          c.margin = limit - tv;
          c.location = "k=" + std::to_string(t.k);
        }
      }
      c.pass = c.margin >= 0;
      r.checks.push_back(c);
    }

    if (d.mode == Mode::sum) {
      for (std::size_t i = 0; i < n; ++i) {
        Check c{"corridor[" + xname(i) + "]", true, asym, kInf, "none"};
        for (const auto& s : r.stray) {
          if (s.component != i) continue;
          double qu = -1;
          for (const auto& res : r.designed)
            if (res.cut.component == i && res.log_q < s.log_q) qu = std::max(qu, res.log_q);
          if (qu < 0) continue;
          const double m = (s.log_q - ((d.lambdas[i] - 1) * qu - std::log(corridor_c))) / double(lnb);
          if (m < c.margin) {
            c.margin = m;
            c.location = "k=" + std::to_string(s.k);
          }
        }
        c.pass = c.margin >= 0;
        r.checks.push_back(c);
      }
      const double l0 = d.lambdas[0], l1 = d.lambdas[1];
      const double m = std::min({modif(l0, l1).value, modif(l1, l0).value, modif2(l0).value,
                                 modif2(l1).value});
      r.checks.push_back({"modif", m > 2, asym, m - 2, "lambda=" + fmt(l0) + "," + fmt(l1)});
    }
  }
  return r;
}

void write_report(std::ostream& out, const VerificationReport& r) {
  for (const auto& h : r.header) out << h << '\n';
  std::string advisory;
  for (const auto& c : r.checks)
    if (!c.mandatory) advisory += " " + c.name;
  if (!advisory.empty()) out << "# advisory:" << advisory << '\n';
  for (const auto& c : r.checks)
    out << "CHECK " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << " margin=" << fmt(c.margin)
        << " at=" << c.location << '\n';
  for (const auto& w : r.mu_windows)
    out << "# " << (w.theta ? "theta_b_hat" : "mu_hat") << ' ' << xname(w.component) << '=' << fmt(w.value)
        << " window=[" << fmt(w.lower) << ',' << fmt(w.upper) << "]\n";
  for (const auto& res : r.designed)
    out << "# designed " << xname(res.cut.component) << " j=" << res.cut.j << " cut=" << res.cut.cut
        << " tau=" << fmt(res.tau) << " tau_reduced=" << fmt(res.tau_reduced)
        << " gcd_digits=" << fmt(res.deflation_digits) << '\n';
  for (const auto& s : r.stray)
    out << "# stray " << xname(s.component) << " k=" << s.k << " q_digits=" << fmt(s.log_q / std::log(10.0))
        << " tau=" << fmt(s.tau) << (s.ok ? "" : " over-limit") << '\n';
  out << "RESULT " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace dioph
