#include "dioph/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dioph/bounds.hpp"
#include "dioph/contfrac.hpp"

namespace dioph {

namespace {

void require_unit(const DigitExpansion& x, const char* what) {
  if (x.sign() < 0 || x.int_part() != 0)
    throw PreconditionError(std::string(what) + " must lie in [0, 1)");
}

std::vector<DigitExpansion> prepare_targets(const std::vector<DigitExpansion>& xis, std::size_t N) {
  std::vector<DigitExpansion> out;
  for (const auto& x : xis) {
    require_unit(x, "each xi");
    if (x.base() != xis.front().base()) throw PreconditionError("all inputs must share one base");
    if (x.frac_len() < N)
      throw PreconditionError("input has " + std::to_string(x.frac_len()) +
                              " digits, fewer than the digit budget " + std::to_string(N));
    out.push_back(x.frac_len() == N ? x : x.resized(N));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// True if some component has only zero digits over the last two intervals.
bool has_rational_tail(const Decomposition& d) {
  const auto& iv = d.schedule.intervals;
  if (iv.size() < 2) return false;
  const std::size_t from = iv[iv.size() - 2].g, to = iv.back().h;
  for (const auto& c : d.components) {
    const DigitExpansion f = frac_part(c);
    bool all_zero = true;
    for (std::size_t u = from; u <= to && all_zero; ++u) all_zero = f.digit_at(u) == 0;
    if (all_zero) return true;
  }
  return false;
}

// x_0 digits for the corrected constructions. Blocks are processed right to left while
// tracking the borrow of every x_i = xi_i - x_0, so that (P1) and (P2) hold digit-exactly.
std::vector<std::uint8_t> corrected_x0(const std::vector<DigitExpansion>& targets,
                                       const IntervalSchedule& s, unsigned base,
                                       std::vector<Correction>& corrections) {
  const std::size_t n = s.n;
  const std::size_t N = s.end();
  const int b = int(base);
  std::vector<const std::uint8_t*> T(n, nullptr);
  for (std::size_t i = 1; i < n; ++i) T[i] = targets[i - 1].digits().data() - 1;  // 1-based
  std::vector<std::uint8_t> x0(N + 1, 0);
  std::vector<int> borrow(n, 0);
  auto mod = [b](int v) { return ((v % b) + b) % b; };
  for (std::size_t k = s.intervals.size(); k-- > 0;) {
    const Interval& iv = s.intervals[k];
    const std::size_t o = iv.owner, c = (o + 1) % n, g = iv.g, h = iv.h;
    int excluded;
    if (c == 0) excluded = mod(T[o][h] - borrow[o]);
    else if (o == 0) excluded = mod(T[c][h] - borrow[c]);
    else excluded = mod(int(T[o][h]) - int(T[c][h]) - borrow[o] + borrow[c]);
    const int a = excluded == 1 ? 2 : 1;
    corrections.push_back({iv.j, unsigned(a)});
    if (o == 0) {
      x0[h] = std::uint8_t(a);
    } else {
      int br = borrow[o];
      for (std::size_t u = h; u >= g; --u) {
        int v = int(T[o][u]) - (u == h ? a : 0) - br;
        br = v < 0;
        x0[u] = std::uint8_t(br ? v + b : v);
      }
    }
    for (std::size_t i = 1; i < n; ++i) {
      int br = borrow[i];
      for (std::size_t u = h; u >= g; --u) br = int(T[i][u]) - int(x0[u]) - br < 0;
      borrow[i] = br;
    }
  }
  std::reverse(corrections.begin(), corrections.end());
  x0.erase(x0.begin());
  return x0;
}

Decomposition corrected_split(Mode mode, const std::vector<DigitExpansion>& targets,
                              const std::vector<double>& lambdas, std::size_t N, std::size_t h0) {
  Decomposition d;
  d.mode = mode;
  d.base = targets.front().base();
  d.targets = targets;
  d.lambdas = lambdas;
  d.budget = N;
  d.jitter = h0 == 2 ? 0 : 1;
  d.schedule = build_schedule(lambdas, N, h0);
  close_with_partial(d.schedule, N);
  std::vector<std::uint8_t> x0 = corrected_x0(targets, d.schedule, d.base, d.corrections);
  d.components.emplace_back(d.base, 1, 0, std::move(x0));
  for (const auto& t : targets) d.components.push_back(sub(t, d.components.front()));
  const auto& iv = d.schedule.intervals;
  for (std::size_t k = 1; k < iv.size(); ++k)
    if (!iv[k].partial) d.designed.push_back({iv[k].owner, iv[k].j, iv[k - 1].h, iv[k].h});
  return d;
}

template <class Build>
Decomposition with_jitter(Build build) {
  Decomposition d = build(0);
  if (!has_rational_tail(d)) return d;
  Decomposition e = build(1);
  if (!has_rational_tail(e)) return e;
  d.warnings.push_back("a component has an all-zero tail over the last two intervals (rational-like)");
  return d;
}

// Mask splits on a factorial schedule. Erdos: x and y take complementary blocks of xi.
// Liouville: x_0 copies xi_{j mod n} on I_j (zeros when j = 0 mod n), x_i = xi_i - x_0.
Decomposition factorial_mask(Mode mode, const std::vector<DigitExpansion>& targets, std::size_t J,
                             std::size_t shift) {
  Decomposition d;
  d.mode = mode;
  d.base = targets.front().base();
  d.targets = targets;
  const std::size_t N = targets.front().frac_len();
  d.budget = N;
  d.jitter = shift;
  const std::size_t n = mode == Mode::erdos ? 2 : targets.size() + 1;
  d.lambdas.assign(n, kInfinity);
  d.schedule = factorial_schedule(J + 1, n, shift);
  close_with_partial(d.schedule, N);
  if (mode == Mode::erdos)
    for (auto& iv : d.schedule.intervals) iv.owner = (iv.j + 1) % 2;

  if (mode == Mode::erdos) {
    const auto& xi = targets.front().digits();
    std::vector<std::uint8_t> x(N, 0), y(N, 0);
    for (const auto& iv : d.schedule.intervals) {
      auto& dst = iv.owner == 0 ? y : x;
      for (std::size_t u = iv.g; u <= iv.h; ++u) dst[u - 1] = xi[u - 1];
    }
    d.components.emplace_back(d.base, 1, 0, std::move(x));
    d.components.emplace_back(d.base, 1, 0, std::move(y));
  } else {
    std::vector<std::uint8_t> x0(N, 0);
    for (const auto& iv : d.schedule.intervals) {
      if (iv.owner == 0) continue;
      const auto& src = targets[iv.owner - 1].digits();
      for (std::size_t u = iv.g; u <= iv.h; ++u) x0[u - 1] = src[u - 1];
    }
    d.components.emplace_back(d.base, 1, 0, std::move(x0));
    for (const auto& t : targets) d.components.push_back(sub(t, d.components.front()));
  }
  for (const auto& iv : d.schedule.intervals)
    if (iv.j >= 3 && !iv.partial) d.designed.push_back({iv.owner, iv.j, iv.g - 1, iv.h});
  return d;
}

void check_factorial_budget(std::size_t N, std::size_t J) {
  if (J < 2) throw PreconditionError("need J >= 2 factorial blocks");
  if (factorial_blocks_within(N) < J)
    throw PreconditionError("insufficient digits: need xi.N >= (J+1)! for J = " + std::to_string(J) +
                            " blocks, have " + std::to_string(N));
}

std::string threshold_message(double l) {
  return "lambda must exceed (5+sqrt17)/2 = 4.5615528128 (strict: lambda^2 - 5 lambda + 2 > 0), got " +
         fmt(l);
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::erdos: return "erdos";
    case Mode::liouville_n: return "liouville-n";
    case Mode::exponent_n: return "exponent-n";
    case Mode::base_restricted: return "base-restricted";
    case Mode::sum: return "sum";
    case Mode::cantor: return "cantor";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::erdos, Mode::liouville_n, Mode::exponent_n, Mode::base_restricted, Mode::sum,
                 Mode::cantor})
    if (to_string(m) == s) return m;
  throw PreconditionError("unknown mode '" + s +
                          "' (expected erdos, liouville-n, exponent-n, base-restricted, sum, cantor)");
}

double sum_threshold() { return (5.0 + std::sqrt(17.0)) / 2.0; }

bool exceeds_sum_threshold(double lambda) {
  if (std::isinf(lambda)) return true;
  if (!std::isfinite(lambda)) return false;
  const mpq_class l = exact_of(lambda);
  return l > mpq_class(5, 2) && l * l - 5 * l + 2 > 0;
}

Decomposition erdos_split(const DigitExpansion& xi, std::size_t J) {
  require_unit(xi, "xi");
  check_factorial_budget(xi.frac_len(), J);
  return with_jitter([&](std::size_t shift) {
    if (shift && factorial_blocks_within(xi.frac_len(), shift) < J) shift = 0;
    return factorial_mask(Mode::erdos, {xi}, J, shift);
  });
}

Decomposition liouville_nsplit(const std::vector<DigitExpansion>& xis, std::size_t J) {
  if (xis.empty()) throw PreconditionError("liouville split needs n >= 2, i.e. at least one xi");
  const std::size_t N = xis.front().frac_len();
  for (const auto& x : xis)
    if (x.frac_len() != N) throw PreconditionError("all xi must have the same length");
  auto targets = prepare_targets(xis, N);
  check_factorial_budget(N, J);
  return with_jitter([&](std::size_t shift) {
    if (shift && factorial_blocks_within(N, shift) < J) shift = 0;
    return factorial_mask(Mode::liouville_n, targets, J, shift);
  });
}

Decomposition exponent_nsplit(const std::vector<DigitExpansion>& xis, const std::vector<double>& lambdas,
                              const std::vector<double>& mus, std::size_t digit_budget) {
  const std::size_t n = lambdas.size();
  if (n < 2) throw PreconditionError("exponent split needs n >= 2 lambdas");
  if (xis.size() != n - 1) throw PreconditionError("exponent split needs n-1 inputs for n lambdas");
  for (double l : lambdas)
    if (!(l >= 2)) throw PreconditionError("each lambda must satisfy lambda >= 2, got " + fmt(l));
  if (!mus.empty() && mus.size() != n) throw PreconditionError("need one mu per lambda");
  auto targets = prepare_targets(xis, digit_budget);
  if (targets.front().base() < 3) throw PreconditionError("base 2 is not supported (needs b >= 3)");
  Decomposition d = with_jitter([&](std::size_t j) {
    return corrected_split(Mode::exponent_n, targets, lambdas, digit_budget, 2 + j);
  });
  d.mus = mus;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const BoundValue nu = happ_bound(lambdas, i);
    if (!(mus[i] >= lambdas[i]))
      d.warnings.push_back("mu_" + std::to_string(i) + " < lambda_" + std::to_string(i));
    if (!(mus[i] > nu.value))
      d.warnings.push_back("mu_" + std::to_string(i) + " = " + fmt(mus[i]) +
                           " does not exceed Lambda/(lambda_i - 1) + 1 = " + fmt(nu.value));
  }
  if (d.schedule.complete_count() < 3)
    throw PreconditionError("digit budget yields fewer than 3 schedule intervals");
  return d;
}

Decomposition base_restricted_nsplit(const std::vector<DigitExpansion>& xis,
                                     const std::vector<double>& lambdas, unsigned base,
                                     std::size_t digit_budget) {
  const std::size_t n = lambdas.size();
  if (base == 2) throw PreconditionError("base 2 is refused: the correction digits need b >= 3");
  if (base < 3) throw PreconditionError("base must satisfy b >= 3");
  if (n < 2) throw PreconditionError("base-restricted split needs n >= 2 lambdas");
  if (xis.size() != n - 1) throw PreconditionError("base-restricted split needs n-1 inputs");
  for (double l : lambdas)
    if (!(l >= 1)) throw PreconditionError("each lambda must satisfy lambda >= 1, got " + fmt(l));
  auto targets = prepare_targets(xis, digit_budget);
  if (targets.front().base() != base) throw PreconditionError("input base differs from --base");
  Decomposition d = with_jitter([&](std::size_t j) {
    return corrected_split(Mode::base_restricted, targets, lambdas, digit_budget, 2 + j);
  });
  if (d.schedule.complete_count() < 3)
    throw PreconditionError("digit budget yields fewer than 3 schedule intervals");
  TReport t = check_T_membership(targets, base, digit_budget);
  d.attestations.push_back({"T_max_theta", fmt(t.max_estimate)});
  if (!t.consistent)
    d.warnings.push_back("inputs look inconsistent with the T set: max theta_b estimate " +
                         fmt(t.max_estimate));
  return d;
}

Decomposition sum_split(const DigitExpansion& xi, double lambda0, double lambda1, std::size_t digit_budget,
                        bool attest_mu) {
  for (double l : {lambda0, lambda1})
    if (!exceeds_sum_threshold(l)) throw PreconditionError(threshold_message(l));
  auto targets = prepare_targets({xi}, digit_budget);
  if (targets.front().base() < 3) throw PreconditionError("base 2 is not supported (needs b >= 3)");
  Decomposition d = with_jitter([&](std::size_t j) {
    return corrected_split(Mode::sum, targets, {lambda0, lambda1}, digit_budget, 2 + j);
  });
  if (d.schedule.complete_count() < 3)
    throw PreconditionError("digit budget yields fewer than 3 schedule intervals");
  if (attest_mu && digit_budget >= 8) {
    ExponentEstimate e = tau_sequence(d.targets.front());
    d.attestations.push_back({"mu_hat_xi", e.rational_like ? "rational-like" : fmt(e.mu_hat)});
  }
  return d;
}

Decomposition cantor_sum_split(const DigitExpansion& xi, double lambda0, double lambda1, unsigned base,
                               const std::vector<unsigned>& W, double epsilon, std::size_t digit_budget) {
  for (double l : {lambda0, lambda1})
    if (!exceeds_sum_threshold(l)) throw PreconditionError(threshold_message(l));
  if (!(epsilon > 0 && epsilon <= 0.2)) throw PreconditionError("epsilon must lie in (0, 0.2]");
  if (xi.base() != base) throw PreconditionError("input base differs from --base");
  auto targets = prepare_targets({xi}, digit_budget);
  const auto& t = targets.front();

  Decomposition d;
  d.mode = Mode::cantor;
  d.base = base;
  d.targets = targets;
  d.lambdas = {lambda0, lambda1};
  d.digit_set = W;
  std::sort(d.digit_set.begin(), d.digit_set.end());
  d.epsilon = epsilon;
  d.budget = digit_budget;
  d.schedule = cantor_adjusted_schedule(t, d.lambdas, W, epsilon, digit_budget);
  std::size_t last = digit_budget;
  while (last > d.schedule.end() && t.digit_at(last) == 0) --last;
  close_with_partial(d.schedule, last);

  const auto& xd = t.digits();
  std::vector<std::vector<std::uint8_t>> x(2, std::vector<std::uint8_t>(digit_budget, 0));
  for (const auto& iv : d.schedule.intervals) {
    const std::size_t o = iv.owner;
    for (std::size_t u = iv.g; u < iv.h; ++u) x[1 - o][u - 1] = xd[u - 1];
    x[o][iv.h - 1] = xd[iv.h - 1];
  }
  const auto& iv = d.schedule.intervals;
  for (std::size_t k = 2; k < iv.size(); ++k) {
    if (iv[k].partial) continue;
    const Interval& prev = iv[k - 1];
    if (prev.e == 0) {
      d.warnings.push_back("no nonzero xi digit in H_" + std::to_string(prev.j) + ", cut at " +
                           std::to_string(prev.h) + " not designed");
      continue;
    }
    const std::size_t c = iv[k].owner;
    d.designed.push_back({c, iv[k].j, prev.h, iv[k].h});
    // Composite bases: gcd(p, b^cut) may exceed b^|H|; swap the digits at e once.
    auto deflation_ok = [&]() {
      DigitExpansion xc(base, 1, 0, x[c]);
      BigInt p = scaled_truncation(xc, prev.h), qq = pow_int(base, prev.h);
      BigInt g = gcd(p, qq);
      return g <= pow_int(base, prev.H_size());
    };
    if (!deflation_ok()) {
      std::swap(x[0][prev.e - 1], x[1][prev.e - 1]);
      if (deflation_ok()) {
        d.repairs.push_back({prev.j, prev.e});
      } else {
        std::swap(x[0][prev.e - 1], x[1][prev.e - 1]);
        d.warnings.push_back("gcd deflation at cut " + std::to_string(prev.h) + " exceeds b^|H|");
      }
    }
  }
  d.components.emplace_back(base, 1, 0, std::move(x[0]));
  d.components.emplace_back(base, 1, 0, std::move(x[1]));
  if (has_rational_tail(d))
    d.warnings.push_back("a component has an all-zero tail over the last two intervals (rational-like)");
  return d;
}

TReport check_T_membership(const std::vector<DigitExpansion>& xis, unsigned base, std::size_t depth,
                           double tolerance) {
  if (xis.empty()) throw PreconditionError("check_T_membership needs at least one input");
  TReport r;
  std::vector<std::pair<std::string, DigitExpansion>> probes;
  for (std::size_t i = 0; i < xis.size(); ++i) {
    if (xis[i].base() != base) throw PreconditionError("inputs must share the given base");
    probes.push_back({"xi" + std::to_string(i + 1), frac_part(xis[i]).resized(std::min(depth, xis[i].frac_len()))});
  }
  for (std::size_t i = 0; i < xis.size(); ++i)
    for (std::size_t t = i + 1; t < xis.size(); ++t) {
      DigitExpansion diff = frac_part(sub(xis[i], xis[t]));
      probes.push_back({"xi" + std::to_string(i + 1) + "-xi" + std::to_string(t + 1),
                        diff.resized(std::min(depth, diff.frac_len()))});
    }
  for (const auto& [label, x] : probes) {
    if (x.frac_len() < 8) continue;
    const ExponentEstimate e = estimate_theta_b(x);
    const double v = e.rational_like ? INFINITY : e.theta_b_hat;
    r.estimates.push_back({label, v});
    r.max_estimate = std::max(r.max_estimate, v);
  }
  r.consistent = r.max_estimate <= 1.0 + tolerance;
  return r;
}

}  // namespace dioph
