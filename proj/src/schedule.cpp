#include "dioph/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace dioph {

namespace {

// Smallest window searched below the unadjusted cantor endpoint.
constexpr std::size_t kMinSearchWidth = 16;

std::size_t ceil_mul(double lambda, std::size_t h) {
  const long double v = static_cast<long double>(lambda) * static_cast<long double>(h);
  // Guard against 4.7 * 10 = 47.000000000000007 style round-off.
  return static_cast<std::size_t>(std::ceil(v - v * 1e-12L));
}

std::size_t next_h(double lambda, std::size_t j, std::size_t prev) {
  if (std::isinf(lambda)) return (j + 1) * prev;
  return std::max(ceil_mul(lambda, prev), prev + 1);
}

void check_lambdas(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw PreconditionError("at least one lambda is required");
  for (double l : lambdas)
    if (!(l >= 1.0)) throw PreconditionError("each lambda must satisfy lambda >= 1");
}

}  // namespace

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::exponent: return "exponent";
    case ScheduleKind::factorial: return "factorial";
    case ScheduleKind::cantor_adjusted: return "cantor_adjusted";
  }
  return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
  if (s == "exponent") return ScheduleKind::exponent;
  if (s == "factorial") return ScheduleKind::factorial;
  if (s == "cantor_adjusted") return ScheduleKind::cantor_adjusted;
  throw FormatError("unknown schedule kind '" + s + "'");
}

std::size_t IntervalSchedule::complete_count() const {
  std::size_t c = 0;
  for (const auto& iv : intervals)
    if (iv.j >= 1 && !iv.partial) ++c;
  return c;
}

IntervalSchedule build_schedule(const std::vector<double>& lambdas, std::size_t digit_budget,
                                std::size_t h0) {
  check_lambdas(lambdas);
  if (digit_budget < 3) throw PreconditionError("digit budget must be at least 3");
  IntervalSchedule s;
  s.n = lambdas.size();
  s.lambdas = lambdas;
  s.kind = ScheduleKind::exponent;
  s.intervals.push_back({0, 1, h0, 0});
  for (std::size_t j = 1;; ++j) {
    const std::size_t prev = s.intervals.back().h;
    const std::size_t i = j % s.n;
    const std::size_t h = next_h(lambdas[i], j, prev);
    if (h > digit_budget) break;
    s.intervals.push_back({j, prev + 1, h, i});
  }
  if (s.intervals.size() < 2)
    throw PreconditionError("digit budget too small for interval I_1: need h_1 <= budget");
  return s;
}

std::size_t factorial_blocks_within(std::size_t digit_budget, std::size_t shift) {
  std::size_t J = 0;
  std::size_t f = 1;  // (J+1)!
  for (std::size_t k = 2;; ++k) {
    if (f > (std::numeric_limits<std::size_t>::max() - shift) / k) break;
    f *= k;
    if (f + shift > digit_budget + 1) break;
    J = k - 1;
  }
  return J;
}

IntervalSchedule factorial_schedule(std::size_t J, std::size_t n, std::size_t shift) {
  if (J < 2) throw PreconditionError("factorial schedule needs J >= 2");
  if (n < 2) throw PreconditionError("factorial schedule needs n >= 2");
  std::vector<std::size_t> b{0};
  std::size_t f = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    if (f > std::numeric_limits<std::size_t>::max() / j)
      throw PreconditionError("factorial boundary overflows position arithmetic");
    f *= j;
    b.push_back(j >= 2 ? f + shift : f);
  }
  IntervalSchedule s;
  s.n = n;
  s.lambdas.assign(n, kInfinity);
  s.kind = ScheduleKind::factorial;
  for (std::size_t j = 1; j < J; ++j) s.intervals.push_back({j, b[j], b[j + 1] - 1, j % n});
  return s;
}

IntervalSchedule cantor_adjusted_schedule(const DigitExpansion& xi, const std::vector<double>& lambdas,
                                          const std::vector<unsigned>& W, double epsilon,
                                          std::size_t digit_budget, std::size_t h0) {
  check_lambdas(lambdas);
  if (!(epsilon > 0 && epsilon < 1)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (std::find(W.begin(), W.end(), 0u) == W.end()) throw PreconditionError("W must contain 0");
  std::vector<bool> inW(xi.base(), false);
  for (unsigned d : W) {
    if (d >= xi.base()) throw PreconditionError("W digit outside [0, base-1]");
    inW[d] = true;
  }
  const auto& d = xi.digits();
  for (std::size_t u = 0; u < d.size(); ++u)
    if (!inW[d[u]])
      throw PreconditionError("xi digit at position " + std::to_string(u + 1) + " is not in W");
  digit_budget = std::min(digit_budget, xi.frac_len());
  if (digit_budget < 3) throw PreconditionError("digit budget must be at least 3");

  IntervalSchedule s;
  s.n = lambdas.size();
  s.lambdas = lambdas;
  s.kind = ScheduleKind::cantor_adjusted;
  s.epsilon = epsilon;
  s.intervals.push_back({0, 1, h0, 0});
  for (std::size_t j = 1;; ++j) {
    const std::size_t prev = s.intervals.back().h;
    const std::size_t i = j % s.n;
    const std::size_t t = next_h(lambdas[i], j, prev);
    if (t > digit_budget) break;
    const std::size_t width =
        std::max<std::size_t>(static_cast<std::size_t>(std::floor(epsilon * double(t))), kMinSearchWidth);
    const std::size_t lo = std::max(prev + 1, t > width ? t - width : std::size_t{1});
    std::size_t h = t;
    while (h >= lo && d[h - 1] == 0) --h;
    if (h < lo)
      throw PreconditionError("cantor schedule: xi has only zero digits on [" + std::to_string(lo) +
                              ", " + std::to_string(t) + "], no endpoint with digit in W\\{0}");
    Interval iv{j, prev + 1, h, i};
    const std::size_t hs = static_cast<std::size_t>(std::floor(epsilon * double(h)));
    iv.H_lo = h - hs;
    iv.H_hi = h - 1;
    for (std::size_t u = iv.H_hi; hs > 0 && u >= iv.H_lo; --u)
      if (d[u - 1] != 0) {
        iv.e = u;
        break;
      }
    s.intervals.push_back(iv);
  }
  if (s.intervals.size() < 2)
    throw PreconditionError("digit budget too small for interval I_1: need h_1 <= budget");
  return s;
}

void close_with_partial(IntervalSchedule& s, std::size_t last) {
  if (last <= s.end()) return;
  const Interval& back = s.intervals.back();
  Interval iv{back.j + 1, back.h + 1, last, (back.j + 1) % s.n};
  iv.partial = true;
  s.intervals.push_back(iv);
}

std::string format_lambda(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_lambda(const std::string& s) {
  if (s == "inf" || s == "INF" || s == "infinity") return kInfinity;
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw PreconditionError("bad lambda value '" + s + "'");
  return v;
}

void write_schedule(std::ostream& out, const IntervalSchedule& s) {
  out << "schedule kind=" << to_string(s.kind) << " n=" << s.n << " lambdas=";
  for (std::size_t i = 0; i < s.lambdas.size(); ++i)
    out << (i ? "," : "") << format_lambda(s.lambdas[i]);
  out << " epsilon=" << format_lambda(s.epsilon) << '\n';
  for (const auto& iv : s.intervals) {
    out << iv.j << ' ' << iv.g << ' ' << iv.h << ' ' << iv.owner;
    if (iv.partial) out << " partial";
    if (s.kind == ScheduleKind::cantor_adjusted && iv.j >= 1 && !iv.partial)
      out << " H=" << iv.H_lo << ':' << iv.H_hi << " e=" << iv.e;
    out << '\n';
  }
  out << "end-schedule\n";
}

IntervalSchedule read_schedule(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("schedule ", 0) != 0)
    throw FormatError("schedule: missing header");
  IntervalSchedule s;
  std::istringstream hs(line.substr(9));
  std::string tok;
  while (hs >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("schedule: bad header token " + tok);
    std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    try {
      if (k == "kind") {
        s.kind = schedule_kind_from_string(v);
      } else if (k == "n") {
        s.n = std::stoul(v);
      } else if (k == "lambdas") {
        std::stringstream ls(v);
        std::string t;
        while (std::getline(ls, t, ',')) s.lambdas.push_back(parse_lambda(t));
      } else if (k == "epsilon") {
        s.epsilon = parse_lambda(v);
      }
    } catch (const std::logic_error&) {
      throw FormatError("schedule: bad header value " + tok);
    }
  }
  if (s.n == 0 || s.lambdas.size() != s.n) throw FormatError("schedule: lambdas do not match n");
  while (std::getline(in, line)) {
    if (line == "end-schedule") {
      if (s.intervals.empty()) throw FormatError("schedule: no intervals");
      return s;
    }
    std::istringstream ls(line);
    Interval iv;
    if (!(ls >> iv.j >> iv.g >> iv.h >> iv.owner)) throw FormatError("schedule: bad interval line");
    while (ls >> tok) try {
      if (tok == "partial") {
        iv.partial = true;
      } else if (tok.rfind("H=", 0) == 0) {
        auto c = tok.find(':');
        if (c == std::string::npos) throw FormatError("schedule: bad H token");
        iv.H_lo = std::stoul(tok.substr(2, c - 2));
        iv.H_hi = std::stoul(tok.substr(c + 1));
      } else if (tok.rfind("e=", 0) == 0) {
        iv.e = std::stoul(tok.substr(2));
      } else {
        throw FormatError("schedule: unknown interval token " + tok);
      }
    } catch (const std::logic_error&) {
      throw FormatError("schedule: bad interval token " + tok);
    }
    if (!s.intervals.empty()) {
      const auto& b = s.intervals.back();
      if (iv.j != b.j + 1 || iv.g != b.h + 1) throw FormatError("schedule: intervals not contiguous");
    }
    if (iv.g > iv.h || iv.owner >= s.n) throw FormatError("schedule: malformed interval");
    s.intervals.push_back(iv);
  }
  throw FormatError("schedule: missing end-schedule");
}

}  // namespace dioph
