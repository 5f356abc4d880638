#include "dioph/digits.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace dioph {

namespace {

constexpr std::size_t kLineWidth = 1024;

char digit_char(unsigned d) { return d < 10 ? char('0' + d) : char('A' + (d - 10)); }

int char_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

void check_base(unsigned base) {
  if (base < 2 || base > 36) throw PreconditionError("base must satisfy 2 <= base <= 36");
}

// Magnitude with a fixed fractional length.
struct Mag {
  BigInt ip;
  std::vector<std::uint8_t> f;
};

Mag mag_of(const DigitExpansion& x, std::size_t n) {
  Mag m{x.int_part(), x.digits()};
  m.f.resize(n, 0);
  return m;
}

int mag_cmp(const Mag& a, const Mag& b) {
  int c = cmp(a.ip, b.ip);
  if (c != 0) return c < 0 ? -1 : 1;
  for (std::size_t u = 0; u < a.f.size(); ++u)
    if (a.f[u] != b.f[u]) return a.f[u] < b.f[u] ? -1 : 1;
  return 0;
}

Mag mag_add(const Mag& a, const Mag& b, unsigned base) {
  Mag r;
  r.f.resize(a.f.size());
  unsigned carry = 0;
  for (std::size_t u = a.f.size(); u-- > 0;) {
    unsigned s = a.f[u] + b.f[u] + carry;
    carry = s >= base;
    r.f[u] = static_cast<std::uint8_t>(carry ? s - base : s);
  }
  r.ip = a.ip + b.ip + carry;
  return r;
}

// a - b for a >= b.
Mag mag_sub(const Mag& a, const Mag& b, unsigned base) {
  Mag r;
  r.f.resize(a.f.size());
  unsigned borrow = 0;
  for (std::size_t u = a.f.size(); u-- > 0;) {
    int s = int(a.f[u]) - int(b.f[u]) - int(borrow);
    borrow = s < 0;
    r.f[u] = static_cast<std::uint8_t>(borrow ? s + int(base) : s);
  }
  r.ip = a.ip - b.ip - borrow;
  return r;
}

BigInt digits_value(const std::uint8_t* d, std::size_t m, unsigned base) {
  if (m == 0) return 0;
  std::string s(m, '0');
  for (std::size_t u = 0; u < m; ++u) s[u] = digit_char(d[u]);
  BigInt v;
  mpz_set_str(v.get_mpz_t(), s.c_str(), int(base));
  return v;
}

}  // namespace

Rational::Rational(BigInt n, BigInt d, bool reduce) : num(std::move(n)), den(std::move(d)) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (reduce) {
    BigInt g = gcd(num, den);
    if (g > 1) {
      mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
    reduced = true;
  } else {
    reduced = gcd(num, den) == 1;
  }
}

mpq_class Rational::to_mpq() const {
  mpq_class q(num, den);
  if (!reduced) q.canonicalize();
  return q;
}

Rational Rational::from_mpq(const mpq_class& q) {
  Rational r;
  r.num = q.get_num();
  r.den = q.get_den();
  r.reduced = true;
  return r;
}

std::string Rational::str() const { return num.get_str() + "/" + den.get_str(); }

DigitExpansion::DigitExpansion(unsigned base, int sign, BigInt int_part,
                               std::vector<std::uint8_t> frac)
    : base_(base), sign_(sign < 0 ? -1 : 1), int_part_(std::move(int_part)), frac_(std::move(frac)) {
  check_base(base_);
  if (int_part_ < 0) throw PreconditionError("int_part must be nonnegative");
  for (auto d : frac_)
    if (d >= base_) throw PreconditionError("digit out of range for base");
  if (is_zero()) sign_ = 1;
}

unsigned DigitExpansion::digit_at(std::size_t u) const {
  if (u < 1 || u > frac_.size()) throw PreconditionError("digit position out of range");
  return frac_[u - 1];
}

bool DigitExpansion::is_zero() const {
  return int_part_ == 0 && std::all_of(frac_.begin(), frac_.end(), [](auto d) { return d == 0; });
}

DigitExpansion DigitExpansion::resized(std::size_t n) const {
  std::vector<std::uint8_t> f(frac_.begin(), frac_.begin() + std::min(n, frac_.size()));
  f.resize(n, 0);
  return DigitExpansion(base_, sign_, int_part_, std::move(f));
}

DigitExpansion from_rational(const Rational& p, unsigned base, std::size_t n_digits) {
  check_base(base);
  BigInt a = abs(p.num);
  BigInt ip, rem;
  mpz_tdiv_qr(ip.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), p.den.get_mpz_t());
  std::vector<std::uint8_t> f(n_digits, 0);
  if (n_digits > 0 && rem != 0) {
    BigInt scaled = rem * pow_int(base, n_digits);
    BigInt v;
    mpz_tdiv_q(v.get_mpz_t(), scaled.get_mpz_t(), p.den.get_mpz_t());
    std::string s = v.get_str(int(base));
    std::size_t off = n_digits - s.size();
    for (std::size_t u = 0; u < s.size(); ++u) f[off + u] = std::uint8_t(char_digit(s[u]));
  }
  return DigitExpansion(base, p.num < 0 ? -1 : 1, ip, std::move(f));
}

BigInt scaled_truncation(const DigitExpansion& x, std::size_t m) {
  if (m > x.frac_len()) throw PreconditionError("truncation position beyond stored digits");
  BigInt v = x.int_part() * pow_int(x.base(), m) + digits_value(x.digits().data(), m, x.base());
  return x.sign() < 0 ? BigInt(-v) : v;
}

Truncation to_rational_truncation(const DigitExpansion& x, std::size_t m) {
  BigInt s = scaled_truncation(x, m);
  bool nz = mpz_tdiv_ui(s.get_mpz_t(), x.base()) != 0;
  return {Rational(std::move(s), pow_int(x.base(), m)), nz};
}

Rational to_rational(const DigitExpansion& x) {
  return to_rational_truncation(x, x.frac_len()).value;
}

DigitExpansion add(const DigitExpansion& x, const DigitExpansion& y) {
  if (x.base() != y.base()) throw PreconditionError("base mismatch");
  const std::size_t n = std::max(x.frac_len(), y.frac_len());
  Mag a = mag_of(x, n), b = mag_of(y, n);
  if (x.sign() == y.sign()) {
    Mag r = mag_add(a, b, x.base());
    return DigitExpansion(x.base(), x.sign(), std::move(r.ip), std::move(r.f));
  }
  if (mag_cmp(a, b) >= 0) {
    Mag r = mag_sub(a, b, x.base());
    return DigitExpansion(x.base(), x.sign(), std::move(r.ip), std::move(r.f));
  }
  Mag r = mag_sub(b, a, x.base());
  return DigitExpansion(x.base(), y.sign(), std::move(r.ip), std::move(r.f));
}

DigitExpansion negate(const DigitExpansion& x) {
  return DigitExpansion(x.base(), -x.sign(), x.int_part(), x.digits());
}

DigitExpansion sub(const DigitExpansion& x, const DigitExpansion& y) {
  if (x.base() != y.base()) throw PreconditionError("base mismatch");
  return add(x, negate(y));
}

DigitExpansion frac_part(const DigitExpansion& x) {
  DigitExpansion f(x.base(), 1, 0, x.digits());
  if (x.sign() > 0 || f.is_zero()) return f;
  Mag one{1, std::vector<std::uint8_t>(x.frac_len(), 0)};
  Mag r = mag_sub(one, mag_of(f, x.frac_len()), x.base());
  return DigitExpansion(x.base(), 1, std::move(r.ip), std::move(r.f));
}

std::vector<Run> run_scan(const DigitExpansion& x, std::size_t from, std::size_t to) {
  if (from < 1 || to > x.frac_len() || from > to + 1)
    throw PreconditionError("run_scan range out of bounds");
  std::vector<Run> runs;
  const auto& d = x.digits();
  const std::uint8_t top = std::uint8_t(x.base() - 1);
  std::size_t u = from;
  while (u <= to) {
    std::uint8_t c = d[u - 1];
    if (c != 0 && c != top) {
      ++u;
      continue;
    }
    std::size_t v = u;
    while (v + 1 <= to && d[v] == c) ++v;
    runs.push_back({u, v - u + 1, c == 0 ? RunKind::zero : RunKind::top});
    u = v + 1;
  }
  return runs;
}

DigitExpansion random_expansion(unsigned base, std::size_t n, std::uint64_t seed,
                                const std::vector<unsigned>& allowed_digits) {
  check_base(base);
  const std::vector<unsigned>& w = allowed_digits;
  if (w.empty()) throw PreconditionError("allowed digit set must be nonempty");
  for (unsigned d : w)
    if (d >= base) throw PreconditionError("allowed digit outside [0, base-1]");
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> f(n);
  const std::uint64_t k = w.size();
  for (auto& d : f) d = std::uint8_t(w[rng() % k]);
  return DigitExpansion(base, 1, 0, std::move(f));
}

DigitExpansion random_expansion(unsigned base, std::size_t n, std::uint64_t seed) {
  check_base(base);
  std::vector<unsigned> all(base);
  for (unsigned d = 0; d < base; ++d) all[d] = d;
  return random_expansion(base, n, seed, all);
}

DigitExpansion quadratic_expansion(unsigned long D, unsigned base, std::size_t n) {
  check_base(base);
  if (mpz_class(D) == sqrt(mpz_class(D)) * sqrt(mpz_class(D)))
    throw PreconditionError("D must not be a perfect square");
  const BigInt scale = pow_int(base, n);
  BigInt v = D * scale * scale;
  v = sqrt(v);
  v -= sqrt(mpz_class(D)) * scale;
  std::vector<std::uint8_t> f(n, 0);
  if (v != 0) {
    const std::string s = v.get_str(int(base));
    const std::size_t off = n - s.size();
    for (std::size_t u = 0; u < s.size(); ++u) f[off + u] = std::uint8_t(char_digit(s[u]));
  }
  return DigitExpansion(base, 1, 0, std::move(f));
}

DigitExpansion factorial_series(unsigned base, std::size_t n) {
  check_base(base);
  std::vector<std::uint8_t> f(n, 0);
  std::size_t fact = 1;
  for (std::size_t j = 1; fact <= n; ++j) {
    f[fact - 1] += 1;
    if (fact > n / (j + 1)) break;
    fact *= j + 1;
  }
  return DigitExpansion(base, 1, 0, std::move(f));
}

std::vector<unsigned> parse_digit_set(const std::string& text, unsigned base) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int d = tok.size() == 1 ? char_digit(tok[0]) : -1;
    if (d < 0) {
      try {
        d = std::stoi(tok);
      } catch (const std::exception&) {
        throw PreconditionError("bad digit '" + tok + "'");
      }
    }
    if (d < 0 || unsigned(d) >= base) throw PreconditionError("digit '" + tok + "' outside [0, base-1]");
    out.push_back(unsigned(d));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw PreconditionError("digit set W must be nonempty");
  return out;
}

void write_digits(std::ostream& out, const DigitExpansion& x) {
  out << "base=" << x.base() << '\n'
      << "sign=" << (x.sign() < 0 ? '-' : '+') << '\n'
      << "int=" << x.int_part().get_str() << '\n'
      << "fraclen=" << x.frac_len() << '\n';
  std::string line;
  line.reserve(kLineWidth + 1);
  const auto& d = x.digits();
  for (std::size_t u = 0; u < d.size(); u += kLineWidth) {
    line.clear();
    for (std::size_t v = u; v < std::min(d.size(), u + kLineWidth); ++v) line += digit_char(d[v]);
    line += '\n';
    out << line;
  }
}

namespace {

std::string expect_field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
    throw FormatError("digit file: expected '" + key + "=' line");
  return line.substr(key.size() + 1);
}

}  // namespace

DigitExpansion read_digits(std::istream& in) {
  unsigned long base = 0;
  std::size_t n = 0;
  try {
    base = std::stoul(expect_field(in, "base"));
  } catch (const std::logic_error&) {
    throw FormatError("digit file: bad base");
  }
  if (base < 2 || base > 36) throw FormatError("digit file: base outside 2..36");
  std::string sign = expect_field(in, "sign");
  if (sign != "+" && sign != "-") throw FormatError("digit file: bad sign");
  BigInt ip;
  std::string is = expect_field(in, "int");
  if (is.empty() || ip.set_str(is, 10) != 0 || ip < 0) throw FormatError("digit file: bad int");
  try {
    n = std::stoull(expect_field(in, "fraclen"));
  } catch (const std::logic_error&) {
    throw FormatError("digit file: bad fraclen");
  }
  std::vector<std::uint8_t> f;
  f.reserve(n);
  std::string line;
  while (f.size() < n && std::getline(in, line)) {
    if (line.size() > kLineWidth) throw FormatError("digit file: line longer than 1024");
    for (char c : line) {
      int d = char_digit(c);
      if (d < 0 || unsigned(d) >= base || (c >= 'a' && c <= 'z'))
        throw FormatError("digit file: invalid digit character");
      f.push_back(std::uint8_t(d));
    }
    if (in.eof()) throw FormatError("digit file: missing trailing newline");
  }
  if (f.size() != n) throw FormatError("digit file: digit count does not match fraclen");
  if (std::getline(in, line) && !line.empty()) throw FormatError("digit file: trailing data");
  return DigitExpansion(unsigned(base), sign == "-" ? -1 : 1, ip, std::move(f));
}

void write_digit_file(const std::string& path, const DigitExpansion& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_digits(out, x);
  if (!out) throw FormatError("write failed for " + path);
}

DigitExpansion read_digit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return read_digits(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string digit_string(const DigitExpansion& x) {
  std::string s(x.frac_len(), '0');
  for (std::size_t u = 0; u < s.size(); ++u) s[u] = digit_char(x.digits()[u]);
  return s;
}

DigitExpansion from_digit_string(unsigned base, const std::string& frac, BigInt int_part, int sign) {
  check_base(base);
  std::vector<std::uint8_t> f(frac.size());
  for (std::size_t u = 0; u < frac.size(); ++u) {
    int d = char_digit(frac[u]);
    if (d < 0 || unsigned(d) >= base) throw PreconditionError("digit out of range for base");
    f[u] = std::uint8_t(d);
  }
  return DigitExpansion(base, sign, std::move(int_part), std::move(f));
}

}  // namespace dioph
