#include <doctest.h>

#include <random>
#include <sstream>

#include "dioph/digits.hpp"

using namespace dioph;

namespace {

// Positional evaluation, independent of the library's conversion code.
mpq_class value_of(const DigitExpansion& x) {
  mpq_class v = 0, scale = 1;
  for (std::size_t u = 1; u <= x.frac_len(); ++u) {
    scale /= x.base();
    v += scale * x.digit_at(u);
  }
  v += mpq_class(x.int_part());
  return x.sign() < 0 ? mpq_class(-v) : v;
}

// Schoolbook long division of |num|/den.
std::string long_division(mpz_class num, const mpz_class& den, unsigned base, std::size_t n) {
  num = abs(num);
  mpz_class r = num % den;
  std::string s;
  for (std::size_t k = 0; k < n; ++k) {
    r *= base;
    mpz_class d = r / den;
    r -= d * den;
    s += "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"[d.get_ui()];
  }
  return s;
}

DigitExpansion random_signed(std::mt19937_64& rng, unsigned base) {
  const std::size_t n = rng() % 30;
  std::vector<std::uint8_t> f(n);
  for (auto& d : f) d = std::uint8_t(rng() % base);
  const int sign = rng() % 2 ? 1 : -1;
  return DigitExpansion(base, sign, BigInt(static_cast<unsigned long>(rng() % 5)), f);
}

}  // namespace

TEST_CASE("from_rational examples") {
  CHECK(digit_string(from_rational(Rational(1, 4), 10, 3)) == "250");
  CHECK(digit_string(from_rational(Rational(1, 3), 10, 4)) == "3333");
  DigitExpansion pi = from_rational(Rational(355, 113), 10, 6);
  CHECK(pi.int_part() == 3);
  CHECK(digit_string(pi) == "141592");
  CHECK(digit_string(from_rational(Rational(-7, 3), 10, 3)) == "333");
  CHECK(from_rational(Rational(-7, 3), 10, 3).sign() == -1);
  CHECK_THROWS_AS(Rational(1, 0), PreconditionError);
}

TEST_CASE("from_rational matches long division") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 500; ++t) {
    const unsigned base = 2 + rng() % 35;
    mpz_class num = mpz_class(static_cast<unsigned long>(rng() % 1000000)) - 500000;
    mpz_class den = 1 + static_cast<unsigned long>(rng() % 100000);
    const std::size_t n = rng() % 40;
    DigitExpansion x = from_rational(Rational(num, den), base, n);
    CHECK(digit_string(x) == long_division(num, den, base, n));
    CHECK(x.int_part() == mpz_class(abs(num) / den));
  }
}

TEST_CASE("to_rational_truncation") {
  auto t = to_rational_truncation(from_digit_string(10, "123"), 2);
  CHECK(t.value == Rational(3, 25));
  CHECK(t.last_digit_nonzero);
  t = to_rational_truncation(from_digit_string(10, "120"), 3);
  CHECK(t.value == Rational(3, 25));
  CHECK_FALSE(t.last_digit_nonzero);
  t = to_rational_truncation(from_digit_string(5, "4302"), 4);
  CHECK(t.value == Rational(577, 625));
  CHECK_THROWS_AS(to_rational_truncation(from_digit_string(5, "4302"), 5), PreconditionError);
}

TEST_CASE("round trip through terminating rationals") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const unsigned base = 2 + rng() % 15;
    const std::size_t e = rng() % 12;
    const mpz_class den = pow_int(base, e);
    const mpz_class num = mpz_class(static_cast<unsigned long>(rng())) % (3 * den + 1);
    const Rational r(num, den);
    const DigitExpansion x = from_rational(r, base, 12);
    CHECK(to_rational_truncation(x, 12).value == r);
    CHECK(to_rational(x) == r);
  }
}

TEST_CASE("add and sub examples") {
  auto d10 = [](const char* s) { return from_digit_string(10, s); };
  CHECK(digit_string(add(d10("499"), d10("001"))) == "500");
  CHECK(digit_string(sub(d10("500"), d10("001"))) == "499");
  DigitExpansion s = add(from_digit_string(5, "444"), from_digit_string(5, "444"));
  CHECK(s.int_part() == 1);
  CHECK(digit_string(s) == "443");
  CHECK(value_of(s) == mpq_class(248, 125));
  CHECK_THROWS_AS(add(d10("1"), from_digit_string(5, "1")), PreconditionError);
  DigitExpansion neg = sub(d10("1"), d10("2"));
  CHECK(neg.sign() == -1);
  CHECK(digit_string(neg) == "1");
  CHECK(sub(d10("25"), d10("25")).sign() == 1);
}

TEST_CASE("add and sub agree with rational arithmetic") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10000; ++t) {
    const unsigned base = 2 + rng() % 35;
    const DigitExpansion x = random_signed(rng, base), y = random_signed(rng, base);
    const DigitExpansion s = add(x, y), d = sub(x, y);
    REQUIRE(s.frac_len() == std::max(x.frac_len(), y.frac_len()));
    CHECK(value_of(s) == value_of(x) + value_of(y));
    CHECK(value_of(d) == value_of(x) - value_of(y));
    CHECK(value_of(sub(s, y)) == value_of(x));
    if (s.is_zero()) CHECK(s.sign() == 1);
  }
}

TEST_CASE("frac_part") {
  DigitExpansion x = from_digit_string(10, "25", 3, -1);  // -3.25
  DigitExpansion f = frac_part(x);
  CHECK(value_of(f) == mpq_class(3, 4));
  CHECK(value_of(frac_part(from_digit_string(10, "25", 3))) == mpq_class(1, 4));
  CHECK(frac_part(from_digit_string(10, "00", 3, -1)).is_zero());
}

TEST_CASE("run_scan") {
  auto runs = run_scan(from_digit_string(5, "30041"), 1, 5);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0] == Run{2, 2, RunKind::zero});
  CHECK(runs[1] == Run{4, 1, RunKind::top});
  runs = run_scan(DigitExpansion(7, 1, 0, std::vector<std::uint8_t>(40, 0)), 1, 40);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0] == Run{1, 40, RunKind::zero});
  runs = run_scan(factorial_series(5, 130), 1, 130);
  bool found = false;
  for (const auto& r : runs) found = found || (r == Run{25, 95, RunKind::zero});
  CHECK(found);
  CHECK_THROWS_AS(run_scan(from_digit_string(5, "30041"), 0, 5), PreconditionError);
  CHECK_THROWS_AS(from_digit_string(5, "30041").digit_at(6), PreconditionError);
}

TEST_CASE("run_scan partitions into maximal ordered runs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const unsigned base = 2 + rng() % 4;
    const std::size_t n = 1 + rng() % 60;
    const DigitExpansion x = random_expansion(base, n, rng());
    const auto runs = run_scan(x, 1, n);
    std::size_t last_end = 0;
    for (const auto& r : runs) {
      CHECK(r.start > last_end);
      const unsigned v = r.kind == RunKind::zero ? 0 : base - 1;
      for (std::size_t u = r.start; u < r.start + r.length; ++u) CHECK(x.digit_at(u) == v);
      if (r.start > 1) CHECK(x.digit_at(r.start - 1) != v);
      if (r.start + r.length <= n) CHECK(x.digit_at(r.start + r.length) != v);
      last_end = r.start + r.length - 1;
    }
  }
}

TEST_CASE("random_expansion") {
  DigitExpansion w = random_expansion(3, 10, 1, {0, 2});
  for (std::size_t u = 1; u <= 10; ++u) CHECK((w.digit_at(u) == 0 || w.digit_at(u) == 2));
  CHECK(digit_string(random_expansion(10, 5, 7)) == digit_string(random_expansion(10, 5, 7)));
  CHECK(digit_string(random_expansion(10, 50, 7)) != digit_string(random_expansion(10, 50, 8)));
  CHECK_THROWS_AS(random_expansion(3, 10, 1, {}), PreconditionError);
  CHECK_THROWS_AS(random_expansion(3, 10, 1, {3}), PreconditionError);
}

TEST_CASE("generators") {
  // floor(sqrt(D) b^N) squared brackets D b^2N
  for (unsigned long D : {2ul, 3ul, 7ul, 10ul}) {
    const unsigned base = 5;
    const std::size_t n = 200;
    const DigitExpansion x = quadratic_expansion(D, base, n);
    const mpq_class v = value_of(x) + mpz_class(sqrt(mpz_class(D)));
    const mpq_class step(1, pow_int(base, n));
    CHECK(v * v <= D);
    CHECK((v + step) * (v + step) > D);
  }
  CHECK_THROWS_AS(quadratic_expansion(9, 5, 10), PreconditionError);
  const DigitExpansion f = factorial_series(5, 130);
  for (std::size_t u = 1; u <= 130; ++u)
    CHECK(f.digit_at(u) == ((u == 1 || u == 2 || u == 6 || u == 24 || u == 120) ? 1u : 0u));
}

TEST_CASE("parse_digit_set") {
  CHECK(parse_digit_set("2,0", 3) == std::vector<unsigned>{0, 2});
  CHECK(parse_digit_set("0,A", 12) == std::vector<unsigned>{0, 10});
  CHECK_THROWS_AS(parse_digit_set("0,3", 3), PreconditionError);
  CHECK_THROWS_AS(parse_digit_set("", 3), PreconditionError);
}

TEST_CASE("digit file format") {
  std::vector<std::uint8_t> f(2500);
  for (std::size_t u = 0; u < f.size(); ++u) f[u] = std::uint8_t(u % 36);
  const DigitExpansion x(36, -1, BigInt("123456789012345678901234567890"), f);
  std::ostringstream out;
  write_digits(out, x);
  const std::string text = out.str();
  CHECK(text.rfind("base=36\nsign=-\nint=123456789012345678901234567890\nfraclen=2500\n0123", 0) == 0);
  CHECK(text.back() == '\n');
  std::istringstream in(text);
  CHECK(read_digits(in) == x);

  auto rejects = [](const std::string& s) {
    std::istringstream is(s);
    CHECK_THROWS_AS(read_digits(is), FormatError);
  };
  rejects("base=10\nsign=+\nint=0\nfraclen=3\n123");         // no trailing newline
  rejects("base=10\nsign=+\nint=0\nfraclen=3\n12\n");        // short
  rejects("base=10\nsign=+\nint=0\nfraclen=3\n1234\n");      // long
  rejects("base=10\nsign=+\nint=0\nfraclen=3\n1A3\n");       // digit >= base
  rejects("base=16\nsign=+\nint=0\nfraclen=3\n1a3\n");       // lowercase
  rejects("base=37\nsign=+\nint=0\nfraclen=0\n");
  rejects("base=10\nsign=*\nint=0\nfraclen=0\n");
  rejects("sign=+\nbase=10\nint=0\nfraclen=0\n");
  rejects("base=10\nsign=+\nint=0\nfraclen=1025\n" + std::string(1025, '1') + "\n");
  std::istringstream ok("base=16\nsign=+\nint=0\nfraclen=3\n1A3\n");
  CHECK(digit_string(read_digits(ok)) == "1A3");
}
