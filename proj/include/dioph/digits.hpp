#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dioph/bigint.hpp"

namespace dioph {

/// Exact rational num/den with den > 0.
struct Rational {
  BigInt num{0};
  BigInt den{1};
  bool reduced = true;

  Rational() = default;
  // Throws PreconditionError on a zero denominator. The sign is moved to num.
  Rational(BigInt n, BigInt d, bool reduce = true);

  mpq_class to_mpq() const;
  static Rational from_mpq(const mpq_class& q);
  std::string str() const;
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// sign * (int_part + sum_{u=1..N} d_u base^-u), held exactly.
class DigitExpansion {
 public:
  DigitExpansion() = default;
  DigitExpansion(unsigned base, int sign, BigInt int_part, std::vector<std::uint8_t> frac);

  unsigned base() const { return base_; }
  int sign() const { return sign_; }
  const BigInt& int_part() const { return int_part_; }
  std::size_t frac_len() const { return frac_.size(); }
  const std::vector<std::uint8_t>& digits() const { return frac_; }

  // 1-based position; throws PreconditionError outside 1..N.
  unsigned digit_at(std::size_t u) const;
  bool is_zero() const;
  // Truncated or zero-padded copy with n fractional digits.
  DigitExpansion resized(std::size_t n) const;

  friend bool operator==(const DigitExpansion& a, const DigitExpansion& b) {
    return a.base_ == b.base_ && a.sign_ == b.sign_ && a.int_part_ == b.int_part_ &&
           a.frac_ == b.frac_;
  }

 private:
  unsigned base_ = 10;
  int sign_ = 1;
  BigInt int_part_{0};
  std::vector<std::uint8_t> frac_;
};

DigitExpansion from_rational(const Rational& p, unsigned base, std::size_t n_digits);

struct Truncation {
  Rational value;
  bool last_digit_nonzero = false;
};
// trunc(base^m x) / base^m, reduced. Rounds toward zero.
Truncation to_rational_truncation(const DigitExpansion& x, std::size_t m);
// Exact value of x as a reduced rational.
Rational to_rational(const DigitExpansion& x);

// Signed integer sign * (int_part * base^m + d_1..d_m) for m <= N.
BigInt scaled_truncation(const DigitExpansion& x, std::size_t m);

DigitExpansion add(const DigitExpansion& x, const DigitExpansion& y);
DigitExpansion sub(const DigitExpansion& x, const DigitExpansion& y);
DigitExpansion negate(const DigitExpansion& x);
// x - floor(x), always in [0, 1).
DigitExpansion frac_part(const DigitExpansion& x);

enum class RunKind : std::uint8_t { zero, top };

struct Run {
  std::size_t start = 0;
  std::size_t length = 0;
  RunKind kind = RunKind::zero;
  friend bool operator==(const Run&, const Run&) = default;
};
// Maximal runs of digit 0 and of digit base-1 inside positions [from, to].
std::vector<Run> run_scan(const DigitExpansion& x, std::size_t from, std::size_t to);

// Uniform digits; the second form draws from allowed_digits only (must be nonempty).
DigitExpansion random_expansion(unsigned base, std::size_t n, std::uint64_t seed);
DigitExpansion random_expansion(unsigned base, std::size_t n, std::uint64_t seed,
                                const std::vector<unsigned>& allowed_digits);

// frac(sqrt D) to n digits; D must not be a perfect square.
DigitExpansion quadratic_expansion(unsigned long D, unsigned base, std::size_t n);
// sum_{j>=1} base^{-j!} to n digits.
DigitExpansion factorial_series(unsigned base, std::size_t n);

// Parses "0,2" style digit lists.
std::vector<unsigned> parse_digit_set(const std::string& text, unsigned base);

void write_digits(std::ostream& out, const DigitExpansion& x);
DigitExpansion read_digits(std::istream& in);
void write_digit_file(const std::string& path, const DigitExpansion& x);
DigitExpansion read_digit_file(const std::string& path);

// Digit string in positional order, e.g. "30041".
std::string digit_string(const DigitExpansion& x);
DigitExpansion from_digit_string(unsigned base, const std::string& frac, BigInt int_part = 0,
                                 int sign = 1);

}  // namespace dioph
