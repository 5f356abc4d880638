#include "dioph/bigint.hpp"

#include <cmath>
#include <cstdint>

namespace dioph {

std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

long double log_abs(const BigInt& x) {
  if (x == 0) throw PreconditionError("log_abs: zero argument");
  const std::size_t bits = bit_length(x);
  if (bits <= 64) {
    BigInt a = abs(x);
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, a.get_mpz_t());
    return std::log(static_cast<long double>(v));
  }
  const std::size_t shift = bits - 64;
  BigInt top;
  mpz_tdiv_q_2exp(top.get_mpz_t(), x.get_mpz_t(), shift);
  mpz_abs(top.get_mpz_t(), top.get_mpz_t());
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, top.get_mpz_t());
  return std::log(static_cast<long double>(v)) +
         static_cast<long double>(shift) * std::log(2.0L);
}

long double log_ratio(const BigInt& num, const BigInt& den) { return log_abs(num) - log_abs(den); }

BigInt pow_int(unsigned long base, std::size_t exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

std::size_t valuation(const BigInt& x, unsigned long base) {
  if (x == 0) throw PreconditionError("valuation: zero argument");
  BigInt q = x, r;
  std::size_t e = 0;
  for (;;) {
    const unsigned long rem = mpz_tdiv_q_ui(r.get_mpz_t(), q.get_mpz_t(), base);
    if (rem != 0) return e;
    q.swap(r);
    ++e;
  }
}

}  // namespace dioph
