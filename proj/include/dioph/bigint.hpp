#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dioph {

using BigInt = mpz_class;

/// Precondition violated by a caller-supplied argument.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed (a bug, or a truncation-trust breach).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed file or serialized text.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of significant bits of |x|; 0 for x == 0.
std::size_t bit_length(const BigInt& x);

// Natural log of |x| from the bit length plus the leading 64 bits.
// x must be nonzero.
long double log_abs(const BigInt& x);

// ln(|num| / |den|).
long double log_ratio(const BigInt& num, const BigInt& den);

BigInt pow_int(unsigned long base, std::size_t exponent);

// Largest e with base^e | x (x != 0).
std::size_t valuation(const BigInt& x, unsigned long base);

}  // namespace dioph
