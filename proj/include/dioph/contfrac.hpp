#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dioph/digits.hpp"

namespace dioph {

struct ContinuedFraction {
  std::vector<BigInt> a;     // a_0; a_1..a_K
  std::vector<BigInt> p, q;  // convergents p_k/q_k, k = 0..K

  std::size_t K() const { return a.empty() ? 0 : a.size() - 1; }
};

// Canonical expansion (last quotient >= 2 when K >= 1) with its convergent table.
ContinuedFraction cf_of_rational(const Rational& r);
ContinuedFraction cf_from_quotients(std::vector<BigInt> a);
Rational cf_value(const ContinuedFraction& cf);
std::string format_cf(const ContinuedFraction& cf);

struct QuotientRun {
  std::vector<BigInt> quotients;
  BigInt a, b;  // remaining pair: original num/den = [quotients..., a/b]
};

// Partial quotients of num/den (num > den > 0) until bits(b) <= stop_bits or b == 0.
// Subquadratic; the quotient list matches the plain Euclidean algorithm exactly.
QuotientRun partial_quotients(const BigInt& num, const BigInt& den, std::size_t stop_bits = 0);

struct TauEntry {
  std::size_t k = 0;
  long double log_q = 0;  // ln q_k
  long double tau = 0;    // -ln|x - p_k/q_k| / ln q_k
};

struct EstimatorOptions {
  double trust = 0.5;
  // Convergents with q_k < base^floor_digits are not used for mu_hat; default ceil(sqrt N).
  std::optional<std::size_t> floor_digits;
};

struct ExponentEstimate {
  std::vector<TauEntry> tau;  // k >= 1 with q_{k+1} <= base^floor(trust N)
  double mu_hat = 2.0;
  std::size_t mu_k = 0;       // k attaining mu_hat
  bool rational_like = false;
  bool insufficient_depth = false;
  std::size_t trust_k = 0;    // largest trusted k
  std::size_t trusted_count = 0;
  std::size_t floor_digits = 0;
  double theta_b_hat = 1.0;
  std::size_t theta_at = 0;   // N0 of the run giving theta_b_hat
};

ExponentEstimate tau_sequence(const DigitExpansion& x, const EstimatorOptions& opt = {});
ExponentEstimate estimate_theta_b(const DigitExpansion& x, const EstimatorOptions& opt = {1.0, {}});

void write_estimate(std::ostream& out, const ExponentEstimate& e, bool theta);

struct LegendrePartition {
  std::vector<Rational> convergents;
  std::vector<Rational> non_convergents;
};
// Throws ConsistencyError if a non-convergent candidate beats 1/(2q^2).
LegendrePartition legendre_filter(const Rational& x, const std::vector<Rational>& candidates);
// Whether p/q (reduced) is a convergent of the number with quotients xa.
bool is_convergent_of(const std::vector<BigInt>& xa, const Rational& c);

struct KpReport {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;            // q_k = 1
  std::optional<std::size_t> fail_k;
  double min_lower_margin = 0;        // ln(2 q_k q_{k+1} d) > 0
  double min_upper_margin = 0;        // -ln(q_k q_{k+1} d) > 0
};
// q_k^{tau_k-1}/2 < q_{k+1} < q_k^{tau_k-1} for k = 1..K-2. Requires K >= 3.
KpReport kp_bounds_check(const ContinuedFraction& cf, const Rational& x);

}  // namespace dioph
