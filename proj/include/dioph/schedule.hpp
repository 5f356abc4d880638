#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "dioph/digits.hpp"

namespace dioph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ScheduleKind { exponent, factorial, cantor_adjusted };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& s);

struct Interval {
  std::size_t j = 0;
  std::size_t g = 0;
  std::size_t h = 0;
  std::size_t owner = 0;  // residue class i(j)
  bool partial = false;   // closed by the digit budget, not by the recursion
  // cantor_adjusted only: H_j = [H_lo, H_hi] (empty when H_lo > H_hi), e_j = 0 if none.
  std::size_t H_lo = 0;
  std::size_t H_hi = 0;
  std::size_t e = 0;

  std::size_t H_size() const { return H_hi >= H_lo ? H_hi - H_lo + 1 : 0; }
};

struct IntervalSchedule {
  std::size_t n = 1;
  std::vector<double> lambdas;
  ScheduleKind kind = ScheduleKind::exponent;
  double epsilon = 0;
  std::vector<Interval> intervals;  // consecutive j, partition of {1..end()}

  std::size_t first_j() const { return intervals.front().j; }
  std::size_t last_j() const { return intervals.back().j; }
  const Interval& at(std::size_t j) const { return intervals.at(j - first_j()); }
  bool has(std::size_t j) const { return !intervals.empty() && j >= first_j() && j <= last_j(); }
  std::size_t end() const { return intervals.empty() ? 0 : intervals.back().h; }
  // Number of intervals closed by the recursion (j >= 1).
  std::size_t complete_count() const;
};

// h_0 = h0; h_j = ceil(lambda_{j mod n} h_{j-1}), or (j+1) h_{j-1} for an infinite lambda.
IntervalSchedule build_schedule(const std::vector<double>& lambdas, std::size_t digit_budget,
                                std::size_t h0 = 2);

// Boundaries b_j = j! + shift (shift applied for j >= 2); intervals I_1..I_{J-1}.
IntervalSchedule factorial_schedule(std::size_t J, std::size_t n = 2, std::size_t shift = 0);

// Largest J with (J+1)! + shift <= digit_budget + 1, i.e. I_1..I_J fit in the budget.
std::size_t factorial_blocks_within(std::size_t digit_budget, std::size_t shift = 0);

IntervalSchedule cantor_adjusted_schedule(const DigitExpansion& xi, const std::vector<double>& lambdas,
                                          const std::vector<unsigned>& W, double epsilon,
                                          std::size_t digit_budget, std::size_t h0 = 2);

// Appends the positions (end(), last] as a partial interval owned by the next residue class.
void close_with_partial(IntervalSchedule& s, std::size_t last);

std::string format_lambda(double v);
double parse_lambda(const std::string& s);

void write_schedule(std::ostream& out, const IntervalSchedule& s);
IntervalSchedule read_schedule(std::istream& in);

}  // namespace dioph
