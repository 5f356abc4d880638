#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dioph/digits.hpp"
#include "dioph/schedule.hpp"

namespace dioph {

enum class Mode { erdos, liouville_n, exponent_n, base_restricted, sum, cantor };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct Correction {
  std::size_t j = 0;
  unsigned a = 0;
  friend bool operator==(const Correction&, const Correction&) = default;
};

// Component `component` is approximated by cutting at position `cut`; its digits on
// (cut, block_end) vanish by construction.
struct DesignedCut {
  std::size_t component = 0;
  std::size_t j = 0;
  std::size_t cut = 0;
  std::size_t block_end = 0;
  friend bool operator==(const DesignedCut&, const DesignedCut&) = default;
};

struct Repair {
  std::size_t j = 0;    // interval whose e_j was swapped
  std::size_t pos = 0;
  friend bool operator==(const Repair&, const Repair&) = default;
};

// schedule.intervals[k].owner is the component whose digits vanish on that interval.
struct Decomposition {
  Mode mode = Mode::exponent_n;
  unsigned base = 5;
  std::vector<DigitExpansion> components;
  std::vector<DigitExpansion> targets;
  IntervalSchedule schedule;
  std::vector<Correction> corrections;
  std::vector<DesignedCut> designed;
  std::vector<double> lambdas;
  std::vector<double> mus;
  std::vector<unsigned> digit_set;
  double epsilon = 0;
  std::size_t budget = 0;
  std::size_t jitter = 0;  // 1 when the schedule was shifted to avoid a rational component
  std::vector<Repair> repairs;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, std::string>> attestations;
};

// (5 + sqrt 17)/2, the larger root of l^2 - 5l + 2.
double sum_threshold();
// Exact test lambda > (5 + sqrt 17)/2 on the binary value of lambda.
bool exceeds_sum_threshold(double lambda);

Decomposition erdos_split(const DigitExpansion& xi, std::size_t J);
Decomposition liouville_nsplit(const std::vector<DigitExpansion>& xis, std::size_t J);
Decomposition exponent_nsplit(const std::vector<DigitExpansion>& xis, const std::vector<double>& lambdas,
                              const std::vector<double>& mus, std::size_t digit_budget);
Decomposition base_restricted_nsplit(const std::vector<DigitExpansion>& xis,
                                     const std::vector<double>& lambdas, unsigned base,
                                     std::size_t digit_budget);
Decomposition sum_split(const DigitExpansion& xi, double lambda0, double lambda1, std::size_t digit_budget,
                        bool attest_mu = true);
Decomposition cantor_sum_split(const DigitExpansion& xi, double lambda0, double lambda1, unsigned base,
                               const std::vector<unsigned>& W, double epsilon, std::size_t digit_budget);

struct TReport {
  std::vector<std::pair<std::string, double>> estimates;  // label -> theta_b_hat
  double max_estimate = 1.0;
  bool consistent = true;
};
TReport check_T_membership(const std::vector<DigitExpansion>& xis, unsigned base, std::size_t depth,
                           double tolerance = 0.05);

}  // namespace dioph
