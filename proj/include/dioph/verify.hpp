#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dioph/contfrac.hpp"
#include "dioph/decompose.hpp"

namespace dioph {

struct Tolerances {
  double window = 0.15;         // exponent windows and designed tau
  double stray = 0.25;          // strays need tau > 2 + stray; limit is the window upper end
  double trust = 0.5;
  std::size_t designed_min_cut = 100;
  std::optional<std::size_t> floor_digits;  // default ceil(sqrt N)
  unsigned threads = 0;         // 0: DIOPH_THREADS, else hardware concurrency
};

struct Check {
  std::string name;
  bool pass = true;
  bool mandatory = true;
  double margin = 0;
  std::string location;
};

struct MuWindow {
  std::size_t component = 0;
  double lower = 0, upper = 0;
  double value = 0;     // mu_hat, or theta_b_hat in base-restricted mode
  bool theta = false;
};

struct StrayConvergent {
  std::size_t component = 0;
  std::size_t k = 0;
  double log_q = 0;
  double tau = 0;
  double limit = 0;
  bool ok = true;
};

struct DesignedResult {
  DesignedCut cut;
  std::size_t effective_end = 0;  // block_end, or the repaired position
  double margin_digits = 0;       // log_b(bound / error)
  double tau = 0;                 // against q = b^cut
  double tau_reduced = 0;         // against q / gcd(p, q)
  double deflation_digits = 0;    // log_b gcd(p, b^cut)
  double log_q = 0;               // ln of the reduced denominator
  bool ok = true;
};

struct VerificationReport {
  std::vector<std::string> header;
  std::vector<Check> checks;
  std::vector<MuWindow> mu_windows;
  std::vector<StrayConvergent> stray;
  std::vector<DesignedResult> designed;
  std::vector<ExponentEstimate> profiles;
  bool advisory_only = false;  // exponent section demoted (fewer than 4 intervals)

  bool pass() const;
  const Check* find(const std::string& name) const;
};

VerificationReport verify(const Decomposition& d, const Tolerances& tol = {});
void write_report(std::ostream& out, const VerificationReport& r);

// Thread cap from DIOPH_THREADS (>= 1), falling back to the hardware count.
unsigned thread_cap();

}  // namespace dioph
