#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dioph/digits.hpp"

namespace dioph {

struct GridCount {
  unsigned base = 3;
  std::vector<std::size_t> depths;
  std::vector<BigInt> counts;  // occupied base^-m boxes per depth
  unsigned ambient_dim = 1;
  bool sampled = false;        // finite point cloud: no dimension inference
};

// |W|^m, or |W|^{2m} for the product C x C.
BigInt count_cantor(unsigned base, const std::vector<unsigned>& W, std::size_t m, bool product = false);
GridCount cantor_grid(unsigned base, const std::vector<unsigned>& W, const std::vector<std::size_t>& depths,
                      bool product = false);

// Least-squares slope of log N(m) against m log b. Needs >= 3 depths and non-constant counts.
double estimate_dim(const GridCount& g);

// Occupied boxes of a finite cloud; each point is a tuple of coordinates (x_0, x_1, ...).
GridCount count_sampled(const std::vector<std::vector<DigitExpansion>>& points, unsigned base,
                        const std::vector<std::size_t>& depths);

// "a:b" or "a,b,c"
std::vector<std::size_t> parse_depths(const std::string& text);

void write_grid(std::ostream& out, const GridCount& g, std::optional<double> reference = {});

}  // namespace dioph
