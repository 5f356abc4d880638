#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dioph/schedule.hpp"

using namespace dioph;

namespace {

std::vector<std::size_t> hs(const IntervalSchedule& s) {
  std::vector<std::size_t> v;
  for (const auto& iv : s.intervals) v.push_back(iv.h);
  return v;
}

void check_partition(const IntervalSchedule& s) {
  std::size_t next = 1;
  for (const auto& iv : s.intervals) {
    CHECK(iv.g == next);
    CHECK(iv.g <= iv.h);
    CHECK(iv.owner < s.n);
    next = iv.h + 1;
  }
}

}  // namespace

TEST_CASE("exponent schedule examples") {
  IntervalSchedule s = build_schedule({3, 3}, 200);
  CHECK(hs(s) == std::vector<std::size_t>{2, 6, 18, 54, 162});
  CHECK(s.at(1).g == 3);
  CHECK(s.at(4).g == 55);
  CHECK(s.at(0).g == 1);
  check_partition(s);

  s = build_schedule({2}, 10);
  CHECK(hs(s) == std::vector<std::size_t>{2, 4, 8});
  CHECK(double(s.at(1).h) / s.at(1).g == doctest::Approx(4.0 / 3));
  CHECK(double(s.at(2).h) / s.at(2).g == doctest::Approx(8.0 / 5));

  // infinite lambda: h_j = (j+1) h_{j-1}, so I_1 is never empty
  s = build_schedule({kInfinity}, 50);
  CHECK(hs(s) == std::vector<std::size_t>{2, 4, 12, 48});
  check_partition(s);

  s = build_schedule({6, 6}, 1000000);
  CHECK(hs(s) == std::vector<std::size_t>{2, 12, 72, 432, 2592, 15552, 93312, 559872});

  // lambda = 1 still advances
  s = build_schedule({1, 1}, 10);
  CHECK(hs(s) == std::vector<std::size_t>{2, 3, 4, 5, 6, 7, 8, 9, 10});
  // 4.7 * 10 must not round up to 48
  s = build_schedule({4.7}, 100, 10);
  CHECK(s.at(1).h == 47);

  CHECK_THROWS_AS(build_schedule({0.5}, 100), PreconditionError);
  CHECK_THROWS_AS(build_schedule({5}, 2), PreconditionError);
  CHECK_THROWS_AS(build_schedule({5}, 9), PreconditionError);
}

TEST_CASE("exponent schedule properties") {
  for (double a : {2.0, 2.5, 3.3, 5.0, 7.25})
    for (double b : {2.0, 4.1, 6.0}) {
      const IntervalSchedule s = build_schedule({a, b}, 10000000);
      check_partition(s);
      for (const auto& iv : s.intervals) {
        if (iv.j == 0) continue;
        const double prev = double(s.at(iv.j - 1).h);
        const double lam = s.lambdas[iv.j % 2];
        CHECK(iv.owner == iv.j % 2);
        CHECK(std::fabs(double(iv.h) / prev - lam) <= 1.0 / prev + 1e-12);
        if (s.has(iv.j + 2) && iv.g > 1000) {
          const double ratio = double(s.at(iv.j + 2).g) / double(iv.g);
          CHECK(std::fabs(ratio / (a * b) - 1) <= 4.0 / double(iv.g));
        }
      }
    }
}

TEST_CASE("factorial schedule") {
  IntervalSchedule s = factorial_schedule(5);
  REQUIRE(s.intervals.size() == 4);
  std::vector<std::size_t> gs;
  for (const auto& iv : s.intervals) gs.push_back(iv.g);
  CHECK(gs == std::vector<std::size_t>{1, 2, 6, 24});
  CHECK(s.intervals.back().h == 119);
  s = factorial_schedule(3);
  REQUIRE(s.intervals.size() == 2);
  CHECK((s.at(1).g == 1 && s.at(1).h == 1));
  CHECK((s.at(2).g == 2 && s.at(2).h == 5));
  check_partition(s);
  CHECK_THROWS_AS(factorial_schedule(1), PreconditionError);
  CHECK_THROWS_AS(factorial_schedule(40), PreconditionError);
  CHECK(factorial_blocks_within(5040) == 6);
  CHECK(factorial_blocks_within(5039) == 6);  // blocks end at (J+1)! - 1
  CHECK(factorial_blocks_within(5038) == 5);
  // b_{j+1}/b_j = j+1 grows without bound
  s = factorial_schedule(9);
  for (std::size_t j = 2; j + 1 < 9; ++j)
    CHECK(double(s.at(j + 1).g) / double(s.at(j).g) == doctest::Approx(double(j + 1)));
}

TEST_CASE("close_with_partial") {
  IntervalSchedule s = build_schedule({3, 3}, 200);
  close_with_partial(s, 200);
  CHECK(s.intervals.back().partial);
  CHECK(s.intervals.back().g == 163);
  CHECK(s.intervals.back().h == 200);
  CHECK(s.complete_count() == 4);
  close_with_partial(s, 200);
  CHECK(s.intervals.size() == 6);
}

TEST_CASE("cantor adjusted schedule") {
  const DigitExpansion twos(3, 1, 0, std::vector<std::uint8_t>(20000, 2));
  IntervalSchedule s = cantor_adjusted_schedule(twos, {5, 5}, {0, 2}, 0.1, 20000);
  const IntervalSchedule plain = build_schedule({5, 5}, 20000);
  CHECK(hs(s) == hs(plain));
  for (const auto& iv : s.intervals) {
    if (iv.j == 0) continue;
    CHECK(iv.H_lo == iv.h - std::size_t(std::floor(0.1 * double(iv.h))));
    CHECK(iv.H_hi == iv.h - 1);
    CHECK(iv.e == (iv.H_size() ? iv.h - 1 : 0));
  }

  std::vector<std::uint8_t> alt(20000);
  for (std::size_t u = 0; u < alt.size(); ++u) alt[u] = u % 2 == 0 ? 2 : 0;  // 0.2020...
  const DigitExpansion a(3, 1, 0, alt);
  s = cantor_adjusted_schedule(a, {5, 5}, {0, 2}, 0.1, 20000);
  check_partition(s);
  for (const auto& iv : s.intervals) {
    if (iv.j == 0) continue;
    const std::size_t target = std::size_t(std::ceil(5.0 * double(s.at(iv.j - 1).h) - 1e-9));
    CHECK(a.digit_at(iv.h) == 2);
    CHECK(iv.h == (target % 2 == 1 ? target : target - 1));
    if (iv.e) CHECK(a.digit_at(iv.e) != 0);
  }

  std::vector<std::uint8_t> gap(2000, 2);
  for (std::size_t u = 30; u < 1000; ++u) gap[u] = 0;
  CHECK_THROWS_AS(cantor_adjusted_schedule(DigitExpansion(3, 1, 0, gap), {5, 5}, {0, 2}, 0.1, 2000),
                  PreconditionError);
  CHECK_THROWS_AS(cantor_adjusted_schedule(twos, {5, 5}, {2}, 0.1, 2000), PreconditionError);
  CHECK_THROWS_AS(cantor_adjusted_schedule(twos, {5, 5}, {0, 1}, 0.1, 2000), PreconditionError);
}

TEST_CASE("schedule text round trip") {
  IntervalSchedule s = cantor_adjusted_schedule(DigitExpansion(3, 1, 0, std::vector<std::uint8_t>(5000, 2)),
                                                {5, 4.75}, {0, 2}, 0.1, 5000);
  close_with_partial(s, 5000);
  std::stringstream io;
  write_schedule(io, s);
  const IntervalSchedule t = read_schedule(io);
  CHECK(t.kind == s.kind);
  CHECK(t.lambdas == s.lambdas);
  CHECK(t.epsilon == s.epsilon);
  REQUIRE(t.intervals.size() == s.intervals.size());
  for (std::size_t k = 0; k < s.intervals.size(); ++k) {
    CHECK(t.intervals[k].h == s.intervals[k].h);
    CHECK(t.intervals[k].e == s.intervals[k].e);
    CHECK(t.intervals[k].H_lo == s.intervals[k].H_lo);
    CHECK(t.intervals[k].partial == s.intervals[k].partial);
  }
  std::istringstream inf("schedule kind=exponent n=1 lambdas=inf epsilon=0\n0 1 2 0\n1 3 4 0\nend-schedule\n");
  CHECK(std::isinf(read_schedule(inf).lambdas[0]));
  std::istringstream gapped("schedule kind=exponent n=1 lambdas=2 epsilon=0\n0 1 2 0\n1 4 8 0\nend-schedule\n");
  CHECK_THROWS_AS(read_schedule(gapped), FormatError);
  std::istringstream bad("schedule kind=exponent n=1 lambdas=2 epsilon=0\n0 1 2 0 e=x\nend-schedule\n");
  CHECK_THROWS_AS(read_schedule(bad), FormatError);
  CHECK(format_lambda(4.5) == "4.5");
  CHECK(std::isinf(parse_lambda("inf")));
  CHECK_THROWS_AS(parse_lambda("4.5x"), PreconditionError);
}
