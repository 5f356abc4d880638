#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dioph/boxdim.hpp"

using namespace dioph;

TEST_CASE("closed-form counts") {
  CHECK(count_cantor(3, {0, 2}, 5) == 32);
  CHECK(count_cantor(3, {0, 2}, 5, true) == 1024);
  CHECK(count_cantor(3, {0, 1, 2}, 3) == 27);
  CHECK(count_cantor(10, {1, 1, 3}, 4) == 16);  // duplicates collapse
  CHECK_THROWS_AS(count_cantor(2, {0}, 3), PreconditionError);
  CHECK_THROWS_AS(count_cantor(3, {}, 3), PreconditionError);
  CHECK_THROWS_AS(count_cantor(3, {0, 3}, 3), PreconditionError);
  CHECK_THROWS_AS(count_cantor(3, {0, 2}, 0), PreconditionError);
}

TEST_CASE("slopes") {
  const auto depths = parse_depths("4:12");
  REQUIRE(depths.size() == 9);
  const double ref = std::log(2.0) / std::log(3.0);
  const double s = estimate_dim(cantor_grid(3, {0, 2}, depths));
  CHECK(std::abs(s - ref) < 1e-9);
  const double p = estimate_dim(cantor_grid(3, {0, 2}, depths, true));
  CHECK(std::abs(p - 2 * s) < 1e-12);
  CHECK(std::abs(estimate_dim(cantor_grid(7, {0, 1, 2, 3, 4, 5, 6}, depths)) - 1) < 1e-12);
  CHECK(std::abs(estimate_dim(cantor_grid(10, {0, 3, 9}, parse_depths("1,5,9,30"))) -
                 std::log(3.0) / std::log(10.0)) < 1e-9);
  CHECK_THROWS_AS(estimate_dim(cantor_grid(3, {0, 2}, {4, 5})), PreconditionError);
  CHECK_THROWS_AS(estimate_dim(cantor_grid(3, {1}, depths)), PreconditionError);
}

TEST_CASE("parse_depths") {
  CHECK(parse_depths("3:5") == std::vector<std::size_t>{3, 4, 5});
  CHECK(parse_depths("2,8,4") == std::vector<std::size_t>{2, 8, 4});
  CHECK_THROWS_AS(parse_depths("5:3"), PreconditionError);
  CHECK_THROWS_AS(parse_depths("a:b"), PreconditionError);
  CHECK_THROWS_AS(parse_depths(""), PreconditionError);
}

TEST_CASE("sampled counts") {
  const DigitExpansion x = random_expansion(3, 50, 1), y = random_expansion(3, 50, 2);
  GridCount one = count_sampled({{x, y}}, 3, {1, 5, 20});
  CHECK(one.sampled);
  CHECK(one.ambient_dim == 2);
  for (const auto& c : one.counts) CHECK(c == 1);
  // duplicates share a box
  GridCount dup = count_sampled({{x, y}, {x, y}, {y, x}}, 3, {10});
  CHECK(dup.counts.front() == 2);
  // points agreeing to depth m but not beyond
  const DigitExpansion a = from_digit_string(3, "0120"), b = from_digit_string(3, "0121");
  GridCount ab = count_sampled({{a}, {b}}, 3, {3, 4});
  CHECK(ab.counts == std::vector<BigInt>{1, 2});
  CHECK_THROWS_AS(count_sampled({{a}}, 3, {5}), PreconditionError);
  CHECK_THROWS_AS(count_sampled({{a}, {a, b}}, 3, {2}), PreconditionError);
  CHECK_THROWS_AS(count_sampled({}, 3, {2}), PreconditionError);

  std::ostringstream s;
  write_grid(s, ab);
  CHECK(s.str().find("no dimension inference") != std::string::npos);
  CHECK(s.str().find("slope=") == std::string::npos);
}

TEST_CASE("grid output") {
  std::ostringstream s;
  write_grid(s, cantor_grid(3, {0, 2}, {1, 2, 3}), std::log(2.0) / std::log(3.0));
  const std::string t = s.str();
  CHECK(t.find("1 2\n2 4\n3 8\n") != std::string::npos);
  CHECK(t.find("slope=0.630929753571") != std::string::npos);
  CHECK(t.find("reference=0.630929753571") != std::string::npos);
}
