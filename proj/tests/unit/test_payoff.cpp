#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dualstop/payoff.hpp"
#include "dualstop/time_grid.hpp"

using namespace dualstop;

namespace {

PayoffSpec spec(PayoffKind kind, double rate) {
  PayoffSpec s;
  s.kind = kind;
  s.strike = 100.0;
  s.rate = rate;
  return s;
}

}  // namespace

TEST_CASE("put_1d values") {
  const auto s = spec(PayoffKind::kPut1d, 0.06);
  const double x80[] = {80.0};
  const double x120[] = {120.0};
  CHECK(eval_payoff(s, 0.0, x80) == 20.0);
  CHECK(eval_payoff(s, 0.5, x120) == 0.0);
  CHECK(eval_payoff(s, 0.5, x80) == doctest::Approx(20.0 * std::exp(-0.03)));
}

TEST_CASE("max_call value at maturity") {
  const auto s = spec(PayoffKind::kMaxCall, 0.05);
  const double x[] = {110.0, 90.0};
  CHECK(eval_payoff(s, 3.0, x) == doctest::Approx(std::exp(-0.15) * 10.0).epsilon(1e-14));
  CHECK(eval_payoff(s, 3.0, x) == doctest::Approx(8.6071).epsilon(1e-5));
}

TEST_CASE("min_put uses the cheapest asset") {
  const auto s = spec(PayoffKind::kMinPut, 0.0);
  const double x[] = {95.0, 70.0, 130.0};
  CHECK(eval_payoff(s, 0.2, x) == 30.0);
}

TEST_CASE("dimension mismatch is an error") {
  const double one[] = {90.0};
  const double two[] = {90.0, 80.0};
  CHECK_THROWS_AS(eval_payoff(spec(PayoffKind::kPut1d, 0.0), 0.0, two), std::invalid_argument);
  CHECK_THROWS_AS(eval_payoff(spec(PayoffKind::kMinPut, 0.0), 0.0, one), std::invalid_argument);
  CHECK_THROWS_AS(eval_payoff(spec(PayoffKind::kMaxCall, 0.0), 0.0, one), std::invalid_argument);
}

TEST_CASE("monotonicity and discount consistency") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> price(50.0, 150.0);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (PayoffKind kind : {PayoffKind::kPut1d, PayoffKind::kMinPut, PayoffKind::kMaxCall}) {
    const auto s = spec(kind, 0.05);
    const std::size_t d = kind == PayoffKind::kPut1d ? 1 : 3;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(d);
      for (double& v : x) v = price(rng);
      const double t = time(rng);
      const double base = eval_payoff(s, t, x);
      CHECK(base >= 0.0);
      CHECK(base == doctest::Approx(std::exp(-0.05 * t) * eval_payoff(s, 0.0, x)).epsilon(1e-14));
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> up = x;
        up[i] += 5.0;
        const double bumped = eval_payoff(s, t, up);
        if (kind == PayoffKind::kMaxCall) {
          CHECK(bumped >= base);
        } else {
          CHECK(bumped <= base);
        }
      }
    }
  }
}

TEST_CASE("exercise indices") {
  const TimeGrid g = TimeGrid::build(0.5, 4);
  auto s = spec(PayoffKind::kPut1d, 0.06);
  CHECK(exercise_indices(s, g) == std::vector<std::size_t>{0, 1, 2, 3, 4});

  s.exercise = ExerciseSchedule::bermudan({0.0, 0.25, 0.5});
  CHECK(exercise_indices(s, g) == std::vector<std::size_t>{0, 2, 4});

  s.exercise = ExerciseSchedule::bermudan({0.1});
  CHECK_THROWS_AS(exercise_indices(s, g), std::invalid_argument);
}

TEST_CASE("max-call schedule has ten exercise indices") {
  auto s = spec(PayoffKind::kMaxCall, 0.05);
  s.exercise = ExerciseSchedule::equally_spaced(3.0, 9);
  REQUIRE(s.exercise.dates.size() == 10);
  CHECK(s.exercise.dates.front() == 0.0);
  CHECK(s.exercise.dates.back() == 3.0);
  const TimeGrid g = TimeGrid::build(3.0, 200, s.exercise.dates);
  const auto idx = exercise_indices(s, g);
  REQUIRE(idx.size() == 10);
  CHECK(idx.front() == 0);
  CHECK(idx.back() == g.steps());
  for (std::size_t k = 0; k < idx.size(); ++k) CHECK(g.time(idx[k]) == s.exercise.dates[k]);
}

TEST_CASE("spec validation") {
  auto s = spec(PayoffKind::kPut1d, 0.06);
  CHECK_NOTHROW(s.validate(0.5));
  s.strike = 0.0;
  CHECK_THROWS_AS(s.validate(0.5), std::invalid_argument);
  s = spec(PayoffKind::kPut1d, 0.06);
  s.exercise = ExerciseSchedule::bermudan({0.3, 0.2});
  CHECK_THROWS_AS(s.validate(0.5), std::invalid_argument);
  s.exercise = ExerciseSchedule::bermudan({0.2, 0.7});
  CHECK_THROWS_AS(s.validate(0.5), std::invalid_argument);
  CHECK(parse_payoff_kind("max_call") == PayoffKind::kMaxCall);
  CHECK(to_string(PayoffKind::kMinPut) == "min_put");
  CHECK_THROWS_AS(parse_payoff_kind("call"), std::invalid_argument);
}
