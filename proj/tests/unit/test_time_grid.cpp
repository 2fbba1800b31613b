#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dualstop/time_grid.hpp"

using dualstop::TimeGrid;

TEST_CASE("uniform partition") {
  const TimeGrid g = TimeGrid::build(0.5, 4);
  const std::vector<double> expected{0.0, 0.125, 0.25, 0.375, 0.5};
  REQUIRE(g.size() == expected.size());
  for (std::size_t l = 0; l < expected.size(); ++l) CHECK(g.time(l) == expected[l]);
  CHECK(g.steps() == 4);
  CHECK(g.maturity() == 0.5);
  CHECK(g.step(1) == doctest::Approx(0.125));
}

TEST_CASE("dates already on the uniform grid are merged") {
  const std::vector<double> dates{1.0, 2.0};
  const TimeGrid g = TimeGrid::build(3.0, 9, dates);
  CHECK(g.size() == 10);
  REQUIRE(g.index_of(1.0));
  REQUIRE(g.index_of(2.0));
  CHECK(g.time(*g.index_of(1.0)) == 1.0);
  CHECK(g.time(*g.index_of(2.0)) == 2.0);
}

TEST_CASE("max-call exercise dates on a 200 step grid") {
  std::vector<double> dates;
  for (int i = 1; i <= 9; ++i) dates.push_back(3.0 * i / 9.0);
  const TimeGrid g = TimeGrid::build(3.0, 200, dates);
  CHECK(g.size() <= 210);
  CHECK(g.size() >= 201);
  for (double t : dates) {
    const auto k = g.index_of(t);
    REQUIRE(k);
    CHECK(g.time(*k) == t);
  }
  for (std::size_t l = 0; l + 1 < g.size(); ++l) CHECK(g.time(l) < g.time(l + 1));
  CHECK(g.time(0) == 0.0);
  CHECK(g.maturity() == 3.0);
}

TEST_CASE("off-grid date is inserted") {
  const std::vector<double> dates{0.1};
  const TimeGrid g = TimeGrid::build(0.5, 4, dates);
  CHECK(g.size() == 6);
  CHECK(g.index_of(0.1) == std::optional<std::size_t>(1));
  CHECK_FALSE(g.index_of(0.2));
}

TEST_CASE("endpoint dates do not duplicate nodes") {
  const std::vector<double> dates{0.0, 0.5, 0.25};
  const TimeGrid g = TimeGrid::build(0.5, 4, dates);
  CHECK(g.size() == 5);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(TimeGrid::build(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::build(-1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::build(1.0, 0), std::invalid_argument);
  const std::vector<double> outside{1.5};
  CHECK_THROWS_AS(TimeGrid::build(1.0, 4, outside), std::invalid_argument);
  const std::vector<double> negative{-0.1};
  CHECK_THROWS_AS(TimeGrid::build(1.0, 4, negative), std::invalid_argument);
}
