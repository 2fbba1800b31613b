#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dualstop/oracles.hpp"

using namespace dualstop;

namespace {

constexpr double kK = 100.0;
constexpr double kR = 0.06;
constexpr double kSigma = 0.4;
constexpr double kT = 0.5;

PayoffSpec put(double rate) {
  PayoffSpec p;
  p.strike = kK;
  p.rate = rate;
  return p;
}

// E[e^{-rT}(K - S_T)^+] by composite Simpson over the standard normal on the
// region where the payoff is positive.
double put_by_quadrature(double spot, double strike, double rate, double sigma, double t) {
  const double drift = (rate - 0.5 * sigma * sigma) * t;
  const double vol = sigma * std::sqrt(t);
  const double kink = (std::log(strike / spot) - drift) / vol;
  const double lo = -14.0;
  const std::size_t n = 200'000;
  const double h = (kink - lo) / static_cast<double>(n);
  auto f = [&](double z) {
    const double s = spot * std::exp(drift + vol * z);
    return std::max(0.0, strike - s) * std::exp(-0.5 * z * z);
  };
  double acc = f(lo) + f(kink);
  for (std::size_t i = 1; i < n; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
  }
  return std::exp(-rate * t) * acc * h / 3.0 / std::sqrt(2.0 * M_PI);
}

// Backward induction written independently of the library.
std::vector<std::vector<double>> snell(const TreeSpec& t) {
  std::vector<std::vector<double>> y(t.steps + 1);
  for (std::size_t k = t.steps + 1; k-- > 0;) {
    y[k].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      const double x = t.spot * std::pow(t.up, double(j)) * std::pow(t.down, double(k - j));
      const double g = std::exp(-t.payoff.rate * t.dt * double(k)) * std::max(0.0, t.payoff.strike - x);
      if (k == t.steps) {
        y[k][j] = g;
      } else {
        y[k][j] = std::max(g, t.probability * y[k + 1][j + 1] + (1 - t.probability) * y[k + 1][j]);
      }
    }
  }
  return y;
}

TreeSpec random_tree(std::mt19937_64& rng, std::size_t steps) {
  std::uniform_real_distribution<double> up(1.02, 1.3);
  std::uniform_real_distribution<double> down(0.75, 0.98);
  std::uniform_real_distribution<double> prob(0.2, 0.8);
  std::uniform_real_distribution<double> spot(80.0, 120.0);
  TreeSpec t;
  t.steps = steps;
  t.up = up(rng);
  t.down = down(rng);
  t.probability = prob(rng);
  t.spot = spot(rng);
  t.dt = 0.05;
  t.payoff = put(0.05);
  return t;
}

}  // namespace

TEST_CASE("CRR reproduces the reference true values") {
  const double spots[] = {80, 90, 100, 110, 120};
  const double truth[] = {21.6059, 14.9187, 9.9458, 6.4352, 4.0611};
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(crr_american_put(spots[i], kK, kR, kSigma, kT, 20'000) - truth[i]) <= 0.01);
  }
}

TEST_CASE("CRR refinement differences shrink") {
  double prev = crr_american_put(100.0, kK, kR, kSigma, kT, 1000);
  double last_gap = -1.0;
  for (std::size_t n : {2000u, 4000u, 8000u}) {
    const double cur = crr_american_put(100.0, kK, kR, kSigma, kT, n);
    const double gap = std::abs(cur - prev);
    if (last_gap >= 0.0) CHECK(gap < last_gap);
    last_gap = gap;
    prev = cur;
  }
}

TEST_CASE("CRR deterministic limit exercises immediately") {
  CHECK(crr_american_put(80.0, kK, kR, 0.0, kT, 100) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(crr_american_put(120.0, kK, kR, 0.0, kT, 100) == 0.0);
  CHECK_THROWS_AS(crr_american_put(100.0, kK, kR, kSigma, kT, 0), std::invalid_argument);
  CHECK_THROWS_AS(crr_american_put(100.0, kK, 5.0, 0.01, kT, 1), std::invalid_argument);
}

TEST_CASE("Black-Scholes put agrees with quadrature") {
  CHECK(std::abs(bs_european_put(100.0, kK, kR, kSigma, kT) -
                 put_by_quadrature(100.0, kK, kR, kSigma, kT)) <= 1e-8);
  CHECK(std::abs(bs_european_put(85.0, 90.0, 0.02, 0.25, 1.3) -
                 put_by_quadrature(85.0, 90.0, 0.02, 0.25, 1.3)) <= 1e-8);
}

TEST_CASE("Black-Scholes short maturity limit") {
  CHECK(bs_european_put(80.0, kK, kR, kSigma, 1e-12) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(bs_european_put(120.0, kK, kR, kSigma, 1e-12) == doctest::Approx(0.0));
  CHECK_THROWS_AS(bs_european_put(100.0, kK, kR, 0.0, kT), std::invalid_argument);
}

TEST_CASE("American put dominates the European put") {
  for (double s : {80.0, 90.0, 100.0, 110.0, 120.0}) {
    CHECK(crr_american_put(s, kK, kR, kSigma, kT, 2000) >= bs_european_put(s, kK, kR, kSigma, kT));
  }
}

TEST_CASE("one step tree with value only at maturity") {
  TreeSpec t;
  t.steps = 1;
  t.up = 1.1;
  t.down = 0.9;
  t.probability = 0.5;
  t.spot = 100.0;
  t.dt = 0.1;
  t.payoff = put(0.05);
  const TreeDoobReport r = tree_doob_check(t);
  CHECK(r.value == doctest::Approx(0.5 * 10.0 * std::exp(-0.005)).epsilon(1e-14));
  CHECK(r.pathwise_max_gap <= 1e-12);
  CHECK(r.paths == 2);
}

TEST_CASE("ten step CRR tree Doob martingale is pathwise optimal") {
  const TreeSpec t = TreeSpec::crr(100.0, kSigma, kT, 10, put(kR));
  const TreeDoobReport r = tree_doob_check(t);
  CHECK(r.paths == 1024);
  CHECK(r.pathwise_max_gap <= 1e-12);
  CHECK(r.pathwise_variance <= 1e-20);
  CHECK(std::abs(r.bruteforce_value - r.value) <= 1e-12);
  CHECK(std::abs(r.value - snell(t)[0][0]) <= 1e-12);
  CHECK(std::abs(tree_snell_value(t) - r.value) <= 1e-12);
}

TEST_CASE("brute force stopping equals backward induction on random trees") {
  std::mt19937_64 rng(31);
  for (std::size_t steps = 1; steps <= 9; ++steps) {
    for (int trial = 0; trial < 6; ++trial) {
      const TreeSpec t = random_tree(rng, steps);
      const TreeDoobReport r = tree_doob_check(t);
      CHECK(std::abs(r.bruteforce_value - r.value) <= 1e-12);
      CHECK(std::abs(r.value - snell(t)[0][0]) <= 1e-12);
      CHECK(r.pathwise_max_gap <= 1e-12);
    }
  }
}

TEST_CASE("any tree martingale bounds the value from above") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const TreeSpec t = random_tree(rng, 8);
    const double value = snell(t)[0][0];
    std::vector<double> table(8 * 256);
    for (double& a : table) a = noise(rng);
    const double mean = tree_dual_mean(t, [&](std::size_t k, std::uint64_t h) {
      return table[k * 256 + h];
    });
    CHECK(mean >= value - 1e-12);
    CHECK(tree_dual_mean(t, [](std::size_t, std::uint64_t) { return 0.0; }) >= value - 1e-12);
  }
}

TEST_CASE("Doob amplitudes attain the value in the dual") {
  const TreeSpec t = TreeSpec::crr(95.0, kSigma, kT, 12, put(kR));
  const auto y = snell(t);
  const double mean = tree_dual_mean(t, [&](std::size_t k, std::uint64_t h) {
    const auto ups = static_cast<std::size_t>(std::popcount(h));
    return y[k + 1][ups + 1] - y[k + 1][ups];
  });
  CHECK(std::abs(mean - y[0][0]) <= 1e-12);
}

TEST_CASE("tree validation") {
  TreeSpec t = TreeSpec::crr(100.0, kSigma, kT, 10, put(kR));
  t.steps = 21;
  CHECK_THROWS_AS(tree_doob_check(t), std::invalid_argument);
  t.steps = 5;
  t.probability = 1.0;
  CHECK_THROWS_AS(tree_snell_value(t), std::invalid_argument);
  t.probability = 0.5;
  t.payoff.kind = PayoffKind::kMaxCall;
  CHECK_THROWS_AS(tree_snell_value(t), std::invalid_argument);
}
