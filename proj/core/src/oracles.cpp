#include "dualstop/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dualstop {

double crr_american_put(double spot, double strike, double rate, double sigma,
                        double maturity, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("CRR needs at least one step");
  if (!(spot > 0.0 && strike > 0.0 && maturity > 0.0 && sigma >= 0.0)) {
    throw std::invalid_argument("CRR parameters must be positive");
  }
  const double dt = maturity / static_cast<double>(steps);
  if (sigma == 0.0) {
    double best = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = dt * static_cast<double>(k);
      best = std::max(best, std::exp(-rate * t) *
                                std::max(0.0, strike - spot * std::exp(rate * t)));
    }
    return best;
  }
  const double jump = sigma * std::sqrt(dt);
  const double u = std::exp(jump);
  const double d = 1.0 / u;
  const double p = (std::exp(rate * dt) - d) / (u - d);
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("CRR probability outside (0,1); refine the tree");
  }
  const double disc = std::exp(-rate * dt);
  const double pu = disc * p;
  const double pd = disc * (1.0 - p);

  // Node prices spot * u^m for m = -steps..steps.
  std::vector<double> level(2 * steps + 1);
  for (std::size_t m = 0; m < level.size(); ++m) {
    level[m] = spot * std::exp(jump * (static_cast<double>(m) - static_cast<double>(steps)));
  }
  std::vector<double> v(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) v[j] = std::max(0.0, strike - level[2 * j]);
  for (std::size_t i = steps; i-- > 0;) {
    const double* s = level.data() + (steps - i);
    for (std::size_t j = 0; j <= i; ++j) {
      v[j] = std::max(pu * v[j + 1] + pd * v[j], strike - s[2 * j]);
    }
  }
  return v[0];
}

double bs_european_put(double spot, double strike, double rate, double sigma,
                       double maturity) {
  if (!(spot > 0.0 && strike > 0.0 && sigma > 0.0 && maturity > 0.0)) {
    throw std::invalid_argument("Black-Scholes parameters must be positive");
  }
  const double vol = sigma * std::sqrt(maturity);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return strike * std::exp(-rate * maturity) * cdf(-d2) - spot * cdf(-d1);
}

TreeSpec TreeSpec::crr(double spot, double sigma, double maturity, std::size_t steps,
                       PayoffSpec payoff) {
  TreeSpec t;
  t.steps = steps;
  t.dt = maturity / static_cast<double>(steps);
  t.up = std::exp(sigma * std::sqrt(t.dt));
  t.down = 1.0 / t.up;
  t.probability = (std::exp(payoff.rate * t.dt) - t.down) / (t.up - t.down);
  t.spot = spot;
  t.payoff = std::move(payoff);
  return t;
}

void TreeSpec::validate() const {
  if (steps < 1 || steps > kMaxSteps) {
    throw std::invalid_argument("tree steps must be in [1, 20]");
  }
  if (!(probability > 0.0 && probability < 1.0)) {
    throw std::invalid_argument("tree probability must lie in (0,1)");
  }
  if (!(up > 0.0 && down > 0.0 && spot > 0.0 && dt > 0.0)) {
    throw std::invalid_argument("tree factors, spot and dt must be positive");
  }
  if (payoff.kind != PayoffKind::kPut1d) {
    throw std::invalid_argument("tree oracle supports one-dimensional payoffs only");
  }
}

double TreeSpec::price(std::size_t k, std::size_t ups) const {
  return spot * std::pow(up, static_cast<double>(ups)) *
         std::pow(down, static_cast<double>(k - ups));
}

double TreeSpec::reward(std::size_t k, std::size_t ups) const {
  const double x = price(k, ups);
  return eval_payoff(payoff, dt * static_cast<double>(k), std::span<const double>(&x, 1));
}

namespace {

// snell[k][ups]
std::vector<std::vector<double>> snell_envelope(const TreeSpec& tree) {
  const std::size_t n = tree.steps;
  const double p = tree.probability;
  std::vector<std::vector<double>> y(n + 1);
  y[n].resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) y[n][j] = tree.reward(n, j);
  for (std::size_t k = n; k-- > 0;) {
    y[k].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      y[k][j] = std::max(tree.reward(k, j), p * y[k + 1][j + 1] + (1.0 - p) * y[k + 1][j]);
    }
  }
  return y;
}

// Every value E[Z_tau] attainable by an adapted stopping rule on the subtree
// rooted at (k, ups), reached through all distinct stop/continue decisions.
std::vector<double> attainable_values(const TreeSpec& tree, std::size_t k,
                                      std::size_t ups) {
  const double stop = tree.reward(k, ups);
  if (k == tree.steps) return {stop};
  const std::vector<double> hi = attainable_values(tree, k + 1, ups + 1);
  const std::vector<double> lo = attainable_values(tree, k + 1, ups);
  std::vector<double> out;
  out.reserve(1 + hi.size() * lo.size());
  out.push_back(stop);
  const double p = tree.probability;
  for (double a : hi) {
    for (double b : lo) out.push_back(p * a + (1.0 - p) * b);
  }
  return out;
}

// Expected stopped reward from (k, ups) under a node-wise rule, by enumerating
// all continuations.
double rule_value(const TreeSpec& tree, const std::vector<std::vector<char>>& stop,
                  std::size_t k, std::size_t ups) {
  const std::size_t remaining = tree.steps - k;
  const double p = tree.probability;
  double total = 0.0;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << remaining); ++h) {
    std::size_t u = ups;
    double weight = 1.0;
    std::size_t t = k;
    while (!stop[t][u]) {
      const bool is_up = (h >> (t - k)) & 1u;
      weight *= is_up ? p : 1.0 - p;
      u += is_up ? 1 : 0;
      ++t;
    }
    // Paths differing only after the stopping time repeat this outcome;
    // weight each distinct prefix once.
    const std::uint64_t tail_bits = h >> (t - k);
    if (tail_bits != 0) continue;
    total += weight * tree.reward(t, u);
  }
  return total;
}

}  // namespace

double tree_snell_value(const TreeSpec& tree) {
  tree.validate();
  return snell_envelope(tree)[0][0];
}

TreeDoobReport tree_doob_check(const TreeSpec& tree) {
  tree.validate();
  const std::size_t n = tree.steps;
  const double p = tree.probability;
  const auto y = snell_envelope(tree);

  TreeDoobReport report;
  report.value = y[0][0];
  report.paths = std::size_t{1} << n;

  double mean = 0.0;
  double second = 0.0;
  for (std::uint64_t h = 0; h < report.paths; ++h) {
    std::size_t ups = 0;
    double m = 0.0;
    double best = tree.reward(0, 0);
    double weight = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool is_up = (h >> k) & 1u;
      const double expected = p * y[k + 1][ups + 1] + (1.0 - p) * y[k + 1][ups];
      ups += is_up ? 1 : 0;
      weight *= is_up ? p : 1.0 - p;
      m += y[k + 1][ups] - expected;
      best = std::max(best, tree.reward(k + 1, ups) - m);
    }
    report.pathwise_max_gap = std::max(report.pathwise_max_gap, std::abs(best - report.value));
    mean += weight * best;
    second += weight * best * best;
  }
  report.pathwise_variance = std::max(0.0, second - mean * mean);

  if (n <= TreeSpec::kMaxExhaustiveSteps) {
    const std::vector<double> values = attainable_values(tree, 0, 0);
    report.bruteforce_value = *std::max_element(values.begin(), values.end());
    return report;
  }

  std::vector<std::vector<char>> stop(n + 1);
  for (std::size_t k = 0; k <= n; ++k) stop[k].assign(k + 1, 0);
  stop[n].assign(n + 1, 1);
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j <= k; ++j) {
      stop[k][j] = 0;
      const double cont = rule_value(tree, stop, k, j);
      stop[k][j] = tree.reward(k, j) >= cont ? 1 : 0;
    }
  }
  report.bruteforce_value = rule_value(tree, stop, 0, 0);
  return report;
}

double tree_dual_mean(const TreeSpec& tree,
                      const std::function<double(std::size_t, std::uint64_t)>& amplitude) {
  tree.validate();
  const std::size_t n = tree.steps;
  const double p = tree.probability;
  double mean = 0.0;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << n); ++h) {
    std::size_t ups = 0;
    double m = 0.0;
    double best = tree.reward(0, 0);
    double weight = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t history = h & ((std::uint64_t{1} << k) - 1);
      const bool is_up = (h >> k) & 1u;
      m += amplitude(k, history) * ((is_up ? 1.0 : 0.0) - p);
      ups += is_up ? 1 : 0;
      weight *= is_up ? p : 1.0 - p;
      best = std::max(best, tree.reward(k + 1, ups) - m);
    }
    mean += weight * best;
  }
  return mean;
}

}  // namespace dualstop
