#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "dualstop/payoff.hpp"

namespace dualstop {

// Cox-Ross-Rubinstein binomial price of an American put with exercise at
// every node.
double crr_american_put(double spot, double strike, double rate, double sigma,
                        double maturity, std::size_t steps);

// Black-Scholes European put without dividends.
double bs_european_put(double spot, double strike, double rate, double sigma,
                       double maturity);

// Recombining binomial tree for a one-dimensional discounted payoff.
struct TreeSpec {
  static constexpr std::size_t kMaxSteps = 20;
  static constexpr std::size_t kMaxExhaustiveSteps = 4;

  std::size_t steps = 10;
  double up = 1.1;
  double down = 0.9;
  double probability = 0.5;  // of an up move
  double spot = 100.0;
  double dt = 0.05;          // years per step, used for discounting
  PayoffSpec payoff;         // put_1d; exercise allowed at every node

  // CRR parameterization of a GBM with volatility sigma over maturity.
  static TreeSpec crr(double spot, double sigma, double maturity, std::size_t steps,
                      PayoffSpec payoff);

  void validate() const;
  double price(std::size_t k, std::size_t ups) const;
  // Discounted reward Z_k at the node with `ups` up moves after k steps.
  double reward(std::size_t k, std::size_t ups) const;
};

struct TreeDoobReport {
  double value = 0.0;             // Y*_0 by backward induction
  double pathwise_max_gap = 0.0;  // max over paths |max_k (Z_k - M*_k) - Y*_0|
  double pathwise_variance = 0.0; // probability-weighted variance of max_k (Z_k - M*_k)
  double bruteforce_value = 0.0;  // sup over stopping rules by enumeration
  std::size_t paths = 0;
};

// Snell envelope, Doob martingale and a stopping-rule brute force on a tree.
// Up to kMaxExhaustiveSteps the brute force enumerates every adapted
// (path-dependent) stopping rule; beyond that it fixes node-wise exercise
// decisions backward, each evaluated by enumerating the paths below the node.
TreeDoobReport tree_doob_check(const TreeSpec& tree);

// Y*_0 by backward induction.
double tree_snell_value(const TreeSpec& tree);

// Probability-weighted mean of max_k (Z_k - M_k) for the martingale with
// increments amplitude(k, history) * (1{up} - p) at step k -> k+1, where bit i
// of history is the (i+1)-th move (1 = up).
double tree_dual_mean(const TreeSpec& tree,
                      const std::function<double(std::size_t, std::uint64_t)>& amplitude);

}  // namespace dualstop
