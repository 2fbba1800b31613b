#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dualstop/martingale.hpp"
#include "dualstop/payoff.hpp"
#include "dualstop/time_grid.hpp"

namespace dualstop {

// Penalized empirical dual objective
//   mean_j Z^(j)(beta) + lambda * sqrt(V_n(Z) + eps_v).
struct ObjectiveConfig {
  static constexpr double kVarianceFloor = 1e-12;

  double lambda = 2.0;
  // Log-sum-exp exponent p; nullopt selects the exact pathwise maximum.
  std::optional<double> smoothing;

  void validate() const;
};

// Z = max_{k in exercise} (payoffs[k] - martingale[k]); both indexed by grid
// node.
double pathwise_z(std::span<const double> payoffs, std::span<const double> martingale,
                  std::span<const std::size_t> exercise);

// Z_p = p^{-1} log(sum_k w_k exp(p * args[k])), evaluated with the maximum
// shifted out. softmax, when non-empty, receives dZ_p/dargs[k] (sums to 1).
double smooth_max(std::span<const double> args, std::span<const double> weights,
                  double p, std::span<double> softmax = {});

// Smoothed pathwise dual payoff over the exercise indices with quadrature
// weights aligned to the exercise set.
double pathwise_z_smooth(std::span<const double> payoffs,
                         std::span<const double> martingale,
                         std::span<const std::size_t> exercise,
                         std::span<const double> weights, double p,
                         std::span<double> softmax = {});

// Left-Riemann weights (step length at the node; the final node reuses the
// last step) for continuous exercise, counting measure for Bermudan.
std::vector<double> quadrature_weights(const PayoffSpec& payoff, const TimeGrid& grid,
                                       std::span<const std::size_t> exercise);

// Unbiased sample variance, equal to the pairwise U-statistic
// (n(n-1))^{-1} sum_{i<j} (z_i - z_j)^2. Requires n >= 2.
double unbiased_variance(std::span<const double> values);

struct ObjectiveValue {
  double value = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> gradient;  // empty unless requested
};

// Evaluates the objective and its analytic (sub)gradient in beta over a fixed
// set of paths. Thread-safe for concurrent const calls.
class DualObjective {
 public:
  DualObjective(const PathSource& paths, std::vector<double> weights, double lambda);

  std::size_t dimension() const { return paths_->features(); }
  std::size_t paths() const { return paths_->paths(); }
  double lambda() const { return lambda_; }

  ObjectiveValue evaluate(std::span<const double> beta, std::optional<double> smoothing,
                          bool with_gradient = true) const;

  // Hard pathwise dual payoffs Z^(j)(beta).
  std::vector<double> pathwise(std::span<const double> beta) const;

 private:
  const PathSource* paths_;
  std::vector<double> weights_;
  double lambda_;
};

// penalized_value_and_grad over a materialized tensor.
ObjectiveValue penalized_value_and_grad(const IncrementTensor& tensor,
                                        std::span<const double> payoffs,
                                        std::span<const double> weights,
                                        const ObjectiveConfig& cfg,
                                        std::span<const double> beta);

}  // namespace dualstop
