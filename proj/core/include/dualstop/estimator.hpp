#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dualstop/dual_objective.hpp"
#include "dualstop/martingale.hpp"
#include "dualstop/optimizer.hpp"
#include "dualstop/payoff.hpp"
#include "dualstop/sde.hpp"
#include "dualstop/sieve_basis.hpp"

namespace dualstop {

// Noise streams: training uses stream 0, testing repetition r uses 1 + r and
// the martingale diagnostic uses the last stream, so they never overlap.
inline constexpr std::uint32_t kTrainStream = 0;
inline constexpr std::uint32_t kDiagnosticStream = kMaxStream;
std::uint32_t test_stream(std::size_t repetition);

// An optimal stopping problem together with its discretization.
struct DualProblem {
  SdeModel model;
  PayoffSpec payoff;
  BasisSpec basis;
  double maturity = 0.5;
  std::size_t n_disc = 200;

  // Grid with every Bermudan date merged in, exercise indices as observation.
  PathModel path_model() const;
};

struct TrainSettings {
  double lambda = 2.0;
  OptimSettings optimizer;
  std::size_t paths = 10'000;
  std::uint64_t seed = 0;
  // Regenerate paths on every objective evaluation instead of storing the
  // increment tensor.
  bool streaming = false;
};

struct TrainingDiagnostics {
  double objective = 0.0;  // exact penalized objective at beta*
  double mean = 0.0;       // training mean of Z at beta*
  double variance = 0.0;   // training V_n at beta*
  double zero_objective = 0.0;
  double zero_mean = 0.0;
  double zero_variance = 0.0;
  double seconds = 0.0;
  OptimResult optimization;
};

struct TrainedDual {
  explicit TrainedDual(PathModel pm) : path_model(std::move(pm)) {}

  PathModel path_model;
  std::vector<double> beta;
  double lambda = 0.0;
  double box = 0.0;
  std::uint64_t seed = 0;
  TrainingDiagnostics diagnostics;
};

// Fits beta* on settings.paths training paths.
TrainedDual train(const DualProblem& problem, const TrainSettings& settings);

// A trained dual with externally fixed coefficients (no fitting).
TrainedDual fixed_coefficients(const DualProblem& problem, std::vector<double> beta);

struct DualEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double repetition_std = 0.0;
  std::vector<double> repetition_means;
  std::size_t paths_per_repetition = 0;
  std::size_t repetitions = 0;
};

// Out-of-sample upper bound from R repetitions of N fresh paths each, using
// the exact pathwise maximum.
DualEstimate evaluate(const TrainedDual& trained, std::size_t paths,
                      std::size_t repetitions, std::uint64_t seed);

struct MartingaleCheck {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
};

// Sample mean of M_T(beta*) over fresh paths.
MartingaleCheck terminal_martingale(const TrainedDual& trained, std::size_t paths,
                                    std::uint64_t seed,
                                    std::uint32_t stream = kDiagnosticStream);

}  // namespace dualstop
