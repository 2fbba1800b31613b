#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualstop {

// Settings of the box-constrained smoothing-continuation descent.
struct OptimSettings {
  double box = 100.0;  // coefficients live in [-box, box]^Q
  std::vector<double> p_schedule{20.0, 100.0, 500.0};
  int max_iterations = 300;  // per smoothed stage
  double gradient_tolerance = 1e-6;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  // Exact-maximum subgradient stage run after the smoothed stages.
  int polish_iterations = 50;

  void validate() const;
};

struct Evaluation {
  double value = 0.0;
  std::vector<double> gradient;
};

// Objective callable: smoothing exponent p, or nullopt for the exact
// (non-smooth) objective with a subgradient.
using StagedObjective =
    std::function<Evaluation(std::span<const double> beta, std::optional<double> p)>;

struct StageTrace {
  std::optional<double> p;
  std::vector<double> values;  // objective after each accepted iterate, start included
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // line search found no decrease
};

struct OptimResult {
  std::vector<double> beta;
  double value = 0.0;  // exact-objective value at beta
  std::vector<StageTrace> stages;
};

// Raised when the objective or its gradient is not finite.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<double> beta)
      : std::runtime_error(what), beta_(std::move(beta)) {}
  const std::vector<double>& beta() const { return beta_; }

 private:
  std::vector<double> beta_;
};

// Componentwise clamp to [-box, box].
void project_to_box(std::span<double> beta, double box);

// One projected L-BFGS stage (memory 10) with Armijo backtracking along the
// clamped path; falls back to a scaled gradient step when the quasi-Newton
// direction fails. Objective values along the accepted iterates never increase.
StageTrace projected_descent(const std::function<Evaluation(std::span<const double>)>& f,
                             std::vector<double>& beta, const OptimSettings& settings);

// Runs projected descent for each p in the schedule (warm-started), then the
// subgradient polish on the exact objective. Returns the polish stage's best
// iterate.
OptimResult minimize(const StagedObjective& f, std::vector<double> init,
                     const OptimSettings& settings);

}  // namespace dualstop
