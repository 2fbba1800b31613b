#include "dualstop/estimator.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dualstop/parallel.hpp"

namespace dualstop {

std::uint32_t test_stream(std::size_t repetition) {
  if (repetition + 1 >= kDiagnosticStream) {
    throw std::out_of_range("too many testing repetitions");
  }
  return static_cast<std::uint32_t>(repetition + 1);
}

PathModel DualProblem::path_model() const {
  payoff.validate(maturity);
  if (basis.dimension != model.dimension()) {
    throw std::invalid_argument("basis dimension differs from model dimension");
  }
  std::vector<double> dates;
  if (!payoff.exercise.continuous) dates = payoff.exercise.dates;
  TimeGrid grid = TimeGrid::build(maturity, n_disc, dates);
  std::vector<std::size_t> exercise = exercise_indices(payoff, grid);
  return PathModel{model, std::move(grid), basis, payoff, std::move(exercise)};
}

namespace {

std::vector<double> weights_for(const PathModel& pm) {
  return quadrature_weights(pm.payoff, pm.grid, pm.observation);
}

}  // namespace

TrainedDual fixed_coefficients(const DualProblem& problem, std::vector<double> beta) {
  TrainedDual t{problem.path_model()};
  if (beta.size() != t.path_model.basis.feature_count()) {
    throw std::invalid_argument("coefficient vector length differs from feature count");
  }
  t.beta = std::move(beta);
  return t;
}

TrainedDual train(const DualProblem& problem, const TrainSettings& settings) {
  if (settings.paths < 2) throw std::invalid_argument("training needs n >= 2 paths");
  const auto start = std::chrono::steady_clock::now();

  TrainedDual trained{problem.path_model()};
  trained.lambda = settings.lambda;
  trained.box = settings.optimizer.box;
  trained.seed = settings.seed;
  const PathModel& pm = trained.path_model;

  const NoiseKey noise{settings.seed, kTrainStream};
  std::optional<MaterializedPaths> stored;
  std::optional<StreamingPaths> streamed;
  const PathSource* source;
  if (settings.streaming) {
    source = &streamed.emplace(pm, settings.paths, noise);
  } else {
    source = &stored.emplace(MaterializedPaths::simulate(pm, settings.paths, noise));
  }
  const DualObjective objective(*source, weights_for(pm), settings.lambda);

  const StagedObjective f = [&](std::span<const double> beta, std::optional<double> p) {
    ObjectiveValue v = objective.evaluate(beta, p, true);
    return Evaluation{v.value, std::move(v.gradient)};
  };

  const std::vector<double> zero(pm.basis.feature_count(), 0.0);
  const ObjectiveValue at_zero = objective.evaluate(zero, std::nullopt, false);
  OptimResult opt = minimize(f, zero, settings.optimizer);
  const ObjectiveValue at_beta = objective.evaluate(opt.beta, std::nullopt, false);

  trained.beta = opt.beta;
  auto& diag = trained.diagnostics;
  diag.objective = at_beta.value;
  diag.mean = at_beta.mean;
  diag.variance = at_beta.variance;
  diag.zero_objective = at_zero.value;
  diag.zero_mean = at_zero.mean;
  diag.zero_variance = at_zero.variance;
  diag.optimization = std::move(opt);
  diag.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trained;
}

DualEstimate evaluate(const TrainedDual& trained, std::size_t paths,
                      std::size_t repetitions, std::uint64_t seed) {
  if (paths < 2) throw std::invalid_argument("testing needs N >= 2 paths");
  if (repetitions < 1) throw std::invalid_argument("testing needs R >= 1");
  const PathModel& pm = trained.path_model;
  const std::vector<double> weights(pm.observation.size(), 1.0);

  DualEstimate est;
  est.paths_per_repetition = paths;
  est.repetitions = repetitions;
  double last_variance = 0.0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const StreamingPaths source(pm, paths, NoiseKey{seed, test_stream(r)});
    const DualObjective objective(source, weights, 0.0);
    const std::vector<double> z = objective.pathwise(trained.beta);
    est.repetition_means.push_back(pairwise_sum(z) / static_cast<double>(paths));
    last_variance = unbiased_variance(z);
  }
  est.mean = pairwise_sum(est.repetition_means) / static_cast<double>(repetitions);
  if (repetitions > 1) {
    est.repetition_std = std::sqrt(unbiased_variance(est.repetition_means));
    est.standard_error = est.repetition_std / std::sqrt(static_cast<double>(repetitions));
  } else {
    est.standard_error = std::sqrt(last_variance / static_cast<double>(paths));
  }
  return est;
}

MartingaleCheck terminal_martingale(const TrainedDual& trained, std::size_t paths,
                                    std::uint64_t seed, std::uint32_t stream) {
  if (paths < 2) throw std::invalid_argument("martingale check needs >= 2 paths");
  if (stream == kTrainStream) {
    throw std::invalid_argument("martingale check must not reuse the training stream");
  }
  PathModel pm = trained.path_model;
  pm.observation = {pm.grid.size() - 1};
  const std::size_t q_total = pm.basis.feature_count();
  std::vector<double> m(paths);
  const NoiseKey noise{seed, stream};
  for_each_chunk(paths, kPathChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    PathScratch scratch;
    for (std::size_t j = begin; j < end; ++j) {
      const PathView v = generate_path(pm, noise, j, scratch);
      double s = 0.0;
      for (std::size_t q = 0; q < q_total; ++q) s += trained.beta[q] * v.blocks[q];
      m[j] = s;
    }
  });
  MartingaleCheck out;
  out.paths = paths;
  out.mean = pairwise_sum(m) / static_cast<double>(paths);
  out.standard_error = std::sqrt(unbiased_variance(m) / static_cast<double>(paths));
  return out;
}

}  // namespace dualstop
