#include "dualstop/dual_objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualstop/parallel.hpp"

namespace dualstop {

void ObjectiveConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and non-negative");
  }
  if (smoothing && !(*smoothing > 0.0)) {
    throw std::invalid_argument("smoothing exponent p must be positive");
  }
}

double pathwise_z(std::span<const double> payoffs, std::span<const double> martingale,
                  std::span<const std::size_t> exercise) {
  if (exercise.empty()) throw std::invalid_argument("empty exercise set");
  if (payoffs.size() != martingale.size()) {
    throw std::invalid_argument("payoff and martingale paths differ in length");
  }
  double z = -std::numeric_limits<double>::infinity();
  for (std::size_t k : exercise) {
    if (k >= payoffs.size()) throw std::out_of_range("exercise index beyond path");
    z = std::max(z, payoffs[k] - martingale[k]);
  }
  return z;
}

double smooth_max(std::span<const double> args, std::span<const double> weights,
                  double p, std::span<double> softmax) {
  if (!(p > 0.0)) throw std::invalid_argument("smoothing exponent p must be positive");
  if (args.empty() || weights.size() != args.size()) {
    throw std::invalid_argument("smooth_max needs matching non-empty inputs");
  }
  const double top = *std::max_element(args.begin(), args.end());
  double total = 0.0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const double e = weights[k] * std::exp(p * (args[k] - top));
    if (!softmax.empty()) softmax[k] = e;
    total += e;
  }
  if (!softmax.empty()) {
    for (double& s : softmax) s /= total;
  }
  return top + std::log(total) / p;
}

double pathwise_z_smooth(std::span<const double> payoffs,
                         std::span<const double> martingale,
                         std::span<const std::size_t> exercise,
                         std::span<const double> weights, double p,
                         std::span<double> softmax) {
  if (exercise.empty()) throw std::invalid_argument("empty exercise set");
  if (payoffs.size() != martingale.size() || weights.size() != exercise.size()) {
    throw std::invalid_argument("pathwise_z_smooth shape mismatch");
  }
  std::vector<double> args(exercise.size());
  for (std::size_t k = 0; k < exercise.size(); ++k) {
    if (exercise[k] >= payoffs.size()) throw std::out_of_range("exercise index beyond path");
    args[k] = payoffs[exercise[k]] - martingale[exercise[k]];
  }
  return smooth_max(args, weights, p, softmax);
}

std::vector<double> quadrature_weights(const PayoffSpec& payoff, const TimeGrid& grid,
                                       std::span<const std::size_t> exercise) {
  std::vector<double> w(exercise.size(), 1.0);
  if (!payoff.exercise.continuous) return w;
  for (std::size_t k = 0; k < exercise.size(); ++k) {
    const std::size_t l = exercise[k];
    w[k] = l < grid.steps() ? grid.step(l) : grid.step(grid.steps() - 1);
  }
  return w;
}

double unbiased_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("variance needs at least two values");
  // Shifting by the first value leaves the identity exact and avoids
  // cancellation when the values sit far from zero.
  const double shift = values[0];
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : values) {
    const double c = v - shift;
    s1 += c;
    s2 += c * c;
  }
  const double nd = static_cast<double>(n);
  return std::max(0.0, (s2 - s1 * s1 / nd) / (nd - 1.0));
}

DualObjective::DualObjective(const PathSource& paths, std::vector<double> weights,
                             double lambda)
    : paths_(&paths), weights_(std::move(weights)), lambda_(lambda) {
  if (paths.paths() < 2) throw std::invalid_argument("objective needs n >= 2 paths");
  if (weights_.size() != paths.observations()) {
    throw std::invalid_argument("one quadrature weight per exercise index required");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and non-negative");
  }
}

namespace {

// Pathwise Z and, optionally, dZ/dbeta for one path.
double path_value(const PathView& v, std::span<const double> beta,
                  std::span<const double> weights, std::optional<double> p,
                  std::span<double> args, std::span<double> tail,
                  std::span<double> grad) {
  const std::size_t e = v.payoffs.size();
  const std::size_t q_total = beta.size();
  double m = 0.0;
  for (std::size_t k = 0; k < e; ++k) {
    const double* b = v.blocks.data() + k * q_total;
    double dm = 0.0;
    for (std::size_t q = 0; q < q_total; ++q) dm += beta[q] * b[q];
    m += dm;
    args[k] = v.payoffs[k] - m;
  }

  double z;
  if (p) {
    z = smooth_max(args, weights, *p, grad.empty() ? std::span<double>() : tail);
  } else {
    const auto it = std::max_element(args.begin(), args.end());
    z = *it;
    if (!grad.empty()) {
      std::fill(tail.begin(), tail.end(), 0.0);
      tail[static_cast<std::size_t>(it - args.begin())] = 1.0;
    }
  }
  if (grad.empty()) return z;

  // dZ/dbeta_q = -sum_k pi_k sum_{k' <= k} B[k'][q] = -sum_k' B[k'][q] tail_k'
  for (std::size_t k = e - 1; k-- > 0;) tail[k] += tail[k + 1];
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t k = 0; k < e; ++k) {
    const double t = tail[k];
    if (t == 0.0) continue;
    const double* b = v.blocks.data() + k * q_total;
    for (std::size_t q = 0; q < q_total; ++q) grad[q] -= t * b[q];
  }
  return z;
}

}  // namespace

ObjectiveValue DualObjective::evaluate(std::span<const double> beta,
                                       std::optional<double> smoothing,
                                       bool with_gradient) const {
  const std::size_t q_total = paths_->features();
  if (beta.size() != q_total) {
    throw std::invalid_argument("coefficient vector length differs from feature count");
  }
  if (smoothing && !(*smoothing > 0.0)) {
    throw std::invalid_argument("smoothing exponent p must be positive");
  }
  const std::size_t n = paths_->paths();
  const std::size_t e = paths_->observations();

  std::vector<double> z(n);
  std::vector<double> path_grads(with_gradient ? n * q_total : 0);
  for_each_chunk(n, kPathChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    PathScratch scratch;
    std::vector<double> args(e), tail(e);
    for (std::size_t j = begin; j < end; ++j) {
      const PathView v = paths_->path(j, scratch);
      std::span<double> g = with_gradient
                                ? std::span<double>(path_grads).subspan(j * q_total, q_total)
                                : std::span<double>();
      z[j] = path_value(v, beta, weights_, smoothing, args, tail, g);
    }
  });

  ObjectiveValue out;
  const double nd = static_cast<double>(n);
  out.mean = pairwise_sum(z) / nd;
  out.variance = unbiased_variance(z);
  const double root = std::sqrt(out.variance + ObjectiveConfig::kVarianceFloor);
  out.value = out.mean + lambda_ * root;
  if (!with_gradient) return out;

  // d value / d Z_j = 1/n + lambda * (Z_j - mean) / ((n-1) * root)
  const double spread = lambda_ / ((nd - 1.0) * root);
  const std::size_t chunks = chunk_count(n, kPathChunk);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(q_total, 0.0));
  for_each_chunk(n, kPathChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& acc = partial[c];
    for (std::size_t j = begin; j < end; ++j) {
      const double w = 1.0 / nd + spread * (z[j] - out.mean);
      const double* g = path_grads.data() + j * q_total;
      for (std::size_t q = 0; q < q_total; ++q) acc[q] += w * g[q];
    }
  });
  out.gradient = pairwise_sum_rows(std::move(partial));
  return out;
}

std::vector<double> DualObjective::pathwise(std::span<const double> beta) const {
  const std::size_t q_total = paths_->features();
  if (beta.size() != q_total) {
    throw std::invalid_argument("coefficient vector length differs from feature count");
  }
  const std::size_t n = paths_->paths();
  const std::size_t e = paths_->observations();
  std::vector<double> z(n);
  for_each_chunk(n, kPathChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    PathScratch scratch;
    std::vector<double> args(e), tail(e);
    for (std::size_t j = begin; j < end; ++j) {
      z[j] = path_value(paths_->path(j, scratch), beta, weights_, std::nullopt, args,
                        tail, {});
    }
  });
  return z;
}

ObjectiveValue penalized_value_and_grad(const IncrementTensor& tensor,
                                        std::span<const double> payoffs,
                                        std::span<const double> weights,
                                        const ObjectiveConfig& cfg,
                                        std::span<const double> beta) {
  cfg.validate();
  const MaterializedPaths source(tensor,
                                 std::vector<double>(payoffs.begin(), payoffs.end()));
  const DualObjective objective(source, std::vector<double>(weights.begin(), weights.end()),
                                cfg.lambda);
  return objective.evaluate(beta, cfg.smoothing, true);
}

}  // namespace dualstop
