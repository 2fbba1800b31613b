#include "dualstop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <utility>

namespace dualstop {
namespace {

constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1e12;
constexpr std::size_t kMemory = 10;

Evaluation checked(const std::function<Evaluation(std::span<const double>)>& f,
                   std::span<const double> beta) {
  Evaluation e = f(beta);
  bool finite = std::isfinite(e.value);
  for (double g : e.gradient) finite = finite && std::isfinite(g);
  if (!finite) {
    throw NumericalError("objective or gradient is not finite",
                         std::vector<double>(beta.begin(), beta.end()));
  }
  if (e.gradient.size() != beta.size()) {
    throw std::invalid_argument("gradient length differs from coefficient length");
  }
  return e;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double projected_gradient_norm(std::span<const double> beta,
                               std::span<const double> grad, double box) {
  double s = 0.0;
  for (std::size_t q = 0; q < beta.size(); ++q) {
    const double moved = std::clamp(beta[q] - grad[q], -box, box);
    const double r = beta[q] - moved;
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

void OptimSettings::validate() const {
  if (!(box > 0.0)) throw std::invalid_argument("box half-width must be positive");
  for (std::size_t k = 0; k < p_schedule.size(); ++k) {
    if (!(p_schedule[k] > 0.0)) throw std::invalid_argument("p values must be positive");
    if (k > 0 && !(p_schedule[k] > p_schedule[k - 1])) {
      throw std::invalid_argument("p schedule must be strictly increasing");
    }
  }
  if (max_iterations < 0 || polish_iterations < 0) {
    throw std::invalid_argument("iteration caps must be non-negative");
  }
  if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("armijo c in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("backtrack factor in (0,1)");
  }
}

void project_to_box(std::span<double> beta, double box) {
  for (double& b : beta) b = std::clamp(b, -box, box);
}

StageTrace projected_descent(const std::function<Evaluation(std::span<const double>)>& f,
                             std::vector<double>& beta, const OptimSettings& settings) {
  StageTrace trace;
  project_to_box(beta, settings.box);
  Evaluation cur = checked(f, beta);
  trace.values.push_back(cur.value);

  const std::size_t dim = beta.size();
  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;
  std::vector<double> dir(dim), trial(dim), s(dim), y(dim), alpha;

  for (int it = 0; it < settings.max_iterations; ++it) {
    if (projected_gradient_norm(beta, cur.gradient, settings.box) <=
        settings.gradient_tolerance) {
      trace.converged = true;
      break;
    }

    // Two-loop recursion; the initial scaling s'y / y'y is the
    // Barzilai-Borwein step.
    for (std::size_t q = 0; q < dim; ++q) dir[q] = -cur.gradient[q];
    if (memory.empty()) {
      const double gnorm = std::sqrt(dot(cur.gradient, cur.gradient));
      const double scale = std::min(1.0, 1.0 / gnorm);
      for (double& v : dir) v *= scale;
    } else {
      alpha.assign(memory.size(), 0.0);
      for (std::size_t i = memory.size(); i-- > 0;) {
        const auto& [si, yi] = memory[i];
        alpha[i] = dot(si, dir) / dot(si, yi);
        for (std::size_t q = 0; q < dim; ++q) dir[q] -= alpha[i] * yi[q];
      }
      const auto& [sl, yl] = memory.back();
      const double gamma = std::clamp(dot(sl, yl) / dot(yl, yl), kMinStep, kMaxStep);
      for (double& v : dir) v *= gamma;
      for (std::size_t i = 0; i < memory.size(); ++i) {
        const auto& [si, yi] = memory[i];
        const double b = dot(yi, dir) / dot(si, yi);
        for (std::size_t q = 0; q < dim; ++q) dir[q] += (alpha[i] - b) * si[q];
      }
    }

    bool accepted = false;
    Evaluation next;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        // Quasi-Newton direction failed; restart from the scaled gradient.
        if (memory.empty()) break;
        memory.clear();
        const double gnorm = std::sqrt(dot(cur.gradient, cur.gradient));
        const double scale = std::min(1.0, 1.0 / gnorm);
        for (std::size_t q = 0; q < dim; ++q) dir[q] = -scale * cur.gradient[q];
      }
      double t = 1.0;
      for (int bt = 0; bt <= settings.max_backtracks; ++bt, t *= settings.backtrack) {
        for (std::size_t q = 0; q < dim; ++q) trial[q] = beta[q] + t * dir[q];
        project_to_box(trial, settings.box);
        for (std::size_t q = 0; q < dim; ++q) s[q] = trial[q] - beta[q];
        const double decrease = dot(cur.gradient, s);
        if (!(decrease < 0.0)) break;
        next = checked(f, trial);
        if (next.value <= cur.value + settings.armijo * decrease) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      // No descent at machine precision.
      trace.stalled = true;
      break;
    }

    for (std::size_t q = 0; q < dim; ++q) y[q] = next.gradient[q] - cur.gradient[q];
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    beta = trial;
    cur = std::move(next);
    trace.values.push_back(cur.value);
    ++trace.iterations;
  }
  return trace;
}

OptimResult minimize(const StagedObjective& f, std::vector<double> init,
                     const OptimSettings& settings) {
  settings.validate();
  for (double b : init) {
    if (!(std::abs(b) <= settings.box)) {
      throw std::invalid_argument("initial coefficients outside the box");
    }
  }
  OptimResult result;
  std::vector<double> beta = std::move(init);

  for (double p : settings.p_schedule) {
    StageTrace stage = projected_descent(
        [&](std::span<const double> b) { return f(b, p); }, beta, settings);
    stage.p = p;
    result.stages.push_back(std::move(stage));
  }

  // Exact-objective polish: subgradient steps with diminishing length,
  // keeping the best iterate seen.
  StageTrace polish;
  Evaluation cur = checked([&](std::span<const double> b) { return f(b, std::nullopt); },
                           beta);
  std::vector<double> best = beta;
  double best_value = cur.value;
  polish.values.push_back(cur.value);
  const double radius =
      std::max(1e-3, 0.05 * std::sqrt(dot(beta, beta) / std::max<std::size_t>(1, beta.size())));
  for (int it = 0; it < settings.polish_iterations; ++it) {
    const double gnorm = std::sqrt(dot(cur.gradient, cur.gradient));
    if (gnorm == 0.0) {
      polish.converged = true;
      break;
    }
    const double length = radius / std::sqrt(static_cast<double>(it + 1));
    for (std::size_t q = 0; q < beta.size(); ++q) {
      beta[q] -= length * cur.gradient[q] / gnorm;
    }
    project_to_box(beta, settings.box);
    cur = checked([&](std::span<const double> b) { return f(b, std::nullopt); }, beta);
    if (cur.value < best_value) {
      best_value = cur.value;
      best = beta;
    }
    polish.values.push_back(best_value);
    ++polish.iterations;
  }
  result.stages.push_back(std::move(polish));
  result.beta = std::move(best);
  result.value = best_value;
  return result;
}

}  // namespace dualstop
