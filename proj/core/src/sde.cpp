#include "dualstop/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "dualstop/parallel.hpp"

namespace dualstop {

SdeModel SdeModel::gbm(std::vector<double> spot, double rate, double dividend,
                       std::vector<double> volatility) {
  if (spot.empty()) throw std::invalid_argument("model dimension must be >= 1");
  if (volatility.size() == 1 && spot.size() > 1) volatility.assign(spot.size(), volatility[0]);
  if (volatility.size() != spot.size()) {
    throw std::invalid_argument("one volatility per asset (or a single shared one) required");
  }
  for (double s : spot) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("GBM spot must be positive and finite");
    }
  }
  for (double v : volatility) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("volatility must be finite and non-negative");
    }
  }
  if (!std::isfinite(rate) || !std::isfinite(dividend)) {
    throw std::invalid_argument("rate and dividend must be finite");
  }
  SdeModel m;
  m.kind_ = Kind::kGbm;
  m.spot_ = std::move(spot);
  m.rate_ = rate;
  m.dividend_ = dividend;
  m.volatility_ = std::move(volatility);
  return m;
}

SdeModel SdeModel::generic(std::vector<double> spot, CoefficientFn drift,
                           CoefficientFn diffusion) {
  if (spot.empty()) throw std::invalid_argument("model dimension must be >= 1");
  if (!drift || !diffusion) {
    throw std::invalid_argument("generic model needs drift and diffusion");
  }
  SdeModel m;
  m.kind_ = Kind::kGeneric;
  m.spot_ = std::move(spot);
  m.drift_fn_ = std::move(drift);
  m.diffusion_fn_ = std::move(diffusion);
  return m;
}

void SdeModel::drift(double t, std::span<const double> x,
                     std::span<double> out) const {
  if (kind_ == Kind::kGeneric) {
    drift_fn_(t, x, out);
    return;
  }
  const double mu = rate_ - dividend_;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mu * x[i];
}

void SdeModel::diffusion(double t, std::span<const double> x,
                         std::span<double> out) const {
  if (kind_ == Kind::kGeneric) {
    diffusion_fn_(t, x, out);
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = volatility_[i] * x[i];
}

PathBatch::PathBatch(TimeGrid grid, std::size_t count, std::size_t dimension,
                     NoiseKey noise)
    : grid_(std::move(grid)),
      count_(count),
      dimension_(dimension),
      noise_(noise),
      states_(count * grid_.size() * dimension),
      increments_(count * grid_.steps() * dimension) {}

std::span<const double> PathBatch::path_states(std::size_t j) const {
  const std::size_t w = grid_.size() * dimension_;
  return std::span<const double>(states_).subspan(j * w, w);
}
std::span<double> PathBatch::path_states(std::size_t j) {
  const std::size_t w = grid_.size() * dimension_;
  return std::span<double>(states_).subspan(j * w, w);
}
std::span<const double> PathBatch::path_increments(std::size_t j) const {
  const std::size_t w = grid_.steps() * dimension_;
  return std::span<const double>(increments_).subspan(j * w, w);
}
std::span<double> PathBatch::path_increments(std::size_t j) {
  const std::size_t w = grid_.steps() * dimension_;
  return std::span<double>(increments_).subspan(j * w, w);
}

void draw_increments(const TimeGrid& grid, std::size_t dimension,
                     const NoiseKey& noise, std::uint64_t path,
                     std::span<double> increments) {
  const std::size_t steps = grid.steps();
  for (std::size_t l = 0; l < steps; ++l) {
    const double scale = std::sqrt(grid.step(l));
    double* dw = increments.data() + l * dimension;
    for (std::size_t i = 0; i < dimension; i += 2) {
      const auto [z0, z1] = gaussian_pair(noise, path, static_cast<std::uint32_t>(l),
                                          static_cast<std::uint32_t>(i / 2));
      dw[i] = scale * z0;
      if (i + 1 < dimension) dw[i + 1] = scale * z1;
    }
  }
}

void integrate_path(const SdeModel& model, const TimeGrid& grid, Scheme scheme,
                    std::span<const double> increments, std::span<double> states) {
  const std::size_t d = model.dimension();
  const std::size_t steps = grid.steps();
  for (std::size_t i = 0; i < d; ++i) states[i] = model.spot()[i];

  if (scheme == Scheme::kExactGbm) {
    if (model.kind() != SdeModel::Kind::kGbm) {
      throw std::invalid_argument("exact stepping requires a GBM model");
    }
    const auto vol = model.volatility();
    const double mu = model.rate() - model.dividend();
    for (std::size_t l = 0; l < steps; ++l) {
      const double dt = grid.step(l);
      const double* x = states.data() + l * d;
      double* next = states.data() + (l + 1) * d;
      const double* dw = increments.data() + l * d;
      for (std::size_t i = 0; i < d; ++i) {
        next[i] = x[i] * std::exp((mu - 0.5 * vol[i] * vol[i]) * dt + vol[i] * dw[i]);
      }
    }
    return;
  }

  if (model.kind() == SdeModel::Kind::kGbm) {
    const auto vol = model.volatility();
    const double mu = model.rate() - model.dividend();
    for (std::size_t l = 0; l < steps; ++l) {
      const double dt = grid.step(l);
      const double* x = states.data() + l * d;
      double* next = states.data() + (l + 1) * d;
      const double* dw = increments.data() + l * d;
      for (std::size_t i = 0; i < d; ++i) {
        next[i] = x[i] + mu * x[i] * dt + vol[i] * x[i] * dw[i];
      }
    }
    return;
  }

  std::vector<double> mu(d), sigma(d);
  for (std::size_t l = 0; l < steps; ++l) {
    const double t = grid.time(l);
    const double dt = grid.step(l);
    std::span<const double> x(states.data() + l * d, d);
    double* next = states.data() + (l + 1) * d;
    const double* dw = increments.data() + l * d;
    model.drift(t, x, mu);
    model.diffusion(t, x, sigma);
    for (std::size_t i = 0; i < d; ++i) next[i] = x[i] + mu[i] * dt + sigma[i] * dw[i];
  }
}

namespace {

PathBatch simulate(const SdeModel& model, const TimeGrid& grid, std::size_t count,
                   NoiseKey noise, Scheme scheme) {
  if (count < 1) throw std::invalid_argument("path count must be >= 1");
  if (scheme == Scheme::kExactGbm && model.kind() != SdeModel::Kind::kGbm) {
    throw std::invalid_argument("exact stepping requires a GBM model");
  }
  PathBatch batch(grid, count, model.dimension(), noise);
  for_each_chunk(count, kPathChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      draw_increments(grid, model.dimension(), noise, j, batch.path_increments(j));
      integrate_path(model, grid, scheme, batch.path_increments(j), batch.path_states(j));
    }
  });
  return batch;
}

}  // namespace

PathBatch simulate_euler(const SdeModel& model, const TimeGrid& grid,
                         std::size_t count, NoiseKey noise) {
  return simulate(model, grid, count, noise, Scheme::kEuler);
}

PathBatch simulate_exact_gbm(const SdeModel& model, const TimeGrid& grid,
                             std::size_t count, NoiseKey noise) {
  return simulate(model, grid, count, noise, Scheme::kExactGbm);
}

}  // namespace dualstop
