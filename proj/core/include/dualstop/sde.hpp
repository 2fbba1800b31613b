#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dualstop/philox.hpp"
#include "dualstop/time_grid.hpp"

namespace dualstop {

// Diffusion dX = mu(t, X) dt + sigma(t, X) dW with d = m and a diagonal
// diffusion matrix, driven by independent Brownian motions.
class SdeModel {
 public:
  enum class Kind { kGbm, kGeneric };

  // Writes one value per coordinate into out.
  using CoefficientFn =
      std::function<void(double t, std::span<const double> x, std::span<double> out)>;

  // dX^i = (r - delta) X^i dt + sigma_i X^i dW^i. A single volatility is
  // shared by every asset.
  static SdeModel gbm(std::vector<double> spot, double rate, double dividend,
                      std::vector<double> volatility);
  static SdeModel generic(std::vector<double> spot, CoefficientFn drift,
                          CoefficientFn diffusion);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return spot_.size(); }
  std::span<const double> spot() const { return spot_; }
  double rate() const { return rate_; }
  double dividend() const { return dividend_; }
  std::span<const double> volatility() const { return volatility_; }

  void drift(double t, std::span<const double> x, std::span<double> out) const;
  // Diagonal entries sigma^i(t, x).
  void diffusion(double t, std::span<const double> x, std::span<double> out) const;

 private:
  SdeModel() = default;

  Kind kind_ = Kind::kGbm;
  std::vector<double> spot_;
  double rate_ = 0.0;
  double dividend_ = 0.0;
  std::vector<double> volatility_;
  CoefficientFn drift_fn_;
  CoefficientFn diffusion_fn_;
};

// Simulated trajectories. States are stored as [path][grid index][asset] and
// Brownian increments as [path][step][dimension].
class PathBatch {
 public:
  PathBatch(TimeGrid grid, std::size_t count, std::size_t dimension,
            NoiseKey noise);

  const TimeGrid& grid() const { return grid_; }
  std::size_t count() const { return count_; }
  std::size_t dimension() const { return dimension_; }
  const NoiseKey& noise() const { return noise_; }

  double state(std::size_t j, std::size_t l, std::size_t i) const {
    return states_[(j * grid_.size() + l) * dimension_ + i];
  }
  double increment(std::size_t j, std::size_t l, std::size_t i) const {
    return increments_[(j * grid_.steps() + l) * dimension_ + i];
  }
  // (S+1) x d states of path j.
  std::span<const double> path_states(std::size_t j) const;
  std::span<double> path_states(std::size_t j);
  // S x d increments of path j.
  std::span<const double> path_increments(std::size_t j) const;
  std::span<double> path_increments(std::size_t j);

  bool operator==(const PathBatch&) const = default;

 private:
  TimeGrid grid_;
  std::size_t count_;
  std::size_t dimension_;
  NoiseKey noise_;
  std::vector<double> states_;
  std::vector<double> increments_;
};

enum class Scheme { kEuler, kExactGbm };

// Draws the Brownian increments of one path: increments[l*d + i] is
// sqrt(dt_l) times a standard normal keyed by (noise, path, l, i).
void draw_increments(const TimeGrid& grid, std::size_t dimension,
                     const NoiseKey& noise, std::uint64_t path,
                     std::span<double> increments);

// Fills the (S+1) x d states of one path from given increments.
void integrate_path(const SdeModel& model, const TimeGrid& grid, Scheme scheme,
                    std::span<const double> increments, std::span<double> states);

// Euler scheme with coefficients evaluated at the left endpoint.
PathBatch simulate_euler(const SdeModel& model, const TimeGrid& grid,
                         std::size_t count, NoiseKey noise);

// Exact log-normal stepping for GBM, sharing the increment layout of
// simulate_euler so the two can be compared path by path.
PathBatch simulate_exact_gbm(const SdeModel& model, const TimeGrid& grid,
                             std::size_t count, NoiseKey noise);

}  // namespace dualstop
