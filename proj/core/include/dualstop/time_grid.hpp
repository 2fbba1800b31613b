#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dualstop {

// Ascending time axis 0 = t_0 < t_1 < ... < t_S = T (years).
class TimeGrid {
 public:
  // Tolerance under which a mandatory date and a uniform node are merged.
  static constexpr double kMergeTolerance = 1e-12;

  // Uniform partition of [0, maturity] into n_steps steps, merged with the
  // mandatory dates. Every mandatory date appears exactly in times().
  static TimeGrid build(double maturity, std::size_t n_steps,
                        std::span<const double> mandatory_dates = {});

  std::span<const double> times() const { return times_; }
  double time(std::size_t l) const { return times_[l]; }
  double maturity() const { return times_.back(); }
  // Number of grid points, steps() + 1.
  std::size_t size() const { return times_.size(); }
  std::size_t steps() const { return times_.size() - 1; }
  double step(std::size_t l) const { return times_[l + 1] - times_[l]; }

  // Index of the node equal to t within tol, if any.
  std::optional<std::size_t> index_of(double t,
                                      double tol = kMergeTolerance) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  explicit TimeGrid(std::vector<double> times) : times_(std::move(times)) {}
  std::vector<double> times_;
};

}  // namespace dualstop
