#include "dualstop/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualstop {

TimeGrid TimeGrid::build(double maturity, std::size_t n_steps,
                         std::span<const double> mandatory_dates) {
  if (!(maturity > 0.0) || !std::isfinite(maturity)) {
    throw std::invalid_argument("grid maturity must be positive and finite");
  }
  if (n_steps < 1) throw std::invalid_argument("grid needs at least one step");

  std::vector<double> mandatory(mandatory_dates.begin(), mandatory_dates.end());
  for (double d : mandatory) {
    if (!(d >= 0.0 && d <= maturity)) {
      throw std::invalid_argument("mandatory date " + std::to_string(d) +
                                  " outside [0, maturity]");
    }
  }
  std::sort(mandatory.begin(), mandatory.end());

  std::vector<double> times;
  times.reserve(n_steps + 1 + mandatory.size());
  for (std::size_t l = 0; l <= n_steps; ++l) {
    times.push_back(maturity * static_cast<double>(l) /
                    static_cast<double>(n_steps));
  }
  times.back() = maturity;

  // Mandatory dates replace uniform nodes they coincide with, so they are
  // stored bit-exactly.
  for (double d : mandatory) {
    auto it = std::lower_bound(times.begin(), times.end(), d - kMergeTolerance);
    if (it != times.end() && std::abs(*it - d) <= kMergeTolerance) {
      *it = d;
    } else {
      times.insert(it, d);
    }
  }
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <= kMergeTolerance;
                          }),
              times.end());
  times.front() = 0.0;
  times.back() = maturity;
  return TimeGrid(std::move(times));
}

std::optional<std::size_t> TimeGrid::index_of(double t, double tol) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  if (it != times_.end() && std::abs(*it - t) <= tol) {
    return static_cast<std::size_t>(it - times_.begin());
  }
  return std::nullopt;
}

}  // namespace dualstop
