#include "dualstop/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualstop {

std::string_view to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::kPut1d: return "put_1d";
    case PayoffKind::kMinPut: return "min_put";
    case PayoffKind::kMaxCall: return "max_call";
  }
  return "unknown";
}

PayoffKind parse_payoff_kind(std::string_view name) {
  if (name == "put_1d") return PayoffKind::kPut1d;
  if (name == "min_put") return PayoffKind::kMinPut;
  if (name == "max_call") return PayoffKind::kMaxCall;
  throw std::invalid_argument("unknown payoff kind '" + std::string(name) + "'");
}

ExerciseSchedule ExerciseSchedule::bermudan(std::vector<double> dates) {
  ExerciseSchedule s;
  s.continuous = false;
  s.dates = std::move(dates);
  return s;
}

ExerciseSchedule ExerciseSchedule::equally_spaced(double maturity,
                                                  std::size_t intervals) {
  if (intervals < 1) throw std::invalid_argument("need at least one interval");
  std::vector<double> dates(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    dates[i] = maturity * static_cast<double>(i) / static_cast<double>(intervals);
  }
  dates.back() = maturity;
  return bermudan(std::move(dates));
}

void PayoffSpec::validate(double maturity) const {
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw std::invalid_argument("strike must be positive");
  }
  if (!std::isfinite(rate)) throw std::invalid_argument("rate must be finite");
  if (exercise.continuous) return;
  if (exercise.dates.empty()) {
    throw std::invalid_argument("bermudan schedule needs at least one date");
  }
  for (std::size_t k = 0; k < exercise.dates.size(); ++k) {
    const double d = exercise.dates[k];
    if (!(d >= 0.0 && d <= maturity)) {
      throw std::invalid_argument("exercise date outside [0, maturity]");
    }
    if (k > 0 && !(d > exercise.dates[k - 1])) {
      throw std::invalid_argument("exercise dates must be sorted and distinct");
    }
  }
}

double eval_payoff(const PayoffSpec& spec, double t, std::span<const double> x) {
  double intrinsic = 0.0;
  switch (spec.kind) {
    case PayoffKind::kPut1d:
      if (x.size() != 1) throw std::invalid_argument("put_1d needs a scalar state");
      intrinsic = spec.strike - x[0];
      break;
    case PayoffKind::kMinPut:
      if (x.size() < 2) throw std::invalid_argument("min_put needs d >= 2");
      intrinsic = spec.strike - *std::min_element(x.begin(), x.end());
      break;
    case PayoffKind::kMaxCall:
      if (x.size() < 2) throw std::invalid_argument("max_call needs d >= 2");
      intrinsic = *std::max_element(x.begin(), x.end()) - spec.strike;
      break;
  }
  if (!(intrinsic > 0.0)) return 0.0;
  return std::exp(-spec.rate * t) * intrinsic;
}

std::vector<std::size_t> exercise_indices(const PayoffSpec& spec,
                                          const TimeGrid& grid) {
  std::vector<std::size_t> out;
  if (spec.exercise.continuous) {
    out.resize(grid.size());
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = l;
    return out;
  }
  out.reserve(spec.exercise.dates.size());
  for (double d : spec.exercise.dates) {
    const auto idx = grid.index_of(d);
    if (!idx) {
      throw std::invalid_argument("exercise date " + std::to_string(d) +
                                  " is not a grid node");
    }
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dualstop
