#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dualstop/time_grid.hpp"

namespace dualstop {

enum class PayoffKind { kPut1d, kMinPut, kMaxCall };

std::string_view to_string(PayoffKind kind);
PayoffKind parse_payoff_kind(std::string_view name);

// Continuous exercise means every grid node; Bermudan exercise lists dates.
struct ExerciseSchedule {
  bool continuous = true;
  std::vector<double> dates;

  static ExerciseSchedule every_node() { return {}; }
  static ExerciseSchedule bermudan(std::vector<double> dates);
  // t_i = i * maturity / intervals for i = 0..intervals.
  static ExerciseSchedule equally_spaced(double maturity, std::size_t intervals);
};

// Discounted exercise payoff G_t(x) = e^{-rt} g(x).
struct PayoffSpec {
  PayoffKind kind = PayoffKind::kPut1d;
  double strike = 100.0;
  double rate = 0.0;
  ExerciseSchedule exercise;

  // Throws std::invalid_argument on a malformed spec.
  void validate(double maturity) const;
};

double eval_payoff(const PayoffSpec& spec, double t, std::span<const double> x);

// Grid indices at which exercise is allowed, ascending.
std::vector<std::size_t> exercise_indices(const PayoffSpec& spec,
                                          const TimeGrid& grid);

}  // namespace dualstop
