#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualstop/estimator.hpp"
#include "dualstop/optimizer.hpp"
#include "dualstop/payoff.hpp"
#include "dualstop/sieve_basis.hpp"

namespace dualstop {

// Reference figures attached to a benchmark row. They annotate
// reports and are never used by the computation.
struct RowReference {
  std::optional<double> true_value;
  std::optional<double> interval_low;
  std::optional<double> interval_high;
  std::optional<double> upper_bound_lambda0;
  std::optional<double> std_lambda0;
  std::optional<double> upper_bound_lambda2;
  std::optional<double> std_lambda2;
};

struct SpotRow {
  std::vector<double> spot;
  RowReference reference;
};

// A fully specified benchmark: one problem family, several spot rows and
// penalization values. Every job is one (row, lambda) pair.
struct RunSpec {
  std::string name;
  PayoffKind kind = PayoffKind::kPut1d;
  double strike = 100.0;
  double rate = 0.06;
  double dividend = 0.0;
  std::vector<double> volatility{0.4};  // one entry broadcasts to all assets
  double maturity = 0.5;
  bool continuous_exercise = true;
  std::vector<double> exercise_dates;

  BasisLayout layout = BasisLayout::kSingleAsset;
  IndicatorRule indicator = IndicatorRule::kLowest;
  int order = 5;
  // Unset means reflected for put-type payoffs and direct otherwise.
  std::optional<BasisOrientation> orientation;

  std::size_t n_disc = 200;
  std::size_t n_train = 10'000;
  std::size_t n_test = 100'000;
  std::size_t reps = 20;
  std::vector<double> lambdas{0.0, 2.0};
  OptimSettings optimizer;
  bool streaming = false;

  std::vector<SpotRow> rows;
  // Compute a CRR reference price (put_1d only).
  bool crr_oracle = false;
  std::size_t oracle_steps = 20'000;
  std::vector<std::string> notes;

  void validate() const;
  DualProblem problem(const SpotRow& row) const;
};

// kReflected for put_1d and min_put, kDirect for max_call.
BasisOrientation default_orientation(PayoffKind kind);

std::vector<std::string> preset_names();
// Throws std::invalid_argument for an unknown name.
RunSpec preset_spec(std::string_view name);

}  // namespace dualstop
