#include "dualstop/presets.hpp"

#include <stdexcept>
#include <string>

namespace dualstop {
namespace {

SpotRow row(std::vector<double> spot, RowReference ref) {
  return SpotRow{std::move(spot), ref};
}

RunSpec table1() {
  RunSpec s;
  s.name = "table1";
  s.kind = PayoffKind::kPut1d;
  s.strike = 100.0;
  s.rate = 0.06;
  s.volatility = {0.4};
  s.maturity = 0.5;
  s.layout = BasisLayout::kSingleAsset;
  s.order = 5;
  s.crr_oracle = true;
  s.rows = {
      row({80.0}, {21.6059, {}, {}, 21.63044, 0.04354, 21.64156, 0.01321}),
      row({90.0}, {14.9187, {}, {}, 14.92159, 0.01750, 14.93001, 0.00576}),
      row({100.0}, {9.9458, {}, {}, 9.93455, 0.01354, 9.94712, 0.00423}),
      row({110.0}, {6.4352, {}, {}, 6.41561, 0.01329, 6.42911, 0.00479}),
      row({120.0}, {4.0611, {}, {}, 4.03417, 0.01127, 4.04883, 0.00392}),
  };
  return s;
}

RunSpec table2() {
  RunSpec s;
  s.name = "table2";
  s.kind = PayoffKind::kMinPut;
  s.strike = 100.0;
  s.rate = 0.06;
  s.volatility = {0.4};
  s.maturity = 0.5;
  s.layout = BasisLayout::kTwoAssetMinMax;
  s.indicator = IndicatorRule::kLowest;
  s.order = 7;
  s.rows = {
      row({80.0, 80.0}, {37.30, {}, {}, 37.65877, 0.02832, 37.65921, 0.00912}),
      row({100.0, 100.0}, {25.06, {}, {}, 25.16745, 0.02341, 25.17551, 0.00778}),
      row({120.0, 120.0}, {15.92, {}, {}, 15.93370, 0.01949, 15.94191, 0.00611}),
  };
  s.notes = {"maturity T=0.5 is assumed for the two-asset min-put; the reference table "
             "does not state it"};
  return s;
}

RunSpec max_call_base() {
  RunSpec s;
  s.kind = PayoffKind::kMaxCall;
  s.strike = 100.0;
  s.rate = 0.05;
  s.dividend = 0.1;
  s.volatility = {0.2};
  s.maturity = 3.0;
  s.continuous_exercise = false;
  s.exercise_dates = ExerciseSchedule::equally_spaced(3.0, 9).dates;
  s.layout = BasisLayout::kTwoAssetMinMax;
  s.order = 7;
  return s;
}

RunSpec table3() {
  RunSpec s = max_call_base();
  s.name = "table3";
  s.indicator = IndicatorRule::kLowest;
  s.rows = {
      row({90.0, 90.0}, {{}, 8.053, 8.082, 8.07742, 0.00832, 8.08012, 0.00313}),
      row({100.0, 100.0}, {{}, 13.892, 13.934, 14.01900, 0.01405, 14.02131, 0.00466}),
      row({110.0, 110.0}, {{}, 21.316, 21.359, 21.60967, 0.01798, 21.62144, 0.00521}),
  };
  s.notes = {"for two assets the lowest and highest rank indicators span the same "
             "feature space"};
  return s;
}

RunSpec table4() {
  RunSpec s = max_call_base();
  s.name = "table4";
  s.indicator = IndicatorRule::kHighest;
  s.rows = {
      row({90.0, 90.0, 90.0}, {{}, 11.265, 11.308, 11.28986, 0.00939, 11.29100, 0.00326}),
      row({90.0, 90.0, 90.0, 90.0, 90.0},
          {{}, 16.602, 16.655, 16.68231, 0.01405, 16.69506, 0.00467}),
  };
  s.notes = {
      "basis for d>2 generalizes the two-asset layout: indicator 1(y^i >= max_j y^j) "
      "and trigonometric features of sum_j y^j",
      "the second reference upper-bound column is read as lambda=2"};
  return s;
}

}  // namespace

void RunSpec::validate() const {
  if (rows.empty()) throw std::invalid_argument("run has no spot rows");
  if (lambdas.empty()) throw std::invalid_argument("run has no lambda values");
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  }
  if (n_train < 2 || n_test < 2 || reps < 1 || n_disc < 1) {
    throw std::invalid_argument("need n_train >= 2, n_test >= 2, reps >= 1, n_disc >= 1");
  }
  if (crr_oracle && kind != PayoffKind::kPut1d) {
    throw std::invalid_argument("CRR oracle is available for put_1d only");
  }
  optimizer.validate();
  for (const auto& r : rows) problem(r).path_model();
}

DualProblem RunSpec::problem(const SpotRow& r) const {
  const std::size_t d = r.spot.size();
  std::vector<double> vol = volatility;
  if (vol.size() == 1) vol.assign(d, vol.front());
  if (vol.size() != d) throw std::invalid_argument("volatility count differs from dimension");

  PayoffSpec payoff;
  payoff.kind = kind;
  payoff.strike = strike;
  payoff.rate = rate;
  payoff.exercise = continuous_exercise ? ExerciseSchedule::every_node()
                                        : ExerciseSchedule::bermudan(exercise_dates);

  BasisSpec basis;
  basis.layout = layout;
  basis.order = order;
  basis.strike = strike;
  basis.maturity = maturity;
  basis.dimension = d;
  basis.indicator = indicator;
  basis.orientation = orientation.value_or(default_orientation(kind));
  basis.validate();

  return DualProblem{SdeModel::gbm(r.spot, rate, dividend, std::move(vol)),
                     std::move(payoff), basis, maturity, n_disc};
}

BasisOrientation default_orientation(PayoffKind kind) {
  return kind == PayoffKind::kMaxCall ? BasisOrientation::kDirect
                                      : BasisOrientation::kReflected;
}

std::vector<std::string> preset_names() { return {"table1", "table2", "table3", "table4"}; }

RunSpec preset_spec(std::string_view name) {
  if (name == "table1") return table1();
  if (name == "table2") return table2();
  if (name == "table3") return table3();
  if (name == "table4") return table4();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace dualstop
