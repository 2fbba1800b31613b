#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dualstop {

enum class BasisLayout {
  // [zeta_0..zeta_L, xi_0..xi_L](y), Q = 2(L+1).
  kSingleAsset,
  // Per Brownian dimension i: zeta_k(y^i), xi_k(y^i), the same two gated by
  // the rank indicator, and zeta_k, xi_k of sum_j y^j; 6(L+1) per dimension.
  kTwoAssetMinMax,
};

// Rank indicator of the two_asset_minmax layout. kLowest gates on
// y^i <= min_{j != i} y^j, kHighest on y^i >= max_{j != i} y^j. Ties count
// as satisfied in every block.
enum class IndicatorRule { kLowest, kHighest };

// Which side of the strike the clipped functions resolve. kDirect feeds y
// to zeta/xi as is, so they vary for x near K and saturate to 1 above it.
// kReflected feeds -y, which suits put-type payoffs whose hedge lives below
// the strike. Rank indicators always compare the unreflected y.
enum class BasisOrientation { kDirect, kReflected };

std::string_view to_string(BasisLayout layout);
BasisLayout parse_basis_layout(std::string_view name);
std::string_view to_string(IndicatorRule rule);
IndicatorRule parse_indicator_rule(std::string_view name);
std::string_view to_string(BasisOrientation orientation);
BasisOrientation parse_basis_orientation(std::string_view name);

struct BasisSpec {
  BasisLayout layout = BasisLayout::kSingleAsset;
  int order = 5;  // L
  double strike = 100.0;
  double maturity = 0.5;
  std::size_t dimension = 1;
  IndicatorRule indicator = IndicatorRule::kLowest;
  BasisOrientation orientation = BasisOrientation::kDirect;

  void validate() const;
  std::size_t features_per_dimension() const;
  // Flat feature count Q; feature q belongs to dimension q / features_per_dimension().
  std::size_t feature_count() const { return features_per_dimension() * dimension; }
};

// y_t(x) = log(x / K) / (T - t); requires x > 0 and t < T.
double transform(double t, double x, double strike, double maturity);

struct ClippedTrig {
  double zeta;  // 0 below -0.5, sin(kz) inside, 1 above 0.5
  double xi;    // 0 below -0.5, cos(kz) inside, 1 above 0.5
};
ClippedTrig clipped_trig_pair(int k, double z);

// zeta_0..zeta_L into zeta and xi_0..xi_L into xi, via the angle-addition
// recurrence inside |z| <= 0.5.
void clipped_trig_series(int order, double z, std::span<double> zeta,
                         std::span<double> xi);

// Evaluates the flat feature vector; owns scratch buffers, so use one
// instance per thread.
class FeatureMap {
 public:
  explicit FeatureMap(const BasisSpec& spec);

  const BasisSpec& spec() const { return spec_; }
  std::size_t feature_count() const { return spec_.feature_count(); }

  // out has feature_count() entries, grouped by Brownian dimension.
  void evaluate(double t, std::span<const double> x, std::span<double> out);

 private:
  BasisSpec spec_;
  std::size_t terms_;  // L + 1
  std::vector<double> y_;
  std::vector<double> trig_;      // per asset: zeta block then xi block
  std::vector<double> sum_trig_;  // trig of sum_j y^j
};

// One feature vector per Brownian dimension.
std::vector<std::vector<double>> assemble_features(const BasisSpec& spec, double t,
                                                   std::span<const double> x);

}  // namespace dualstop
