#include "dualstop/sieve_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualstop {
namespace {
constexpr double kClip = 0.5;
}

std::string_view to_string(BasisLayout layout) {
  return layout == BasisLayout::kSingleAsset ? "single_asset" : "two_asset_minmax";
}

BasisLayout parse_basis_layout(std::string_view name) {
  if (name == "single_asset") return BasisLayout::kSingleAsset;
  if (name == "two_asset_minmax") return BasisLayout::kTwoAssetMinMax;
  throw std::invalid_argument("unknown basis layout '" + std::string(name) + "'");
}

std::string_view to_string(IndicatorRule rule) {
  return rule == IndicatorRule::kLowest ? "lowest" : "highest";
}

IndicatorRule parse_indicator_rule(std::string_view name) {
  if (name == "lowest") return IndicatorRule::kLowest;
  if (name == "highest") return IndicatorRule::kHighest;
  throw std::invalid_argument("unknown indicator rule '" + std::string(name) + "'");
}

std::string_view to_string(BasisOrientation orientation) {
  return orientation == BasisOrientation::kDirect ? "direct" : "reflected";
}

BasisOrientation parse_basis_orientation(std::string_view name) {
  if (name == "direct") return BasisOrientation::kDirect;
  if (name == "reflected") return BasisOrientation::kReflected;
  throw std::invalid_argument("unknown basis orientation '" + std::string(name) + "'");
}

void BasisSpec::validate() const {
  if (order < 0) throw std::invalid_argument("basis order must be >= 0");
  if (!(strike > 0.0)) throw std::invalid_argument("basis strike must be positive");
  if (!(maturity > 0.0)) throw std::invalid_argument("basis maturity must be positive");
  if (layout == BasisLayout::kSingleAsset && dimension != 1) {
    throw std::invalid_argument("single_asset layout requires dimension 1");
  }
  if (layout == BasisLayout::kTwoAssetMinMax && dimension < 2) {
    throw std::invalid_argument("two_asset_minmax layout requires dimension >= 2");
  }
}

std::size_t BasisSpec::features_per_dimension() const {
  const std::size_t terms = static_cast<std::size_t>(order) + 1;
  return layout == BasisLayout::kSingleAsset ? 2 * terms : 6 * terms;
}

double transform(double t, double x, double strike, double maturity) {
  if (!(t < maturity)) {
    throw std::domain_error("transform evaluated at t >= maturity");
  }
  if (!(x > 0.0)) throw std::domain_error("transform needs a positive price");
  return std::log(x / strike) / (maturity - t);
}

ClippedTrig clipped_trig_pair(int k, double z) {
  if (k < 0) throw std::invalid_argument("trig order must be >= 0");
  if (z < -kClip) return {0.0, 0.0};
  if (z > kClip) return {1.0, 1.0};
  return {std::sin(k * z), std::cos(k * z)};
}

void clipped_trig_series(int order, double z, std::span<double> zeta,
                         std::span<double> xi) {
  const std::size_t terms = static_cast<std::size_t>(order) + 1;
  if (z < -kClip || z > kClip) {
    const double v = z > kClip ? 1.0 : 0.0;
    std::fill_n(zeta.begin(), terms, v);
    std::fill_n(xi.begin(), terms, v);
    return;
  }
  const double s1 = std::sin(z);
  const double c1 = std::cos(z);
  double s = 0.0;
  double c = 1.0;
  for (std::size_t k = 0; k < terms; ++k) {
    zeta[k] = s;
    xi[k] = c;
    const double sn = s * c1 + c * s1;
    c = c * c1 - s * s1;
    s = sn;
  }
}

FeatureMap::FeatureMap(const BasisSpec& spec)
    : spec_(spec),
      terms_(static_cast<std::size_t>(spec.order) + 1),
      y_(spec.dimension),
      trig_(2 * terms_ * spec.dimension),
      sum_trig_(2 * terms_) {
  spec_.validate();
}

void FeatureMap::evaluate(double t, std::span<const double> x,
                          std::span<double> out) {
  const std::size_t d = spec_.dimension;
  if (x.size() != d) throw std::invalid_argument("state dimension mismatch");
  if (out.size() != spec_.feature_count()) {
    throw std::invalid_argument("feature buffer size mismatch");
  }
  const std::size_t n = terms_;
  const double sign = spec_.orientation == BasisOrientation::kReflected ? -1.0 : 1.0;
  double y_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    y_[i] = transform(t, x[i], spec_.strike, spec_.maturity);
    y_sum += y_[i];
    std::span<double> block(trig_.data() + 2 * n * i, 2 * n);
    clipped_trig_series(spec_.order, sign * y_[i], block.first(n), block.last(n));
  }

  if (spec_.layout == BasisLayout::kSingleAsset) {
    std::copy(trig_.begin(), trig_.end(), out.begin());
    return;
  }

  clipped_trig_series(spec_.order, sign * y_sum, std::span(sum_trig_).first(n),
                      std::span(sum_trig_).last(n));
  const std::size_t per_dim = 6 * n;
  for (std::size_t i = 0; i < d; ++i) {
    bool gate = true;
    for (std::size_t j = 0; j < d && gate; ++j) {
      if (j == i) continue;
      gate = spec_.indicator == IndicatorRule::kLowest ? y_[i] <= y_[j]
                                                        : y_[i] >= y_[j];
    }
    const double g = gate ? 1.0 : 0.0;
    const double* own = trig_.data() + 2 * n * i;
    double* dst = out.data() + per_dim * i;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      dst[k] = own[k];
      dst[2 * n + k] = g * own[k];
      dst[4 * n + k] = sum_trig_[k];
    }
  }
}

std::vector<std::vector<double>> assemble_features(const BasisSpec& spec, double t,
                                                   std::span<const double> x) {
  FeatureMap map(spec);
  std::vector<double> flat(spec.feature_count());
  map.evaluate(t, x, flat);
  const std::size_t per_dim = spec.features_per_dimension();
  std::vector<std::vector<double>> out(spec.dimension);
  for (std::size_t i = 0; i < spec.dimension; ++i) {
    out[i].assign(flat.begin() + per_dim * i, flat.begin() + per_dim * (i + 1));
  }
  return out;
}

}  // namespace dualstop
