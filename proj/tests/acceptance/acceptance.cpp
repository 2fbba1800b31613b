// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualstop/dual_objective.hpp"
#include "dualstop/estimator.hpp"
#include "dualstop/martingale.hpp"
#include "dualstop/oracles.hpp"
#include "dualstop/presets.hpp"

using namespace dualstop;

namespace {

constexpr std::uint64_t kSeed = 1;

// Criterion 1
constexpr double kTable1Tolerance = 0.05;
constexpr double kOracleSigmas = 4.0;
const std::map<double, double> kTable1Reference{{80.0, 21.64156}, {100.0, 9.94712},
                                                {120.0, 4.04883}};
// Criterion 2
constexpr double kStdRatio = 0.5;
// Criterion 3
constexpr std::size_t kCrrSteps = 20'000;
constexpr double kCrrTolerance = 0.01;
const std::map<double, double> kTable1True{
    {80.0, 21.6059}, {90.0, 14.9187}, {100.0, 9.9458}, {110.0, 6.4352}, {120.0, 4.0611}};
// Criterion 4
constexpr double kTreeTolerance = 1e-12;
// Criterion 5
constexpr int kGradientPoints = 10;
constexpr double kGradientTolerance = 1e-5;
// Criterion 6
constexpr int kVarianceVectors = 100;
constexpr double kVarianceTolerance = 1e-12;
// Criterion 7
constexpr std::size_t kSandwichPaths = 1000;
// Criterion 8
constexpr std::size_t kMartingalePaths = 100'000;
// Criterion 9
constexpr double kMaxCallReference = 8.08012;
constexpr double kMaxCallTolerance = 0.1;
constexpr double kMaxCallLower = 8.053;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Fit {
  TrainedDual trained;
  DualEstimate estimate;
};

// Table 1 fits shared by criteria 1, 2 and 8, keyed by (spot, lambda).
class Table1Fits {
 public:
  Table1Fits() : spec_(preset_spec("table1")) {}

  const Fit& get(double spot, double lambda) {
    const auto key = std::make_pair(spot, lambda);
    auto it = fits_.find(key);
    if (it != fits_.end()) return it->second;
    const DualProblem problem = spec_.problem(SpotRow{{spot}, {}});
    TrainSettings ts;
    ts.lambda = lambda;
    ts.optimizer = spec_.optimizer;
    ts.paths = spec_.n_train;
    ts.seed = kSeed;
    TrainedDual trained = train(problem, ts);
    DualEstimate est = evaluate(trained, spec_.n_test, spec_.reps, kSeed);
    std::printf("  table1 spot %g lambda %g: upper bound %.5f rep_std %.5f se %.5f (%.1f s)\n",
                spot, lambda, est.mean, est.repetition_std, est.standard_error,
                trained.diagnostics.seconds);
    std::fflush(stdout);
    return fits_.emplace(key, Fit{std::move(trained), std::move(est)}).first->second;
  }

  const RunSpec& spec() const { return spec_; }

 private:
  RunSpec spec_;
  std::map<std::pair<double, double>, Fit> fits_;
};

double crr(const RunSpec& s, double spot) {
  return crr_american_put(spot, s.strike, s.rate, s.volatility.front(), s.maturity, kCrrSteps);
}

Outcome criterion1(Table1Fits& fits) {
  Outcome o;
  for (const auto& [spot, reference] : kTable1Reference) {
    const Fit& f = fits.get(spot, 2.0);
    const double oracle = crr(fits.spec(), spot);
    const double ub = f.estimate.mean;
    const double se = f.estimate.standard_error;
    o.require(std::abs(ub - reference) <= kTable1Tolerance,
              "spot " + fmt("%g", spot) + " |" + fmt("%.5f", ub) + " - " +
                  fmt("%.5f", reference) + "| = " + fmt("%.5f", std::abs(ub - reference)) +
                  " <= " + fmt("%g", kTable1Tolerance));
    o.require(ub >= oracle - kOracleSigmas * se,
              "spot " + fmt("%g", spot) + " bound >= CRR " + fmt("%.5f", oracle) + " - 4 SE");
  }
  return o;
}

Outcome criterion2(Table1Fits& fits) {
  Outcome o;
  for (double spot : {80.0, 100.0}) {
    const double penalized = fits.get(spot, 2.0).estimate.repetition_std;
    const double plain = fits.get(spot, 0.0).estimate.repetition_std;
    o.require(penalized <= kStdRatio * plain,
              "spot " + fmt("%g", spot) + " rep_std " + fmt("%.5f", penalized) + " vs " +
                  fmt("%.5f", plain) + " (ratio " + fmt("%.3f", penalized / plain) + ")");
  }
  return o;
}

Outcome criterion3() {
  const RunSpec s = preset_spec("table1");
  Outcome o;
  for (const auto& [spot, truth] : kTable1True) {
    const double v = crr(s, spot);
    o.require(std::abs(v - truth) <= kCrrTolerance,
              "spot " + fmt("%g", spot) + " CRR " + fmt("%.5f", v) + " vs " + fmt("%.4f", truth));
  }
  return o;
}

Outcome criterion4() {
  PayoffSpec payoff;
  payoff.strike = 100.0;
  payoff.rate = 0.06;
  const TreeSpec t = TreeSpec::crr(100.0, 0.4, 0.5, 10, payoff);
  const TreeDoobReport r = tree_doob_check(t);
  Outcome o;
  o.require(r.pathwise_max_gap <= kTreeTolerance,
            "max pathwise gap " + fmt("%.3e", r.pathwise_max_gap) + " over " +
                std::to_string(r.paths) + " paths");
  o.require(std::abs(r.bruteforce_value - r.value) <= kTreeTolerance,
            "brute force " + fmt("%.12f", r.bruteforce_value) + " vs backward induction " +
                fmt("%.12f", r.value));
  return o;
}

PathModel table1_path_model() {
  const RunSpec s = preset_spec("table1");
  return s.problem(SpotRow{{100.0}, {}}).path_model();
}

Outcome criterion5() {
  const PathModel pm = table1_path_model();
  const auto paths = MaterializedPaths::simulate(pm, 1000, NoiseKey{kSeed, 0});
  const auto w = quadrature_weights(pm.payoff, pm.grid, pm.observation);
  const DualObjective f(paths, w, 2.0);
  const double p = 100.0;
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> dist(0.0, 0.3);
  double worst = 0.0;
  for (int point = 0; point < kGradientPoints; ++point) {
    std::vector<double> beta(f.dimension());
    for (double& b : beta) b = dist(rng);
    const auto g = f.evaluate(beta, p).gradient;
    for (std::size_t q = 0; q < beta.size(); ++q) {
      const double h = 1e-5 * std::max(1.0, std::abs(beta[q]));
      auto up = beta;
      auto down = beta;
      up[q] += h;
      down[q] -= h;
      const double fd =
          (f.evaluate(up, p, false).value - f.evaluate(down, p, false).value) / (2.0 * h);
      const double scale = std::max(std::abs(g[q]), std::abs(fd));
      if (scale > 0.0) worst = std::max(worst, std::abs(fd - g[q]) / scale);
    }
  }
  Outcome o;
  o.require(worst <= kGradientTolerance,
            "max relative error " + fmt("%.3e", worst) + " (lambda 2, p 100, " +
                std::to_string(kGradientPoints) + " points)");
  return o;
}

Outcome criterion6() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> len(2, 400);
  std::normal_distribution<double> dist(10.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < kVarianceVectors; ++trial) {
    std::vector<double> z(static_cast<std::size_t>(len(rng)));
    for (double& v : z) v = dist(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (std::size_t j = i + 1; j < z.size(); ++j) acc += (z[i] - z[j]) * (z[i] - z[j]);
    }
    const double n = static_cast<double>(z.size());
    worst = std::max(worst, std::abs(acc / (n * (n - 1.0)) - unbiased_variance(z)));
  }
  Outcome o;
  o.require(worst <= kVarianceTolerance, "max difference " + fmt("%.3e", worst));
  return o;
}

Outcome criterion7() {
  const PathModel pm = table1_path_model();
  const auto paths = MaterializedPaths::simulate(pm, kSandwichPaths, NoiseKey{kSeed, 0});
  const auto w = quadrature_weights(pm.payoff, pm.grid, pm.observation);
  const double w_min = *std::min_element(w.begin(), w.end());
  double w_sum = 0.0;
  for (double x : w) w_sum += x;
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> dist(0.0, 0.3);
  std::vector<double> beta(paths.features());
  for (double& b : beta) b = dist(rng);
  const auto m = eval_martingale(paths.tensor(), beta);
  const std::size_t e = pm.observation.size();
  std::size_t violations = 0;
  for (double p : {20.0, 100.0, 500.0}) {
    for (std::size_t j = 0; j < paths.paths(); ++j) {
      const auto pay = paths.payoffs().subspan(j * e, e);
      const auto mj = std::span<const double>(m).subspan(j * e, e);
      const double z = pathwise_z(pay, mj, pm.observation);
      const double zp = pathwise_z_smooth(pay, mj, pm.observation, w, p);
      if (!(z + std::log(w_min) / p <= zp) || !(zp <= z + std::log(w_sum) / p)) ++violations;
    }
  }
  Outcome o;
  o.require(violations == 0, std::to_string(violations) + " violations over " +
                                 std::to_string(3 * paths.paths()) + " (path, p) pairs");
  return o;
}

Outcome criterion8(Table1Fits& fits) {
  const MartingaleCheck m = terminal_martingale(fits.get(100.0, 2.0).trained, kMartingalePaths, kSeed);
  Outcome o;
  o.require(std::abs(m.mean) <= 4.0 * m.standard_error,
            "mean M_T " + fmt("%.5f", m.mean) + ", SE " + fmt("%.5f", m.standard_error));
  return o;
}

Outcome criterion9() {
  const RunSpec spec = preset_spec("table3");
  const auto row = std::find_if(spec.rows.begin(), spec.rows.end(), [](const SpotRow& r) {
    return r.spot == std::vector<double>{90.0, 90.0};
  });
  Outcome o;
  if (row == spec.rows.end()) {
    o.require(false, "table3 preset has no (90,90) row");
    return o;
  }
  TrainSettings ts;
  ts.lambda = 2.0;
  ts.optimizer = spec.optimizer;
  ts.paths = spec.n_train;
  ts.seed = kSeed;
  const TrainedDual trained = train(spec.problem(*row), ts);
  const DualEstimate est = evaluate(trained, spec.n_test, spec.reps, kSeed);
  o.require(std::abs(est.mean - kMaxCallReference) <= kMaxCallTolerance,
            "upper bound " + fmt("%.5f", est.mean) + " vs " + fmt("%.5f", kMaxCallReference));
  o.require(est.mean >= kMaxCallLower, "bound >= " + fmt("%.3f", kMaxCallLower));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dualstop acceptance suite"};
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9};
  app.add_option("--criteria", criteria, "Criteria to run")->delimiter(',')->check(
      CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::set<int> selected(criteria.begin(), criteria.end());
  Table1Fits fits;
  int failures = 0;
  for (int c : selected) {
    Outcome o;
    try {
      switch (c) {
        case 1: o = criterion1(fits); break;
        case 2: o = criterion2(fits); break;
        case 3: o = criterion3(); break;
        case 4: o = criterion4(); break;
        case 5: o = criterion5(); break;
        case 6: o = criterion6(); break;
        case 7: o = criterion7(); break;
        case 8: o = criterion8(fits); break;
        case 9: o = criterion9(); break;
      }
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
