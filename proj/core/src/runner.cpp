#include "dualstop/runner.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dualstop/oracles.hpp"
#include "dualstop/parallel.hpp"
#include "json.hpp"

namespace dualstop {

Report run(const RunConfig& config) {
  const RunSpec& spec = config.spec;
  spec.validate();
  set_thread_count(config.threads);

  Report report;
  report.notes = spec.notes;
  for (const SpotRow& row : spec.rows) {
    const DualProblem problem = spec.problem(row);
    std::optional<double> oracle;
    if (spec.crr_oracle) {
      oracle = crr_american_put(row.spot.front(), spec.strike, spec.rate,
                                spec.volatility.front(), spec.maturity, spec.oracle_steps);
    }
    for (double lambda : spec.lambdas) {
      TrainSettings ts;
      ts.lambda = lambda;
      ts.optimizer = spec.optimizer;
      ts.paths = spec.n_train;
      ts.seed = config.seed;
      ts.streaming = spec.streaming;
      const TrainedDual trained = train(problem, ts);
      const DualEstimate est = evaluate(trained, spec.n_test, spec.reps, config.seed);

      ReportRecord rec;
      rec.preset = spec.name;
      rec.spot = row.spot;
      rec.lambda = lambda;
      rec.order = spec.order;
      rec.n_train = spec.n_train;
      rec.n_test = spec.n_test;
      rec.reps = spec.reps;
      rec.upper_bound = est.mean;
      rec.rep_std = est.repetition_std;
      rec.se = est.standard_error;
      rec.oracle_value = oracle;
      rec.train_seconds = trained.diagnostics.seconds;
      rec.seed = config.seed;
      rec.train_objective = trained.diagnostics.objective;
      rec.train_variance = trained.diagnostics.variance;
      rec.zero_objective = trained.diagnostics.zero_objective;
      rec.zero_variance = trained.diagnostics.zero_variance;
      rec.repetition_means = est.repetition_means;
      rec.beta = trained.beta;
      rec.reference = row.reference;

      std::ostringstream where;
      where << spec.name << " spot " << format_spot(row.spot) << " lambda " << lambda;
      if (!std::isfinite(est.mean) || !(est.standard_error >= 0.0)) {
        throw NumericalError("non-finite estimate for " + where.str(), trained.beta);
      }
      if (oracle && est.mean < *oracle - 4.0 * est.standard_error) {
        report.warnings.push_back(where.str() + ": upper bound " + std::to_string(est.mean) +
                                  " below oracle " + std::to_string(*oracle) +
                                  " by more than 4 standard errors");
      }
      if (trained.diagnostics.objective > trained.diagnostics.zero_objective + 1e-9) {
        report.warnings.push_back(where.str() +
                                  ": fitted objective exceeds the zero-martingale objective");
      }
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

int run_and_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = run(config);
  } catch (const NumericalError& e) {
    nlohmann::json diag{{"error", e.what()}, {"beta", e.beta()}, {"seed", config.seed}};
    err << diag.dump() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& n : report.notes) err << "note: " << n << "\n";
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  std::ofstream file;
  std::ostream* sink = &out;
  if (config.output) {
    file.open(*config.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << *config.output << "'\n";
      return kExitUsage;
    }
    sink = &file;
  }
  if (config.format == ReportFormat::kJson) {
    write_json(report, *sink);
  } else {
    write_csv(report, *sink);
  }
  return kExitOk;
}

}  // namespace dualstop
