#include "dualstop/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace dualstop {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "preset",      "spot",    "lambda", "L",  "n_train",      "n_test",        "reps",
      "upper_bound", "rep_std", "se",     "oracle_value", "train_seconds", "seed"};
  return columns;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_spot(const std::vector<double>& spot) {
  std::string s;
  for (std::size_t i = 0; i < spot.size(); ++i) s += (i ? ";" : "") + shortest(spot[i]);
  return s;
}

void write_csv(const Report& report, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\r\n";
  for (const auto& r : report.records) {
    const std::vector<std::string> fields{
        r.preset,
        format_spot(r.spot),
        shortest(r.lambda),
        std::to_string(r.order),
        std::to_string(r.n_train),
        std::to_string(r.n_test),
        std::to_string(r.reps),
        fixed(r.upper_bound, 6),
        fixed(r.rep_std, 6),
        fixed(r.se, 6),
        r.oracle_value ? fixed(*r.oracle_value, 6) : std::string(),
        fixed(r.train_seconds, 2),
        std::to_string(r.seed)};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << csv_escape(fields[i]);
    }
    out << "\r\n";
  }
}

void write_json(const Report& report, std::ostream& out) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back({
        {"preset", r.preset},
        {"spot", r.spot},
        {"lambda", r.lambda},
        {"L", r.order},
        {"n_train", r.n_train},
        {"n_test", r.n_test},
        {"reps", r.reps},
        {"upper_bound", r.upper_bound},
        {"rep_std", r.rep_std},
        {"se", r.se},
        {"oracle_value", optional_json(r.oracle_value)},
        {"train_seconds", r.train_seconds},
        {"seed", r.seed},
        {"train_objective", r.train_objective},
        {"train_variance", r.train_variance},
        {"zero_martingale_objective", r.zero_objective},
        {"zero_martingale_variance", r.zero_variance},
        {"repetition_means", r.repetition_means},
        {"beta", r.beta},
        {"reference",
         {{"true_value", optional_json(r.reference.true_value)},
          {"interval_low", optional_json(r.reference.interval_low)},
          {"interval_high", optional_json(r.reference.interval_high)},
          {"upper_bound_lambda0", optional_json(r.reference.upper_bound_lambda0)},
          {"std_lambda0", optional_json(r.reference.std_lambda0)},
          {"upper_bound_lambda2", optional_json(r.reference.upper_bound_lambda2)},
          {"std_lambda2", optional_json(r.reference.std_lambda2)}}},
    });
  }
  const nlohmann::json doc{
      {"records", records}, {"notes", report.notes}, {"warnings", report.warnings}};
  out << doc.dump(2) << "\n";
}

}  // namespace dualstop
