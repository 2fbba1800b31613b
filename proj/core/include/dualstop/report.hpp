#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dualstop/presets.hpp"

namespace dualstop {

// One (row, lambda) result.
struct ReportRecord {
  std::string preset;
  std::vector<double> spot;
  double lambda = 0.0;
  int order = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t reps = 0;
  double upper_bound = 0.0;
  double rep_std = 0.0;
  double se = 0.0;
  std::optional<double> oracle_value;
  double train_seconds = 0.0;
  std::uint64_t seed = 0;

  // JSON-only diagnostics.
  double train_objective = 0.0;
  double train_variance = 0.0;
  double zero_objective = 0.0;
  double zero_variance = 0.0;
  std::vector<double> repetition_means;
  std::vector<double> beta;
  RowReference reference;
};

struct Report {
  std::vector<ReportRecord> records;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

// Fixed CSV header, in column order.
const std::vector<std::string>& csv_columns();

// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

std::string format_spot(const std::vector<double>& spot);

void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

}  // namespace dualstop
