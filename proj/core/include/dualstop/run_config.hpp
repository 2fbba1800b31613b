#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dualstop/presets.hpp"

namespace dualstop {

// Malformed or invalid configuration; maps to the usage-error exit status.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { kCsv, kJson };
ReportFormat parse_report_format(std::string_view name);

struct RunConfig {
  std::optional<std::string> preset;  // unset for explicit-block configs
  RunSpec spec;
  std::uint64_t seed = 0;
  std::optional<std::string> output;  // stdout when unset
  ReportFormat format = ReportFormat::kCsv;
  unsigned threads = 1;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Keys accepted by apply_override.
const std::vector<std::string>& override_keys();

// Applies one documented override (lambda, n_train, n_test, reps, L, n_disc,
// spot, dimension). Lists are comma separated.
void apply_override(RunSpec& spec, std::string_view key, std::string_view value);

RunConfig preset_config(std::string_view preset, std::uint64_t seed);

// Strict JSON config: unknown keys are rejected, exactly one of "preset" or
// the explicit blocks must be present and "seed" is required.
RunConfig parse_config_text(std::string_view text, std::string_view source = "<config>");
RunConfig parse_config(const std::filesystem::path& file);

}  // namespace dualstop
