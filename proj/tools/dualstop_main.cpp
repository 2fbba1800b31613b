// dualstop: trains and evaluates variance-penalized dual upper bounds for
// the benchmark presets or an explicit JSON config.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualstop/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dual upper bounds for optimal stopping problems"};

  std::string config_path;
  std::string preset;
  std::int64_t seed = -1;
  std::vector<std::string> sets;
  std::string out_path;
  std::string format;
  unsigned threads = 0;
  bool list_presets = false;

  auto* config_opt = app.add_option("--config", config_path, "JSON run configuration");
  auto* preset_opt = app.add_option("--preset", preset, "table1 | table2 | table3 | table4");
  config_opt->excludes(preset_opt);
  app.add_option("--seed", seed, "Random seed (required with --preset)");
  app.add_option("--set", sets, "Override KEY=VALUE (repeatable)");
  app.add_option("--out", out_path, "Report path (default: stdout)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_flag("--list-presets", list_presets, "Print the preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dualstop::kExitUsage;
  }

  if (list_presets) {
    for (const auto& name : dualstop::preset_names()) std::cout << name << "\n";
    return dualstop::kExitOk;
  }

  dualstop::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = dualstop::parse_config(config_path);
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    } else if (!preset.empty()) {
      if (seed < 0) throw dualstop::ConfigError("--seed is required with --preset");
      cfg = dualstop::preset_config(preset, static_cast<std::uint64_t>(seed));
    } else {
      throw dualstop::ConfigError("one of --config or --preset is required");
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw dualstop::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
      }
      dualstop::apply_override(cfg.spec, kv.substr(0, eq), kv.substr(eq + 1));
      cfg.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.spec.validate();
  } catch (const dualstop::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return dualstop::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return dualstop::kExitUsage;
  }
  if (!out_path.empty()) cfg.output = out_path;
  if (!format.empty()) cfg.format = dualstop::parse_report_format(format);
  if (app.count("--threads")) cfg.threads = threads;

  return dualstop::run_and_report(cfg, std::cout, std::cerr);
}
