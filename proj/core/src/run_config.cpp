#include "dualstop/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dualstop {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = value.find_first_of(",;", start);
    out.push_back(value.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    fail("override '" + std::string(key) + "': '" + s + "' is not a number");
  }
  return v;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail("override '" + std::string(key) + "': '" + std::string(text) +
         "' is not a non-negative integer");
  }
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

// Rows of the requested dimension; reference annotations are kept when the
// spot matches a catalog row.
std::vector<SpotRow> rows_with_spot(const RunSpec& spec, const std::vector<double>& spot) {
  std::set<std::size_t> dims;
  for (const auto& r : spec.rows) dims.insert(r.spot.size());
  std::vector<SpotRow> out;
  for (std::size_t d : dims) {
    std::vector<double> s = spot;
    if (s.size() == 1) s.assign(d, spot.front());
    if (s.size() != d) continue;
    SpotRow row{s, {}};
    for (const auto& r : spec.rows) {
      if (r.spot == s) row.reference = r.reference;
    }
    out.push_back(std::move(row));
  }
  if (out.empty()) fail("override 'spot': no row accepts a spot of that dimension");
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  fail("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

const std::vector<std::string>& override_keys() {
  static const std::vector<std::string> keys{"lambda", "n_train", "n_test", "reps",
                                             "L",      "n_disc",  "spot",   "dimension"};
  return keys;
}

void apply_override(RunSpec& spec, std::string_view key, std::string_view value) {
  if (key == "lambda") {
    spec.lambdas = parse_list(key, value);
  } else if (key == "n_train") {
    spec.n_train = parse_count(key, value);
  } else if (key == "n_test") {
    spec.n_test = parse_count(key, value);
  } else if (key == "reps") {
    spec.reps = parse_count(key, value);
  } else if (key == "L") {
    spec.order = static_cast<int>(parse_count(key, value));
  } else if (key == "n_disc") {
    spec.n_disc = parse_count(key, value);
  } else if (key == "spot") {
    spec.rows = rows_with_spot(spec, parse_list(key, value));
  } else if (key == "dimension") {
    const std::size_t d = parse_count(key, value);
    if (spec.layout == BasisLayout::kSingleAsset && d != 1) {
      fail("override 'dimension': this run is one-dimensional");
    }
    if (spec.layout == BasisLayout::kTwoAssetMinMax && d < 2) {
      fail("override 'dimension': multi-asset runs need dimension >= 2");
    }
    std::vector<SpotRow> kept;
    for (const auto& r : spec.rows) {
      if (r.spot.size() == d) kept.push_back(r);
    }
    if (kept.empty()) {
      kept.push_back(SpotRow{std::vector<double>(d, spec.rows.front().spot.front()), {}});
    }
    spec.rows = std::move(kept);
  } else {
    std::string allowed;
    for (const auto& k : override_keys()) allowed += (allowed.empty() ? "" : ", ") + k;
    fail("unknown override '" + std::string(key) + "' (allowed: " + allowed + ")");
  }
}

RunConfig preset_config(std::string_view preset, std::uint64_t seed) {
  RunConfig cfg;
  try {
    cfg.spec = preset_spec(preset);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  cfg.preset = std::string(preset);
  cfg.seed = seed;
  return cfg;
}

namespace {

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(std::string(where) + ": expected an object");
  std::vector<std::string> unknown;
  for (const auto& [k, v] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      unknown.push_back(k);
    }
  }
  if (!unknown.empty()) {
    std::string msg = std::string(where) + ": unknown key";
    msg += unknown.size() > 1 ? "s" : "";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      msg += (i ? ", '" : " '") + unknown[i] + "'";
    }
    fail(msg);
  }
}

template <typename T>
T field(const json& obj, std::string_view where, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
T field_or(const json& obj, std::string_view where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return field<T>(obj, where, key);
}

std::vector<double> number_or_list(const json& obj, std::string_view where,
                                   const char* key) {
  const json& v = obj.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return field<std::vector<double>>(obj, where, key);
  fail(std::string(where) + "." + key + ": expected a number or an array of numbers");
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text,
                                                    std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void parse_explicit(const json& root, RunSpec& spec, std::vector<std::string>& notes) {
  for (const char* block : {"model", "payoff", "basis"}) {
    if (!root.contains(block)) fail(std::string("explicit config: missing '") + block + "' block");
  }
  spec.name = field_or<std::string>(root, "config", "name", "custom");

  const json& model = root.at("model");
  check_keys(model, "model", {"kind", "spot", "rate", "dividend", "volatility"});
  if (field_or<std::string>(model, "model", "kind", "gbm") != "gbm") {
    fail("model.kind: only 'gbm' is supported in config files");
  }
  if (!model.contains("spot")) fail("model.spot: missing");
  if (!model.contains("volatility")) fail("model.volatility: missing");
  spec.rows = {SpotRow{number_or_list(model, "model", "spot"), {}}};
  spec.rate = field<double>(model, "model", "rate");
  spec.dividend = field_or<double>(model, "model", "dividend", 0.0);
  spec.volatility = number_or_list(model, "model", "volatility");

  const json& payoff = root.at("payoff");
  check_keys(payoff, "payoff", {"kind", "strike", "maturity", "rate", "exercise"});
  try {
    spec.kind = parse_payoff_kind(field<std::string>(payoff, "payoff", "kind"));
  } catch (const std::invalid_argument& e) {
    fail(std::string("payoff.kind: ") + e.what());
  }
  spec.strike = field<double>(payoff, "payoff", "strike");
  spec.maturity = field<double>(payoff, "payoff", "maturity");
  if (payoff.contains("rate") && field<double>(payoff, "payoff", "rate") != spec.rate) {
    fail("payoff.rate: must equal model.rate (discounting uses the model rate)");
  }
  spec.continuous_exercise = true;
  if (payoff.contains("exercise")) {
    const json& ex = payoff.at("exercise");
    if (ex.is_string()) {
      if (ex.get<std::string>() != "continuous") {
        fail("payoff.exercise: expected \"continuous\" or an object");
      }
    } else {
      check_keys(ex, "payoff.exercise", {"dates", "intervals"});
      spec.continuous_exercise = false;
      if (ex.contains("dates") == ex.contains("intervals")) {
        fail("payoff.exercise: give exactly one of 'dates' or 'intervals'");
      }
      spec.exercise_dates =
          ex.contains("dates")
              ? field<std::vector<double>>(ex, "payoff.exercise", "dates")
              : ExerciseSchedule::equally_spaced(
                    spec.maturity, field<std::size_t>(ex, "payoff.exercise", "intervals"))
                    .dates;
    }
  }
  if (spec.kind == PayoffKind::kMinPut) {
    notes.push_back("maturity T=" + std::to_string(spec.maturity) +
                    " set explicitly; the min-put reference table assumes T=0.5");
  }

  const json& basis = root.at("basis");
  check_keys(basis, "basis", {"layout", "order", "indicator", "orientation"});
  try {
    spec.layout = parse_basis_layout(field<std::string>(basis, "basis", "layout"));
    spec.indicator =
        parse_indicator_rule(field_or<std::string>(basis, "basis", "indicator", "lowest"));
    if (basis.contains("orientation")) {
      spec.orientation =
          parse_basis_orientation(field<std::string>(basis, "basis", "orientation"));
    }
  } catch (const std::invalid_argument& e) {
    fail(std::string("basis: ") + e.what());
  }
  spec.order = field<int>(basis, "basis", "order");

  if (root.contains("objective")) {
    const json& obj = root.at("objective");
    check_keys(obj, "objective", {"lambda"});
    if (obj.contains("lambda")) spec.lambdas = number_or_list(obj, "objective", "lambda");
  }
  if (root.contains("optimizer")) {
    const json& opt = root.at("optimizer");
    check_keys(opt, "optimizer",
               {"box", "p_schedule", "max_iterations", "gradient_tolerance", "armijo",
                "backtrack", "polish_iterations"});
    auto& o = spec.optimizer;
    o.box = field_or(opt, "optimizer", "box", o.box);
    o.p_schedule = field_or(opt, "optimizer", "p_schedule", o.p_schedule);
    o.max_iterations = field_or(opt, "optimizer", "max_iterations", o.max_iterations);
    o.gradient_tolerance =
        field_or(opt, "optimizer", "gradient_tolerance", o.gradient_tolerance);
    o.armijo = field_or(opt, "optimizer", "armijo", o.armijo);
    o.backtrack = field_or(opt, "optimizer", "backtrack", o.backtrack);
    o.polish_iterations = field_or(opt, "optimizer", "polish_iterations", o.polish_iterations);
  }
  if (root.contains("estimator")) {
    const json& est = root.at("estimator");
    check_keys(est, "estimator",
               {"n_train", "n_test", "reps", "n_disc", "streaming", "crr_oracle"});
    spec.n_train = field_or(est, "estimator", "n_train", spec.n_train);
    spec.n_test = field_or(est, "estimator", "n_test", spec.n_test);
    spec.reps = field_or(est, "estimator", "reps", spec.reps);
    spec.n_disc = field_or(est, "estimator", "n_disc", spec.n_disc);
    spec.streaming = field_or(est, "estimator", "streaming", spec.streaming);
    spec.crr_oracle = field_or(est, "estimator", "crr_oracle", spec.crr_oracle);
  }
}

}  // namespace

RunConfig parse_config_text(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
         ": parse error: " + e.what());
  }
  check_keys(root, "config",
             {"preset", "seed", "overrides", "output", "format", "threads", "name", "model",
              "payoff", "basis", "objective", "optimizer", "estimator"});

  const bool has_preset = root.contains("preset");
  const bool has_explicit = root.contains("model") || root.contains("payoff") ||
                            root.contains("basis") || root.contains("objective") ||
                            root.contains("optimizer") || root.contains("estimator") ||
                            root.contains("name");
  if (has_preset == has_explicit) {
    fail("config: exactly one of 'preset' or the explicit model/payoff/basis blocks is required");
  }
  if (!root.contains("seed")) fail("config: 'seed' is required");

  RunConfig cfg;
  const auto seed = field<std::int64_t>(root, "config", "seed");
  if (seed < 0) fail("config.seed: must be non-negative");
  if (has_preset) {
    cfg = preset_config(field<std::string>(root, "config", "preset"),
                        static_cast<std::uint64_t>(seed));
  } else {
    cfg.seed = static_cast<std::uint64_t>(seed);
    parse_explicit(root, cfg.spec, cfg.spec.notes);
  }
  if (root.contains("output")) cfg.output = field<std::string>(root, "config", "output");
  if (root.contains("format")) {
    cfg.format = parse_report_format(field<std::string>(root, "config", "format"));
  }
  cfg.threads = field_or<unsigned>(root, "config", "threads", cfg.threads);
  if (root.contains("overrides")) {
    const json& ov = root.at("overrides");
    if (!ov.is_object()) fail("config.overrides: expected an object");
    for (const auto& [k, v] : ov.items()) {
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_number()) {
        value = v.dump();
      } else if (v.is_array()) {
        for (const auto& item : v) {
          if (!item.is_number()) fail("config.overrides." + k + ": expected numbers");
          value += (value.empty() ? "" : ",") + item.dump();
        }
      } else {
        fail("config.overrides." + k + ": expected a number, string or array");
      }
      apply_override(cfg.spec, k, value);
      cfg.overrides.emplace_back(k, value);
    }
  }
  try {
    cfg.spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail("cannot open config file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), file.string());
}

}  // namespace dualstop
