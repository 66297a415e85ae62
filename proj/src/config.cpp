#include "aoicache/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "aoicache/error.hpp"
#include "aoicache/format.hpp"

namespace aoicache {
namespace {

constexpr std::array<std::string_view, 13> kGlobalKeys = {
    "method", "horizon", "scheduler", "eta", "delta", "tolerance", "scenario",
    "files",  "alpha",   "B",         "eps", "beta",  "beta_step"};
constexpr std::array<std::string_view, 6> kFileKeys = {"p", "model", "B", "eps", "beta", "lambda"};
constexpr double kRenormalizeTolerance = 1e-6;

using Fields = std::map<std::string, std::string, std::less<>>;

struct FileRow {
  std::size_t line;
  Fields fields;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  if (line == 0) throw ConfigError("config: " + what);
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view text, std::string_view key, std::size_t line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    fail(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text, std::string_view key, std::size_t line) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    fail(line, "'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool known(std::span<const std::string_view> keys, std::string_view key) {
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::pair<std::string, std::string> split_assignment(std::string_view text, std::size_t line) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) fail(line, "expected key=value, got '" + std::string(text) + "'");
  const auto key = trim(text.substr(0, eq));
  const auto value = trim(text.substr(eq + 1));
  if (key.empty() || value.empty()) fail(line, "empty key or value in '" + std::string(text) + "'");
  return {std::string(key), std::string(value)};
}

struct Settings {
  Fields values;
  std::map<std::string, std::size_t, std::less<>> lines;

  std::optional<std::string_view> get(std::string_view key) const {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return std::string_view(it->second);
  }
  std::size_t line_of(std::string_view key) const {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }
  std::optional<double> number(std::string_view key) const {
    const auto text = get(key);
    if (!text) return std::nullopt;
    return parse_number(*text, key, line_of(key));
  }
};

UpdateModel model_from_row(const FileRow& row) {
  const auto field = [&](std::string_view key) -> double {
    const auto it = row.fields.find(key);
    if (it == row.fields.end()) fail(row.line, "file row is missing '" + std::string(key) + "'");
    return parse_number(it->second, key, row.line);
  };
  const auto it = row.fields.find("model");
  if (it == row.fields.end()) fail(row.line, "file row is missing 'model'");
  const std::string& kind = it->second;
  try {
    if (kind == "constant") return UpdateModel::constant(field("B"));
    if (kind == "exponential") return UpdateModel::exponential(field("B"), field("eps"), field("beta"));
    if (kind == "rational") return UpdateModel::rational(field("B"), field("eps"));
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    fail(row.line, e.what());
  }
  fail(row.line, "unknown model '" + kind + "' (expected constant, exponential or rational)");
}

Catalog catalog_from_rows(const std::vector<FileRow>& rows, std::optional<std::vector<double>>& lambdas) {
  std::vector<double> popularity;
  std::vector<UpdateModel> models;
  std::vector<double> ratios;
  for (const auto& row : rows) {
    const auto p = row.fields.find("p");
    if (p == row.fields.end()) fail(row.line, "file row is missing 'p'");
    popularity.push_back(parse_number(p->second, "p", row.line));
    models.push_back(model_from_row(row));
    if (const auto l = row.fields.find("lambda"); l != row.fields.end()) {
      ratios.push_back(parse_number(l->second, "lambda", row.line));
    }
  }
  if (!ratios.empty() && ratios.size() != rows.size()) fail(0, "either every file row sets lambda or none does");
  if (!ratios.empty()) lambdas = std::move(ratios);

  double total = 0.0;
  for (const double p : popularity) {
    if (!(p > 0.0)) fail(0, "popularities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    fail(0, "popularities sum to " + format_number(total) + ", expected 1");
  }
  std::vector<FileSpec> files;
  for (std::size_t n = 0; n < rows.size(); ++n) files.push_back({popularity[n] / total, models[n]});
  return Catalog(std::move(files));
}

Catalog catalog_from_scenario(const Settings& settings, Scenario scenario) {
  ScenarioConfig config = default_scenario(scenario);
  const auto files = settings.get("files");
  if (!files) fail(settings.line_of("scenario"), "'scenario' requires 'files'");
  const std::size_t n = parse_count(*files, "files", settings.line_of("files"));
  config.alpha = settings.number("alpha").value_or(config.alpha);
  config.size = settings.number("B").value_or(config.size);
  config.offset = settings.number("eps").value_or(config.offset);
  config.rate = settings.number("beta").value_or(config.rate);
  config.rate_step = settings.number("beta_step").value_or(config.rate_step);
  try {
    return build_scenario(config, n);
  } catch (const ArgumentError& e) {
    fail(settings.line_of("scenario"), e.what());
  }
}

}  // namespace

std::optional<SolveMethod> parse_solve_method(std::string_view name) {
  if (name == "kkt") return SolveMethod::Kkt;
  if (name == "brb") return SolveMethod::Brb;
  if (name == "sqrt") return SolveMethod::Sqrt;
  return std::nullopt;
}

std::optional<Scheduler> parse_scheduler(std::string_view name) {
  if (name == "urgency") return Scheduler::Urgency;
  if (name == "roundrobin") return Scheduler::RoundRobin;
  return std::nullopt;
}

std::span<const std::string_view> config_keys() { return kGlobalKeys; }

RunConfig parse_run_config(std::istream& in, std::span<const std::string> overrides) {
  Settings settings;
  std::vector<FileRow> rows;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    if (text.starts_with("file ") || text.starts_with("file\t")) {
      FileRow row{line, {}};
      std::istringstream tokens{std::string(text.substr(5))};
      std::string token;
      while (tokens >> token) {
        auto [key, value] = split_assignment(token, line);
        if (!known(kFileKeys, key)) fail(line, "unknown file field '" + key + "'");
        if (!row.fields.emplace(key, value).second) fail(line, "duplicate file field '" + key + "'");
      }
      rows.push_back(std::move(row));
      continue;
    }
    auto [key, value] = split_assignment(text, line);
    if (!known(kGlobalKeys, key)) fail(line, "unknown key '" + key + "'");
    settings.lines[key] = line;
    settings.values[key] = value;
  }
  for (const auto& item : overrides) {
    auto [key, value] = split_assignment(item, 0);
    if (!known(kGlobalKeys, key)) fail(0, "unknown override key '" + key + "'");
    settings.lines[key] = 0;
    settings.values[key] = value;
  }

  std::optional<std::vector<double>> lambdas;
  const auto scenario_name = settings.get("scenario");
  std::optional<Catalog> catalog;
  if (scenario_name) {
    if (!rows.empty()) fail(settings.line_of("scenario"), "'scenario' cannot be combined with file rows");
    const auto scenario = parse_scenario(*scenario_name);
    if (!scenario) fail(settings.line_of("scenario"), "unknown scenario '" + std::string(*scenario_name) + "'");
    catalog.emplace(catalog_from_scenario(settings, *scenario));
  } else {
    if (rows.empty()) fail(0, "no file rows and no scenario: the catalog is empty");
    catalog.emplace(catalog_from_rows(rows, lambdas));
  }

  RunConfig config{.catalog = std::move(*catalog), .lambdas = std::move(lambdas)};
  if (const auto method = settings.get("method")) {
    const auto parsed = parse_solve_method(*method);
    if (!parsed) fail(settings.line_of("method"), "unknown method '" + std::string(*method) + "'");
    config.method = *parsed;
  }
  if (const auto scheduler = settings.get("scheduler")) {
    const auto parsed = parse_scheduler(*scheduler);
    if (!parsed) fail(settings.line_of("scheduler"), "unknown scheduler '" + std::string(*scheduler) + "'");
    config.scheduler = *parsed;
  }
  config.horizon = settings.number("horizon").value_or(config.horizon);
  if (!(config.horizon > 0.0)) fail(settings.line_of("horizon"), "horizon must be positive");
  config.brb.eta = settings.number("eta").value_or(config.brb.eta);
  config.brb.delta = settings.number("delta").value_or(config.brb.delta);
  config.kkt.tolerance = settings.number("tolerance").value_or(config.kkt.tolerance);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_run_config(in, overrides);
}

std::string format_catalog(const Catalog& catalog, const std::optional<std::vector<double>>& lambdas) {
  std::ostringstream out;
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    out << "file p=" << format_number(catalog[n].popularity);
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantDuration>) {
            out << " model=constant B=" << format_number(m.size);
          } else if constexpr (std::is_same_v<T, ExponentialDuration>) {
            out << " model=exponential B=" << format_number(m.size) << " eps=" << format_number(m.offset)
                << " beta=" << format_number(m.rate);
          } else {
            out << " model=rational B=" << format_number(m.size) << " eps=" << format_number(m.offset);
          }
        },
        catalog[n].model.params());
    if (lambdas) out << " lambda=" << format_number((*lambdas)[n]);
    out << '\n';
  }
  return out.str();
}

}  // namespace aoicache
