#include "aoicache/experiments.hpp"

#include <fstream>
#include <ostream>

#include "aoicache/error.hpp"
#include "aoicache/format.hpp"

namespace aoicache {

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Fig3: return "fig3";
    case Scenario::Fig4: return "fig4";
    case Scenario::Fig5: return "fig5";
    case Scenario::Fig6: return "fig6";
    case Scenario::Custom: return "custom";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const Scenario s : {Scenario::Fig3, Scenario::Fig4, Scenario::Fig5, Scenario::Fig6, Scenario::Custom}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

ScenarioConfig default_scenario(Scenario scenario) {
  ScenarioConfig config;
  config.scenario = scenario;
  switch (scenario) {
    case Scenario::Fig3:
      for (std::size_t n = 2; n <= 50; n += 2) config.sizes.push_back(n);
      break;
    case Scenario::Fig4:
      for (std::size_t n = 2; n <= 30; ++n) config.sizes.push_back(n);
      break;
    case Scenario::Fig5:
    case Scenario::Custom:
      config.sizes = {5};
      break;
    case Scenario::Fig6:
      config.sizes = {5};
      config.solver = SolverChoice::Kkt;
      break;
  }
  return config;
}

Catalog build_scenario(const ScenarioConfig& config, std::size_t n) {
  if (n == 0) throw ArgumentError("build_scenario: N must be at least 1");
  std::vector<FileSpec> files;
  files.reserve(n);
  switch (config.scenario) {
    case Scenario::Fig3: {
      const auto split = two_category_popularity(n, config.alpha);
      for (std::size_t i = 0; i < n; ++i) files.push_back({split.popularity[i], UpdateModel::constant(split.size[i])});
      break;
    }
    case Scenario::Fig4:
    case Scenario::Fig5:
    case Scenario::Custom: {
      const auto popularity = zipf_popularity(n, config.alpha);
      const auto model = UpdateModel::exponential(config.size, config.offset, config.rate);
      for (std::size_t i = 0; i < n; ++i) files.push_back({popularity[i], model});
      break;
    }
    case Scenario::Fig6: {
      const double p = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double rate = config.rate_step * static_cast<double>(i + 1);
        files.push_back({p, UpdateModel::exponential(config.size, config.offset, rate)});
      }
      break;
    }
  }
  return Catalog(std::move(files));
}

namespace {

SolverReport certified_kkt(const ScenarioConfig& config, const Catalog& catalog) {
  auto report = solve_kkt(catalog, config.kkt);
  if (!report.certified) {
    throw NumericalError("solve_scenario: N = " + std::to_string(catalog.size()) +
                         ": some h_n is not convex, so the KKT point is not certified");
  }
  return report;
}

}  // namespace

SolverReport solve_scenario(const ScenarioConfig& config, const Catalog& catalog) {
  switch (config.solver) {
    case SolverChoice::Kkt: return certified_kkt(config, catalog);
    case SolverChoice::Brb: return solve_brb(catalog, config.brb);
    case SolverChoice::Auto: break;
  }
  if (catalog.all_constant()) return solve_kkt(catalog, config.kkt);
  if (catalog.size() <= config.brb_max_files) return solve_brb(catalog, config.brb);
  return certified_kkt(config, catalog);
}

std::vector<ComparisonRow> run_comparison(const ScenarioConfig& config) {
  std::vector<ComparisonRow> rows;
  rows.reserve(config.sizes.size());
  for (const std::size_t n : config.sizes) {
    const Catalog catalog = build_scenario(config, n);
    const SolverReport proposed = solve_scenario(config, catalog);
    const Policy sqrt_policy = solve_sqrt_baseline(catalog);
    const auto sim_proposed = measure_policy(catalog, proposed.policy, config.horizon);
    const auto sim_sqrt = measure_policy(catalog, sqrt_policy, config.horizon);

    ComparisonRow row;
    row.files = n;
    row.relaxed_proposed = proposed.objective;
    row.relaxed_sqrt = sim_sqrt.relaxed_objective;
    row.simulated_proposed = sim_proposed.simulated_aoi;
    row.simulated_sqrt = sim_sqrt.simulated_aoi;
    row.method = proposed.method;
    row.lambdas = proposed.policy.lambdas;
    for (const auto& stats : sim_proposed.trace.files) row.utilization.push_back(stats.busy_time / config.horizon);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ProfileRow> utilization_profile(const ScenarioConfig& config) {
  if (config.sizes.empty()) throw ArgumentError("utilization_profile: no file count configured");
  const Catalog catalog = build_scenario(config, config.sizes.front());
  const SolverReport proposed = solve_scenario(config, catalog);
  const Policy sqrt_policy = solve_sqrt_baseline(catalog);
  const auto sim = measure_policy(catalog, proposed.policy, config.horizon);

  std::vector<ProfileRow> rows;
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    rows.push_back({n + 1, catalog[n].popularity, proposed.policy.lambdas[n], sqrt_policy.lambdas[n],
                    proposed.policy.target_intervals[n],
                    static_cast<double>(sim.trace.files[n].updates) / config.horizon});
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "N,obj_relaxed_opt,obj_relaxed_sqrt,aoi_sim_opt,aoi_sim_sqrt\n";
  for (const auto& row : rows) {
    out << row.files << ',' << format_number(row.relaxed_proposed) << ',' << format_number(row.relaxed_sqrt) << ','
        << format_number(row.simulated_proposed) << ',' << format_number(row.simulated_sqrt) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
  out << "file,p,lambda_opt,lambda_sqrt,tau_opt,freq\n";
  for (const auto& row : rows) {
    out << row.file << ',' << format_number(row.popularity) << ',' << format_number(row.lambda_proposed) << ','
        << format_number(row.lambda_sqrt) << ',' << format_number(row.tau_proposed) << ','
        << format_number(row.frequency) << '\n';
  }
}

std::filesystem::path reproduce_figure(const ScenarioConfig& config, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const auto path = directory / (std::string(to_string(config.scenario)) + ".csv");
  std::ofstream out(path);
  if (!out) throw ArgumentError("reproduce_figure: cannot open " + path.string());
  switch (config.scenario) {
    case Scenario::Fig3:
    case Scenario::Fig4:
    case Scenario::Custom:
      write_comparison_csv(out, run_comparison(config));
      break;
    case Scenario::Fig5:
    case Scenario::Fig6:
      write_profile_csv(out, utilization_profile(config));
      break;
  }
  if (!out) throw ArgumentError("reproduce_figure: write failed for " + path.string());
  return path;
}

}  // namespace aoicache
