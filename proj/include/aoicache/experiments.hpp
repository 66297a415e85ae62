#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aoicache/models.hpp"
#include "aoicache/sim.hpp"
#include "aoicache/solver.hpp"

namespace aoicache {

enum class Scenario {
  /// Two categories of constant-duration files, B = 1 and B = 5, Zipf within each.
  Fig3,
  /// Exponential durations (B = 1, eps = 0.02, beta = 0.015), Zipf popularity, sweep over N.
  Fig4,
  /// Same catalog as Fig4 at N = 5, per-file utilization profile.
  Fig5,
  /// N = 5, uniform popularity, beta_n = 0.1 n. Solved by certified KKT.
  Fig6,
  /// Exponential durations with the configured B, eps, beta and Zipf popularity.
  Custom,
};

std::string_view to_string(Scenario scenario);
std::optional<Scenario> parse_scenario(std::string_view name);

enum class SolverChoice {
  /// KKT closed form for constant catalogs, BRB up to brb_max_files, certified KKT beyond.
  Auto,
  /// KKT only; NumericalError if the convexity spot-check fails.
  Kkt,
  Brb,
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Fig4;
  std::vector<std::size_t> sizes;
  double alpha = 1.8;
  double size = 1.0;
  double offset = 0.02;
  double rate = 0.015;
  /// Fig6: beta_n = rate_step * n.
  double rate_step = 0.1;
  double horizon = 1e5;
  SolverChoice solver = SolverChoice::Auto;
  std::size_t brb_max_files = 5;
  BrbOptions brb{};
  KktOptions kkt{};
};

/// Scenario defaults: Fig3 N in {2, 4, ..., 50}; Fig4 N in {2, ..., 30}; Fig5/Fig6/Custom N = 5.
ScenarioConfig default_scenario(Scenario scenario);

/// Catalog of the scenario at size n. ArgumentError for odd n in Fig3.
Catalog build_scenario(const ScenarioConfig& config, std::size_t n);

/// Proposed-policy solve according to config.solver.
SolverReport solve_scenario(const ScenarioConfig& config, const Catalog& catalog);

struct ComparisonRow {
  std::size_t files = 0;
  double relaxed_proposed = 0.0;
  double relaxed_sqrt = 0.0;
  double simulated_proposed = 0.0;
  double simulated_sqrt = 0.0;
  SolverMethod method = SolverMethod::Kkt;
  std::vector<double> lambdas;
  std::vector<double> utilization;
};

/// Proposed vs square-root policy, relaxed and simulated (urgency scheduler), per N.
std::vector<ComparisonRow> run_comparison(const ScenarioConfig& config);

struct ProfileRow {
  std::size_t file = 0;  // 1-based
  double popularity = 0.0;
  double lambda_proposed = 0.0;
  double lambda_sqrt = 0.0;
  double tau_proposed = 0.0;
  /// Simulated update frequency K_n / T under the proposed policy.
  double frequency = 0.0;
};

/// Per-file profile at the first configured size.
std::vector<ProfileRow> utilization_profile(const ScenarioConfig& config);

/// N,obj_relaxed_opt,obj_relaxed_sqrt,aoi_sim_opt,aoi_sim_sqrt
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
/// file,p,lambda_opt,lambda_sqrt,tau_opt,freq
void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);

/// Runs the figure's experiment and writes <dir>/<figN>.csv. Returns the written path.
std::filesystem::path reproduce_figure(const ScenarioConfig& config, const std::filesystem::path& directory);

}  // namespace aoicache
