#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aoicache/config.hpp"
#include "aoicache/error.hpp"
#include "aoicache/experiments.hpp"
#include "aoicache/format.hpp"
#include "aoicache/sim.hpp"
#include "aoicache/solver.hpp"

namespace {

using namespace aoicache;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int verbosity = 0;
};

std::filesystem::path output_directory(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("AOICACHE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path.string());
  return out;
}

SolverReport solve(const RunConfig& config) {
  switch (config.method) {
    case SolveMethod::Kkt: {
      auto report = solve_kkt(config.catalog, config.kkt);
      if (!report.certified) {
        std::cerr << "warning: some h_n failed the convexity check; the KKT point may not be optimal (try --method brb)\n";
      }
      return report;
    }
    case SolveMethod::Brb: return solve_brb(config.catalog, config.brb);
    case SolveMethod::Sqrt: {
      SolverReport report;
      report.policy = solve_sqrt_baseline(config.catalog);
      report.objective = policy_objective(config.catalog, report.policy);
      report.method = SolverMethod::SqrtWeighted;
      double total = 0.0;
      for (const double l : report.policy.lambdas) total += l;
      report.feasibility_gap = std::abs(total - 1.0);
      return report;
    }
  }
  throw ArgumentError("unknown method");
}

std::string_view method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::Kkt: return "kkt";
    case SolveMethod::Brb: return "brb";
    case SolveMethod::Sqrt: return "sqrt";
  }
  return "unknown";
}

void print_policy(std::ostream& out, const Catalog& catalog, const Policy& policy) {
  out << "file,p,lambda,tau\n";
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    out << n + 1 << ',' << format_number(catalog[n].popularity) << ',' << format_number(policy.lambdas[n]) << ','
        << format_number(policy.target_intervals[n]) << '\n';
  }
}

RunConfig load(const Common& common, const std::string& method_flag) {
  auto overrides = common.overrides;
  if (!method_flag.empty()) overrides.push_back("method=" + method_flag);
  return load_run_config(common.config_path, overrides);
}

int cmd_solve(const Common& common, const std::string& method_flag) {
  const RunConfig config = load(common, method_flag);
  const auto start = std::chrono::steady_clock::now();
  const SolverReport report = solve(config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "method: " << method_name(config.method) << '\n'
            << "objective: " << format_number(report.objective) << '\n';
  if (report.waterlevel) std::cout << "waterlevel: " << format_number(*report.waterlevel) << '\n';
  std::cout << "feasibility_gap: " << format_number(report.feasibility_gap) << '\n';
  if (config.method == SolveMethod::Brb) std::cout << "optimality_gap: " << format_number(report.optimality_gap) << '\n';
  print_policy(std::cout, config.catalog, report.policy);
  if (common.verbosity > 0) {
    std::cerr << "solver: " << to_string(report.method) << ", iterations " << report.iterations << ", certified "
              << (report.certified ? "yes" : "no") << ", " << format_number(seconds) << " s\n";
  }
  if (!common.out_dir.empty() || std::getenv("AOICACHE_OUT_DIR") != nullptr) {
    const auto path = output_directory(common.out_dir) / "solution.csv";
    auto out = open_output(path);
    print_policy(out, config.catalog, report.policy);
    if (common.verbosity > 0) std::cerr << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

struct SimulateFlags {
  std::string method;
  std::optional<double> horizon;
  std::string scheduler;
  bool verify = false;
  bool no_trace = false;
};

int cmd_simulate(const Common& common, const SimulateFlags& flags) {
  auto overrides = common.overrides;
  if (flags.horizon) overrides.push_back("horizon=" + format_number(*flags.horizon));
  if (!flags.scheduler.empty()) overrides.push_back("scheduler=" + flags.scheduler);
  if (!flags.method.empty()) overrides.push_back("method=" + flags.method);
  const RunConfig config = load_run_config(common.config_path, overrides);

  const Policy policy = config.lambdas ? make_policy(config.catalog, *config.lambdas) : solve(config).policy;
  const auto measured = measure_policy(config.catalog, policy, config.horizon, config.scheduler, !flags.no_trace);

  std::cout << "horizon: " << format_number(config.horizon) << '\n'
            << "scheduler: " << to_string(config.scheduler) << '\n'
            << "simulated_aoi: " << format_number(measured.simulated_aoi) << '\n'
            << "relaxed_objective: " << format_number(measured.relaxed_objective) << '\n'
            << "relative_gap: " << format_number(measured.relative_gap) << '\n'
            << "busy_fraction: " << format_number(measured.trace.busy_fraction) << '\n';

  const auto dir = output_directory(common.out_dir);
  {
    auto out = open_output(dir / "summary.csv");
    write_summary_csv(out, config.catalog, policy, measured.trace);
  }
  if (!flags.no_trace) {
    auto out = open_output(dir / "trace.csv");
    write_trace_csv(out, measured.trace);
  }
  if (common.verbosity > 0) {
    std::cerr << "updates: " << measured.trace.updates.size() << ", wrote " << (dir / "summary.csv").string()
              << (flags.no_trace ? "" : " and trace.csv") << '\n';
  }

  if (flags.verify) {
    if (flags.no_trace) throw ArgumentError("--verify needs the trace; drop --no-trace");
    const auto problems = verify_trace(config.catalog, measured.trace);
    for (const auto& problem : problems) std::cerr << "violation: " << problem << '\n';
    if (!problems.empty()) return kExitNumerical;
    std::cout << "verify: ok\n";
  }
  return kExitOk;
}

int cmd_reproduce(const Common& common, const std::string& figure, std::optional<double> horizon) {
  const auto scenario = parse_scenario(figure);
  if (!scenario || *scenario == Scenario::Custom) throw ArgumentError("unknown figure '" + figure + "'");
  auto config = default_scenario(*scenario);
  if (horizon) {
    if (!(*horizon > 0.0)) throw ArgumentError("--T must be positive");
    config.horizon = *horizon;
  }
  const auto path = reproduce_figure(config, output_directory(common.out_dir));
  std::cout << "wrote " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information cache refresh: solvers, simulator and experiment sweeps"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("-v,--verbose", common.verbosity, "More diagnostics on stderr");

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", common.config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", common.overrides, "Override a global key, key=value (repeatable)");
    sub->add_option("--out", common.out_dir, "Output directory (default: $AOICACHE_OUT_DIR or .)");
  };

  std::string solve_method;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the utilization policy");
  add_config(solve_cmd);
  solve_cmd->add_option("--method", solve_method, "kkt, brb or sqrt")
      ->check(CLI::IsMember({"kkt", "brb", "sqrt"}));

  SimulateFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the urgency scheduler for a policy");
  add_config(sim_cmd);
  sim_cmd->add_option("--method", sim_flags.method, "Solver when the config has no lambdas")
      ->check(CLI::IsMember({"kkt", "brb", "sqrt"}));
  sim_cmd->add_option("--T", sim_flags.horizon, "Horizon");
  sim_cmd->add_option("--scheduler", sim_flags.scheduler, "urgency or roundrobin")
      ->check(CLI::IsMember({"urgency", "roundrobin"}));
  sim_cmd->add_flag("--verify", sim_flags.verify, "Re-check the trace invariants; exit 3 on violation");
  sim_cmd->add_flag("--no-trace", sim_flags.no_trace, "Skip trace.csv");

  std::string figure;
  std::optional<double> reproduce_horizon;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a figure's sweep and write its CSV");
  reproduce_cmd->add_option("--figure", figure, "fig3, fig4, fig5 or fig6")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
  reproduce_cmd->add_option("--out", common.out_dir, "Output directory (default: $AOICACHE_OUT_DIR or .)");
  reproduce_cmd->add_option("--T", reproduce_horizon, "Simulation horizon per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(common, solve_method);
    if (*sim_cmd) return cmd_simulate(common, sim_flags);
    return cmd_reproduce(common, figure, reproduce_horizon);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
