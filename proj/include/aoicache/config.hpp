#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aoicache/experiments.hpp"
#include "aoicache/models.hpp"
#include "aoicache/sim.hpp"
#include "aoicache/solver.hpp"

namespace aoicache {

enum class SolveMethod { Kkt, Brb, Sqrt };

std::optional<SolveMethod> parse_solve_method(std::string_view name);
std::optional<Scheduler> parse_scheduler(std::string_view name);

/**
 * Contents of a run configuration file.
 *
 * Line-oriented text; '#' starts a comment. Global settings are `key = value`
 * lines. Files are rows of space-separated key=value pairs after the word
 * `file`:
 *
 *     method = brb
 *     horizon = 1e5
 *     file p=0.8 model=constant B=1
 *     file p=0.2 model=exponential B=1 eps=0.02 beta=0.015 lambda=0.3
 *
 * Instead of file rows, `scenario = fig3|fig4|fig5|fig6|custom` together with
 * `files = N` (and optionally alpha, B, eps, beta, beta_step) generates the
 * catalog. Popularities within 1e-6 of summing to one are renormalized.
 * Either every file row carries `lambda` (a fixed policy) or none does.
 */
struct RunConfig {
  Catalog catalog;
  std::optional<std::vector<double>> lambdas;
  SolveMethod method = SolveMethod::Kkt;
  double horizon = 1e5;
  Scheduler scheduler = Scheduler::Urgency;
  BrbOptions brb{};
  KktOptions kkt{};
};

/// Global keys accepted in config files and as overrides.
std::span<const std::string_view> config_keys();

/// Parses a configuration; `overrides` are "key=value" strings applied after the text.
RunConfig parse_run_config(std::istream& in, std::span<const std::string> overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Serializes a catalog in the file-row format.
std::string format_catalog(const Catalog& catalog, const std::optional<std::vector<double>>& lambdas = std::nullopt);

}  // namespace aoicache
