#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aoicache/models.hpp"

namespace aoicache {

/// Per-file utilization ratios and the matching target inter-update intervals
/// tau_n = g_n^-1(lambda_n).
struct Policy {
  std::vector<double> lambdas;
  std::vector<double> target_intervals;
};

/// Builds a Policy from ratios, computing each target interval under the
/// file's own model. Requires lambda_n > 0 and sum lambda_n <= 1 + 1e-9.
Policy make_policy(const Catalog& catalog, std::vector<double> lambdas);

enum class SolverMethod { Kkt, KktClosedForm, Brb, SqrtWeighted };

std::string_view to_string(SolverMethod method);

struct SolverReport {
  Policy policy;
  /// sum_n p_n h_n(lambda_n).
  double objective = 0.0;
  /// Dual waterlevel nu* equalizing p_n h_n'(lambda_n) = -nu*. Empty for BRB.
  std::optional<double> waterlevel;
  SolverMethod method = SolverMethod::Kkt;
  std::size_t iterations = 0;
  /// |sum lambda_n - 1|.
  double feasibility_gap = 0.0;
  /// False when some h_n failed the convexity spot-check: the KKT point is
  /// then only a stationary point, not a certified optimum.
  bool certified = true;
  /// Relative gap (upper - lower) / upper between incumbent and best bound. Zero for KKT.
  double optimality_gap = 0.0;
  /// BRB only: incumbent objective each time it improved.
  std::vector<double> incumbent_history;
};

/// sum_n p_n h_n(lambda_n).
double policy_objective(const Catalog& catalog, std::span<const double> lambdas);
double policy_objective(const Catalog& catalog, const Policy& policy);

struct KktOptions {
  /// Tolerance on |sum lambda - 1| for the outer waterlevel bisection.
  double tolerance = 1e-12;
  /// Use lambda_n proportional to sqrt(p_n B_n) when every model is constant.
  bool closed_form_when_constant = true;
  /// Lower end of the 64-point log grid for the convexity spot-check.
  double convexity_grid_min = 1e-4;
};

/**
 * KKT waterfilling. Finds nu* >= 0 with sum_n lambda_n(nu*) = 1, where
 * lambda_n(nu) solves p_n h_n'(lambda) = -nu. The outer search bisects on nu;
 * each lambda_n(nu) is found by bracketed root-finding on h_n'.
 *
 * Intended for catalogs whose h_n are convex. Files that fail the convexity
 * spot-check leave the report with certified = false.
 */
SolverReport solve_kkt(const Catalog& catalog, const KktOptions& options = {});

/// lambda_n = sqrt(p_n B_n) / sum_i sqrt(p_i B_i). ArgumentError unless all models are constant.
SolverReport solve_sqrt_weighted(const Catalog& catalog);

/// Square-root law lambda_n = sqrt(p_n) / sum_i sqrt(p_i); targets use each file's own model.
Policy solve_sqrt_baseline(const Catalog& catalog);

struct BrbOptions {
  /// Relative optimality gap at termination.
  double eta = 1e-3;
  /// Lower bound on every lambda_n; excludes the origin where h_n diverges.
  double delta = 1e-4;
  /// Hard cap on branched boxes; NumericalError when exceeded.
  std::uint64_t max_iterations = 50'000'000;
};

/**
 * Branch-Reduce-Bound global minimization of sum_n p_n h_n(lambda_n) over
 * {lambda_n >= delta, sum lambda_n <= 1}. Relies only on each h_n being
 * decreasing, so it certifies the optimum for non-convex h_n as well.
 * Cost grows exponentially with N; practical up to N ~ 5 at eta = 1e-3.
 */
SolverReport solve_brb(const Catalog& catalog, const BrbOptions& options = {});

/// True when h_n' is non-decreasing on a 64-point log grid over [grid_min, 1].
bool h_convex_on_grid(const UpdateModel& model, double grid_min = 1e-4);

}  // namespace aoicache
