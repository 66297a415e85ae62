#include <cmath>
#include <numeric>

#include "aoicache/error.hpp"
#include "aoicache/solver.hpp"

namespace aoicache {
namespace {

constexpr double kSimplexSlack = 1e-9;

std::vector<double> normalized_roots(std::span<const double> weights) {
  std::vector<double> out(weights.size());
  double total = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    out[n] = std::sqrt(weights[n]);
    total += out[n];
  }
  for (double& x : out) x /= total;
  return out;
}

}  // namespace

std::string_view to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Kkt: return "kkt";
    case SolverMethod::KktClosedForm: return "kkt-closed-form";
    case SolverMethod::Brb: return "brb";
    case SolverMethod::SqrtWeighted: return "sqrt-weighted";
  }
  return "unknown";
}

Policy make_policy(const Catalog& catalog, std::vector<double> lambdas) {
  if (lambdas.size() != catalog.size()) throw ArgumentError("policy: dimension does not match catalog");
  double total = 0.0;
  for (const double lambda : lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("policy: utilization ratios must be positive");
    total += lambda;
  }
  if (total > 1.0 + kSimplexSlack) throw ArgumentError("policy: utilization ratios sum above 1");
  Policy policy;
  policy.target_intervals.reserve(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    policy.target_intervals.push_back(catalog[n].model.g_inverse(lambdas[n]));
  }
  policy.lambdas = std::move(lambdas);
  return policy;
}

double policy_objective(const Catalog& catalog, std::span<const double> lambdas) {
  if (lambdas.size() != catalog.size()) throw ArgumentError("policy_objective: dimension does not match catalog");
  double total = 0.0;
  for (std::size_t n = 0; n < lambdas.size(); ++n) total += catalog[n].popularity * catalog[n].model.h(lambdas[n]);
  return total;
}

double policy_objective(const Catalog& catalog, const Policy& policy) {
  return policy_objective(catalog, std::span<const double>(policy.lambdas));
}

SolverReport solve_sqrt_weighted(const Catalog& catalog) {
  if (!catalog.all_constant()) throw ArgumentError("solve_sqrt_weighted: every update model must be constant");
  std::vector<double> weights;
  weights.reserve(catalog.size());
  double root_sum = 0.0;
  for (const auto& file : catalog) {
    weights.push_back(file.popularity * file.model.size());
    root_sum += std::sqrt(weights.back());
  }
  SolverReport report;
  report.method = SolverMethod::SqrtWeighted;
  report.policy = make_policy(catalog, normalized_roots(weights));
  report.objective = policy_objective(catalog, report.policy);
  // p_n h_n'(lambda_n) = -p_n B_n / (2 lambda_n^2) = -(sum_i sqrt(p_i B_i))^2 / 2 for every n.
  report.waterlevel = 0.5 * root_sum * root_sum;
  const double total = std::accumulate(report.policy.lambdas.begin(), report.policy.lambdas.end(), 0.0);
  report.feasibility_gap = std::abs(total - 1.0);
  return report;
}

Policy solve_sqrt_baseline(const Catalog& catalog) {
  const auto popularity = catalog.popularities();
  return make_policy(catalog, normalized_roots(popularity));
}

}  // namespace aoicache
