#include <cmath>
#include <numeric>

#include "aoicache/error.hpp"
#include "aoicache/solver.hpp"
#include "roots.hpp"

namespace aoicache {
namespace {

constexpr std::size_t kConvexityGridPoints = 64;
constexpr int kMaxBracketSteps = 200;
constexpr int kMaxBisections = 400;

// lambda solving p h'(lambda) = -nu. Any root is returned when h' is not monotone.
double invert_h_prime(const FileSpec& file, double nu) {
  const double target = -nu / file.popularity;
  const auto residual = [&](double lambda) {
    const double slope = file.model.h_prime(lambda);
    if (!std::isfinite(slope)) throw NumericalError("solve_kkt: non-finite h' for " + file.model.describe());
    return slope - target;
  };
  double lo = 1e-3;
  double r_lo = residual(lo);
  for (int i = 0; r_lo >= 0.0; ++i) {
    if (i == kMaxBracketSteps) throw NumericalError("solve_kkt: cannot bracket h' inverse from below");
    lo *= 0.25;
    r_lo = residual(lo);
  }
  double hi = 1.0;
  double r_hi = residual(hi);
  for (int i = 0; r_hi <= 0.0; ++i) {
    if (i == kMaxBracketSteps) throw NumericalError("solve_kkt: cannot bracket h' inverse from above");
    hi *= 4.0;
    r_hi = residual(hi);
  }
  return detail::bracketed_root(residual, lo, hi, r_lo, r_hi, "solve_kkt");
}

struct Allocation {
  std::vector<double> lambdas;
  double total = 0.0;
};

Allocation allocate(const Catalog& catalog, double nu) {
  Allocation out;
  out.lambdas.reserve(catalog.size());
  for (const auto& file : catalog) {
    out.lambdas.push_back(invert_h_prime(file, nu));
    out.total += out.lambdas.back();
  }
  return out;
}

}  // namespace

bool h_convex_on_grid(const UpdateModel& model, double grid_min) {
  const auto grid = log_grid(grid_min, 1.0, kConvexityGridPoints);
  double previous = model.h_prime(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double current = model.h_prime(grid[i]);
    if (current < previous - 1e-12 * std::abs(previous)) return false;
    previous = current;
  }
  return true;
}

SolverReport solve_kkt(const Catalog& catalog, const KktOptions& options) {
  if (!(options.tolerance > 0.0)) throw ArgumentError("solve_kkt: tolerance must be positive");
  if (options.closed_form_when_constant && catalog.all_constant()) {
    SolverReport report = solve_sqrt_weighted(catalog);
    report.method = SolverMethod::KktClosedForm;
    return report;
  }

  std::size_t iterations = 0;
  const auto evaluate = [&](double nu) {
    ++iterations;
    return allocate(catalog, nu);
  };

  // sum_n lambda_n(nu) decreases in nu; bracket sum = 1 between nu_lo and nu_hi.
  double nu_hi = 1.0;
  Allocation at_hi = evaluate(nu_hi);
  double nu_lo = 0.0;
  for (int i = 0; at_hi.total > 1.0; ++i) {
    if (i == kMaxBracketSteps) throw NumericalError("solve_kkt: cannot bracket the waterlevel from above");
    nu_lo = nu_hi;
    nu_hi *= 2.0;
    at_hi = evaluate(nu_hi);
  }
  if (nu_lo == 0.0) {
    nu_lo = 0.5 * nu_hi;
    for (int i = 0;; ++i) {
      if (i == kMaxBracketSteps) throw NumericalError("solve_kkt: cannot bracket the waterlevel from below");
      const Allocation at_lo = evaluate(nu_lo);
      if (at_lo.total > 1.0) break;
      nu_hi = nu_lo;
      at_hi = at_lo;
      nu_lo *= 0.5;
    }
  }

  double best_nu = nu_hi;
  Allocation best = at_hi;
  for (int i = 0; i < kMaxBisections && std::abs(best.total - 1.0) > options.tolerance; ++i) {
    const double nu = 0.5 * (nu_lo + nu_hi);
    if (nu <= nu_lo || nu >= nu_hi) break;
    Allocation at_mid = evaluate(nu);
    const bool above = at_mid.total > 1.0;
    if (std::abs(at_mid.total - 1.0) < std::abs(best.total - 1.0)) {
      best = at_mid;
      best_nu = nu;
    }
    (above ? nu_lo : nu_hi) = nu;
  }
  const double gap = std::abs(best.total - 1.0);
  if (gap > options.tolerance) {
    throw NumericalError("solve_kkt: waterlevel bisection stalled with |sum lambda - 1| = " + std::to_string(gap));
  }

  SolverReport report;
  report.method = SolverMethod::Kkt;
  report.policy = make_policy(catalog, std::move(best.lambdas));
  report.objective = policy_objective(catalog, report.policy);
  report.waterlevel = best_nu;
  report.iterations = iterations;
  report.feasibility_gap = gap;
  for (const auto& file : catalog) {
    if (!h_convex_on_grid(file.model, options.convexity_grid_min)) {
      report.certified = false;
      break;
    }
  }
  return report;
}

}  // namespace aoicache
