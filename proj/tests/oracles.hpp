#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the closed forms or root finders under test.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "aoicache/models.hpp"

namespace aoicache::oracle {

/// Plain bisection on g(tau) = f(tau)/tau - lambda over (1e-9, 1e6), widened if needed.
inline double g_inverse_bisection(const UpdateModel& model, double lambda) {
  double lo = 1e-9;
  double hi = 1e6;
  while (model.f(lo) / lo < lambda) lo *= 0.5;
  while (model.f(hi) / hi > lambda) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.f(mid) / mid > lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Positive root of lambda tau^2 + (lambda - B) tau - eps = 0, the rational model's inverse.
inline double rational_inverse_quadratic(double size, double offset, double lambda) {
  const double b = lambda - size;
  const double disc = std::sqrt(b * b + 4.0 * lambda * offset);
  // Stable form of (-b + disc) / (2 lambda).
  return b < 0.0 ? (disc - b) / (2.0 * lambda) : 2.0 * offset / (b + disc);
}

inline double central_difference(const std::function<double(double)>& fn, double x, double step) {
  return (fn(x + step) - fn(x - step)) / (2.0 * step);
}

inline double relative_error(double actual, double expected) {
  return std::abs(actual - expected) / std::max(std::abs(expected), std::numeric_limits<double>::min());
}

/// Exhaustive search of sum p_n h_n over the grid {k * step : k >= 1} on sum lambda = 1.
/// h values are tabulated once per file; the last coordinate closes the simplex.
inline double simplex_grid_minimum(const Catalog& catalog, double step) {
  const std::size_t n = catalog.size();
  const auto ticks = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<std::vector<double>> table(n, std::vector<double>(ticks + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= ticks; ++k) {
      table[i][k] = catalog[i].popularity * catalog[i].model.h(static_cast<double>(k) * step);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> k(n, 1);
  // Recursive enumeration over the first n-1 coordinates.
  std::function<void(std::size_t, std::size_t, double)> visit = [&](std::size_t dim, std::size_t used, double acc) {
    if (dim + 1 == n) {
      const std::size_t last = ticks - used;
      if (last >= 1) best = std::min(best, acc + table[dim][last]);
      return;
    }
    const std::size_t remaining_dims = n - dim - 1;
    for (std::size_t ki = 1; used + ki + remaining_dims <= ticks; ++ki) visit(dim + 1, used + ki, acc + table[dim][ki]);
  };
  visit(0, 0, 0.0);
  return best;
}

/// Random catalog helpers with a caller-owned engine for reproducibility.
inline std::vector<double> random_popularity(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) total += (x = u(rng));
  for (double& x : p) x /= total;
  return p;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline UpdateModel random_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  const double size = log_uniform(rng, 0.1, 10.0);
  const double offset = size * log_uniform(rng, 1e-3, 0.9);
  switch (kind(rng)) {
    case 0: return UpdateModel::constant(size);
    case 1: return UpdateModel::exponential(size, offset, log_uniform(rng, 1e-3, 20.0));
    default: return UpdateModel::rational(size, offset);
  }
}

}  // namespace aoicache::oracle
