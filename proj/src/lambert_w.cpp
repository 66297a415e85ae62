#include "aoicache/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "aoicache/error.hpp"

namespace aoicache {
namespace {

constexpr double kE = 2.718281828459045;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 64;

// Series around the branch point in p = +/- sqrt(2 (e z + 1)).
double branch_point_series(double p) { return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p; }

double halley(double z, double w) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 2.0 * kEps * std::abs(w)) break;
  }
  return w;
}

// Newton on w + log|w| = log|z|. Avoids overflow in w e^w for large z and
// underflow for tiny |z| on the lower branch.
double log_newton(double log_abs_z, double w) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double phi = w + std::log(std::abs(w)) - log_abs_z;
    const double step = phi / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 2.0 * kEps * std::abs(w)) break;
  }
  return w;
}

}  // namespace

double lambert_w(double z, LambertBranch branch) {
  if (std::isnan(z)) throw DomainError("lambert_w: z is NaN");
  if (z < kLambertBranchPoint - 4.0 * kEps) {
    throw DomainError("lambert_w: z = " + std::to_string(z) + " is below -1/e");
  }
  if (z <= kLambertBranchPoint) return -1.0;

  if (branch == LambertBranch::Principal) {
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return z;
    if (z < -0.25) return halley(z, branch_point_series(std::sqrt(2.0 * (kE * z + 1.0))));
    // Winitzki's approximation, good to a few percent on [-0.25, inf).
    const double l = std::log1p(z);
    const double guess = l * (1.0 - std::log1p(l) / (2.0 + l));
    if (z > 64.0) return log_newton(std::log(z), guess);
    return halley(z, guess);
  }

  if (z >= 0.0) throw DomainError("lambert_w: lower branch requires -1/e <= z < 0");
  if (z < -0.25) return halley(z, branch_point_series(-std::sqrt(2.0 * (kE * z + 1.0))));
  const double l1 = std::log(-z);
  const double l2 = std::log(-l1);
  return log_newton(l1, l1 - l2 + l2 / l1);
}

}  // namespace aoicache
