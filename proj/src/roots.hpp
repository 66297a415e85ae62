#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "aoicache/error.hpp"

namespace aoicache::detail {

inline constexpr int kRootBits = 50;
inline constexpr std::uintmax_t kRootMaxIterations = 200;

/// Root of a continuous fn on [lo, hi] given fn(lo), fn(hi) of opposite sign.
template <class Fn>
double bracketed_root(Fn&& fn, double lo, double hi, double f_lo, double f_hi, const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t iterations = kRootMaxIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(
      fn, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(kRootBits), iterations);
  if (iterations >= kRootMaxIterations) {
    throw NumericalError(std::string(what) + ": root finder did not converge");
  }
  return 0.5 * (a + b);
}

}  // namespace aoicache::detail
