#pragma once

namespace aoicache {

/// Real branches of the Lambert W function, the inverse of w -> w e^w.
enum class LambertBranch {
  Principal,  // W0:  z >= -1/e, w >= -1
  Lower,      // W-1: -1/e <= z < 0, w <= -1
};

/// Branch point of both real branches, -1/e.
inline constexpr double kLambertBranchPoint = -0.36787944117144233;

/**
 * Lambert W on the requested real branch, refined by Halley iteration.
 *
 * Throws DomainError for z < -1/e, and for z >= 0 on the lower branch.
 * The residual |w e^w - z| is at the level of a few ulps of max(|z|, 1e-300).
 */
double lambert_w(double z, LambertBranch branch = LambertBranch::Principal);

inline double lambert_w0(double z) { return lambert_w(z, LambertBranch::Principal); }
inline double lambert_wm1(double z) { return lambert_w(z, LambertBranch::Lower); }

}  // namespace aoicache
