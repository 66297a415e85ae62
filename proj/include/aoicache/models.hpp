#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aoicache/lambert_w.hpp"

namespace aoicache {

/// f(t) = B.
struct ConstantDuration {
  double size;
};

/// f(t) = B - (B - eps) exp(-beta t): a file of B units whose content erodes
/// through a memoryless erasure process, plus a fixed overhead eps.
struct ExponentialDuration {
  double size;
  double offset;
  double rate;
};

/// f(t) = B - (B - eps) / (1 + t).
struct RationalDuration {
  double size;
  double offset;
};

enum class ModelKind { Constant, Exponential, Rational };

/**
 * Update-duration function f of one file: time needed to refresh the file as
 * a function of its age at the start of the update.
 *
 * Every model is strictly positive, bounded, non-decreasing and concave on
 * t >= 0. Parameters are validated on construction; an UpdateModel is
 * immutable afterwards.
 *
 * Derived quantities:
 *   g(t)    = f(t) / t, strictly decreasing with image (0, inf)
 *   g^-1    its inverse: the inter-update interval giving utilization lambda
 *   h(l)    = g^-1(l) (1/2 + l), the long-run average age at utilization l
 */
class UpdateModel {
 public:
  static UpdateModel constant(double size);
  static UpdateModel exponential(double size, double offset, double rate);
  static UpdateModel rational(double size, double offset);

  ModelKind kind() const noexcept;
  const std::variant<ConstantDuration, ExponentialDuration, RationalDuration>& params() const noexcept {
    return params_;
  }
  /// Upper bound B of f.
  double size() const noexcept;

  double f(double t) const;
  double f_prime(double t) const;
  /// f(t)/t; DomainError for t <= 0.
  double g(double t) const;

  /// The unique tau > 0 with g(tau) = lambda. Closed forms for Constant and
  /// Exponential; bracketed root-finding otherwise.
  double g_inverse(double lambda) const;
  /// Model-agnostic g^-1 by bracketed root-finding on f(tau) - lambda tau.
  double g_inverse_bracketed(double lambda) const;

  double h(double lambda) const;
  /// h'(l) = (g^-1)'(l) (1/2 + l) + g^-1(l), with (g^-1)' = tau^2 / (f'(tau) tau - f(tau)).
  double h_prime(double lambda) const;

  /// Lambert branch used by the exponential closed form, selected on construction.
  LambertBranch lambert_branch() const noexcept { return branch_; }

  std::string describe() const;

 private:
  explicit UpdateModel(std::variant<ConstantDuration, ExponentialDuration, RationalDuration> params)
      : params_(std::move(params)) {}

  double exponential_inverse(const ExponentialDuration& m, double lambda, LambertBranch branch) const;

  std::variant<ConstantDuration, ExponentialDuration, RationalDuration> params_;
  LambertBranch branch_ = LambertBranch::Principal;
};

struct FileSpec {
  double popularity;
  UpdateModel model;
};

/// Ordered, validated list of files: N >= 1, each p in (0, 1], sum p = 1 within 1e-12.
class Catalog {
 public:
  explicit Catalog(std::vector<FileSpec> files);

  std::size_t size() const noexcept { return files_.size(); }
  const FileSpec& operator[](std::size_t n) const { return files_[n]; }
  const std::vector<FileSpec>& files() const noexcept { return files_; }
  std::vector<double> popularities() const;
  bool all_constant() const noexcept;

  auto begin() const noexcept { return files_.begin(); }
  auto end() const noexcept { return files_.end(); }

 private:
  std::vector<FileSpec> files_;
};

inline constexpr double kPopularitySumTolerance = 1e-12;

/// p_n proportional to n^-alpha, normalized.
std::vector<double> zipf_popularity(std::size_t n, double alpha);

struct TwoCategoryPopularity {
  std::vector<double> popularity;
  std::vector<double> size;
};

/// First half B = 1, second half B = 5, each half Zipf(alpha) by in-category
/// rank; weights normalized jointly over all N files. N must be even.
TwoCategoryPopularity two_category_popularity(std::size_t n, double alpha);

/// Logarithmically spaced grid of `count` points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace aoicache
