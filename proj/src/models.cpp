#include "aoicache/models.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aoicache/error.hpp"
#include "roots.hpp"

namespace aoicache {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_size(double size) {
  if (!(size > 0.0) || !std::isfinite(size)) throw ArgumentError("update model: B must be positive and finite");
}

void require_offset(double size, double offset) {
  if (!(offset > 0.0) || !(offset < size)) throw ArgumentError("update model: offset must satisfy 0 < eps < B");
}

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("update model: t must be non-negative");
}

void require_ratio(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("update model: lambda must be positive and finite");
}

constexpr int kMaxBracketSteps = 400;
constexpr std::array<double, 5> kBranchProbes = {1e-3, 1e-1, 1.0, 1e1, 1e3};
constexpr double kBranchMatchTolerance = 1e-8;

}  // namespace

UpdateModel UpdateModel::constant(double size) {
  require_size(size);
  return UpdateModel(ConstantDuration{size});
}

UpdateModel UpdateModel::exponential(double size, double offset, double rate) {
  require_size(size);
  require_offset(size, offset);
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ArgumentError("update model: beta must be positive and finite");
  const ExponentialDuration params{size, offset, rate};
  UpdateModel model(params);

  // The Lambert branch is chosen empirically: the one that reproduces the
  // bracketed inverse on every probe ratio.
  for (const LambertBranch branch : {LambertBranch::Principal, LambertBranch::Lower}) {
    bool matches = true;
    for (const double lambda : kBranchProbes) {
      const double reference = model.g_inverse_bracketed(lambda);
      try {
        const double tau = model.exponential_inverse(params, lambda, branch);
        matches = std::isfinite(tau) && std::abs(tau - reference) <= kBranchMatchTolerance * reference;
      } catch (const DomainError&) {
        matches = false;
      }
      if (!matches) break;
    }
    if (matches) {
      model.branch_ = branch;
      return model;
    }
  }
  throw NumericalError("update model: no Lambert branch reproduces the bracketed inverse for " + model.describe());
}

UpdateModel UpdateModel::rational(double size, double offset) {
  require_size(size);
  require_offset(size, offset);
  return UpdateModel(RationalDuration{size, offset});
}

ModelKind UpdateModel::kind() const noexcept {
  return std::visit(Overloaded{[](const ConstantDuration&) { return ModelKind::Constant; },
                               [](const ExponentialDuration&) { return ModelKind::Exponential; },
                               [](const RationalDuration&) { return ModelKind::Rational; }},
                    params_);
}

double UpdateModel::size() const noexcept {
  return std::visit([](const auto& m) { return m.size; }, params_);
}

double UpdateModel::f(double t) const {
  require_time(t);
  return std::visit(
      Overloaded{[](const ConstantDuration& m) { return m.size; },
                 [t](const ExponentialDuration& m) { return m.size - (m.size - m.offset) * std::exp(-m.rate * t); },
                 [t](const RationalDuration& m) { return m.size - (m.size - m.offset) / (1.0 + t); }},
      params_);
}

double UpdateModel::f_prime(double t) const {
  require_time(t);
  return std::visit(
      Overloaded{[](const ConstantDuration&) { return 0.0; },
                 [t](const ExponentialDuration& m) { return m.rate * (m.size - m.offset) * std::exp(-m.rate * t); },
                 [t](const RationalDuration& m) { return (m.size - m.offset) / ((1.0 + t) * (1.0 + t)); }},
      params_);
}

double UpdateModel::g(double t) const {
  if (!(t > 0.0)) throw DomainError("update model: g(t) requires t > 0");
  return f(t) / t;
}

double UpdateModel::exponential_inverse(const ExponentialDuration& m, double lambda, LambertBranch branch) const {
  // tau = B/l + W(z)/beta with z = -beta (B - eps)/l * exp(-beta B/l).
  const double z = -(m.rate * (m.size - m.offset) / lambda) * std::exp(-m.rate * m.size / lambda);
  return m.size / lambda + lambert_w(z, branch) / m.rate;
}

double UpdateModel::g_inverse(double lambda) const {
  require_ratio(lambda);
  if (const auto* m = std::get_if<ConstantDuration>(&params_)) return m->size / lambda;
  if (const auto* m = std::get_if<ExponentialDuration>(&params_)) {
    const double tau = exponential_inverse(*m, lambda, branch_);
    if (std::isfinite(tau) && tau > 0.0) return tau;
  }
  return g_inverse_bracketed(lambda);
}

double UpdateModel::g_inverse_bracketed(double lambda) const {
  require_ratio(lambda);
  // f(tau) - lambda tau has the sign of g(tau) - lambda for tau > 0.
  const auto excess = [&](double tau) { return f(tau) - lambda * tau; };
  double lo = 1e-9;
  double hi = 1e6;
  double f_lo = excess(lo);
  double f_hi = excess(hi);
  for (int i = 0; f_lo < 0.0; ++i) {
    if (i == kMaxBracketSteps) throw NumericalError("g_inverse: cannot bracket root from below");
    hi = lo;
    f_hi = f_lo;
    lo *= 0.1;
    f_lo = excess(lo);
  }
  for (int i = 0; f_hi > 0.0; ++i) {
    if (i == kMaxBracketSteps) throw NumericalError("g_inverse: cannot bracket root from above");
    lo = hi;
    f_lo = f_hi;
    hi *= 10.0;
    f_hi = excess(hi);
  }
  return detail::bracketed_root(excess, lo, hi, f_lo, f_hi, "g_inverse");
}

double UpdateModel::h(double lambda) const { return g_inverse(lambda) * (0.5 + lambda); }

double UpdateModel::h_prime(double lambda) const {
  const double tau = g_inverse(lambda);
  const double slope = f_prime(tau);
  // Substituting lambda tau = f(tau) into (g^-1)'(1/2 + l) + g^-1 removes the
  // cancellation between its two terms at large lambda.
  return tau * tau * (0.5 + slope) / (slope * tau - f(tau));
}

std::string UpdateModel::describe() const {
  std::ostringstream out;
  out.precision(12);
  std::visit(Overloaded{[&](const ConstantDuration& m) { out << "constant(B=" << m.size << ")"; },
                        [&](const ExponentialDuration& m) {
                          out << "exponential(B=" << m.size << ", eps=" << m.offset << ", beta=" << m.rate << ")";
                        },
                        [&](const RationalDuration& m) {
                          out << "rational(B=" << m.size << ", eps=" << m.offset << ")";
                        }},
             params_);
  return out.str();
}

Catalog::Catalog(std::vector<FileSpec> files) : files_(std::move(files)) {
  if (files_.empty()) throw ArgumentError("catalog: at least one file is required");
  double total = 0.0;
  for (const auto& file : files_) {
    if (!(file.popularity > 0.0) || !(file.popularity <= 1.0)) {
      throw ArgumentError("catalog: popularity must lie in (0, 1]");
    }
    total += file.popularity;
  }
  if (std::abs(total - 1.0) > kPopularitySumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "catalog: popularities sum to " << total << ", expected 1";
    throw ArgumentError(msg.str());
  }
}

std::vector<double> Catalog::popularities() const {
  std::vector<double> out;
  out.reserve(files_.size());
  for (const auto& file : files_) out.push_back(file.popularity);
  return out;
}

bool Catalog::all_constant() const noexcept {
  for (const auto& file : files_) {
    if (file.model.kind() != ModelKind::Constant) return false;
  }
  return true;
}

std::vector<double> zipf_popularity(std::size_t n, double alpha) {
  if (n == 0) throw ArgumentError("zipf_popularity: N must be at least 1");
  if (!(alpha >= 0.0)) throw ArgumentError("zipf_popularity: alpha must be non-negative");
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = std::pow(static_cast<double>(i + 1), -alpha);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return weights;
}

TwoCategoryPopularity two_category_popularity(std::size_t n, double alpha) {
  if (n == 0 || n % 2 != 0) throw ArgumentError("two_category_popularity: N must be a positive even number");
  if (!(alpha >= 0.0)) throw ArgumentError("two_category_popularity: alpha must be non-negative");
  const std::size_t half = n / 2;
  TwoCategoryPopularity out;
  out.popularity.resize(n);
  out.size.resize(n);
  for (std::size_t i = 0; i < half; ++i) {
    const double w = std::pow(static_cast<double>(i + 1), -alpha);
    out.popularity[i] = w;
    out.popularity[half + i] = w;
    out.size[i] = 1.0;
    out.size[half + i] = 5.0;
  }
  const double total = std::accumulate(out.popularity.begin(), out.popularity.end(), 0.0);
  for (double& p : out.popularity) p /= total;
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ArgumentError("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> grid(count);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

}  // namespace aoicache
