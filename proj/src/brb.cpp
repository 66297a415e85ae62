#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "aoicache/error.hpp"
#include "aoicache/solver.hpp"

namespace aoicache {
namespace {

constexpr double kEmptyBoxSlack = 1e-12;
constexpr int kReducePasses = 4;

struct Box {
  std::uint64_t id;
  double bound;
  std::vector<double> lo;
  std::vector<double> hi;
};

// Best bound first; the oldest box wins ties.
struct WorseBox {
  bool operator()(const Box& a, const Box& b) const {
    return a.bound > b.bound || (a.bound == b.bound && a.id > b.id);
  }
};

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Shrinks [lo, hi] to the smallest box containing its intersection with the
// face sum lambda = 1, where every optimum lies. Returns false if empty.
bool reduce(std::vector<double>& lo, std::vector<double>& hi) {
  const std::size_t n = lo.size();
  for (int pass = 0; pass < kReducePasses; ++pass) {
    bool changed = false;
    const double lo_sum = sum(lo);
    if (lo_sum > 1.0 + kEmptyBoxSlack) return false;
    for (std::size_t i = 0; i < n; ++i) {
      const double cap = 1.0 - (lo_sum - lo[i]);
      if (cap < hi[i]) {
        hi[i] = cap;
        changed = true;
      }
    }
    const double hi_sum = sum(hi);
    if (hi_sum < 1.0 - kEmptyBoxSlack) return false;
    for (std::size_t i = 0; i < n; ++i) {
      const double floor = 1.0 - (hi_sum - hi[i]);
      if (floor > lo[i]) {
        lo[i] = floor;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (lo[i] > hi[i] + kEmptyBoxSlack) return false;
      lo[i] = std::min(lo[i], hi[i]);
    }
    if (!changed) break;
  }
  return true;
}

// Feasible point on the face: hi scaled radially onto sum = 1 and clipped to
// the box, then slid along the box to restore sum = 1 if clipping moved it off.
std::vector<double> face_point(const std::vector<double>& lo, const std::vector<double>& hi) {
  const std::size_t n = lo.size();
  const double hi_sum = sum(hi);
  if (hi_sum <= 1.0) return hi;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(hi[i] / hi_sum, lo[i], hi[i]);
  const double x_sum = sum(x);
  if (x_sum > 1.0) {
    const double lo_sum = sum(lo);
    const double t = hi_sum > lo_sum ? (1.0 - lo_sum) / (hi_sum - lo_sum) : 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = lo[i] + t * (hi[i] - lo[i]);
  } else if (x_sum < 1.0) {
    const double t = (1.0 - x_sum) / (hi_sum - x_sum);
    for (std::size_t i = 0; i < n; ++i) x[i] += t * (hi[i] - x[i]);
  }
  return x;
}

}  // namespace

SolverReport solve_brb(const Catalog& catalog, const BrbOptions& options) {
  const std::size_t n = catalog.size();
  if (!(options.eta > 0.0) || !std::isfinite(options.eta)) throw ArgumentError("solve_brb: eta must be positive");
  if (!(options.delta > 0.0) || !(options.delta * static_cast<double>(n) < 1.0)) {
    throw ArgumentError("solve_brb: delta must satisfy 0 < delta < 1/N");
  }

  const auto objective = [&](const std::vector<double>& x) { return policy_objective(catalog, x); };

  std::vector<double> incumbent;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  const auto offer = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    auto x = face_point(lo, hi);
    const double value = objective(x);
    if (value < upper) {
      upper = value;
      incumbent = std::move(x);
      history.push_back(value);
    }
  };

  std::priority_queue<Box, std::vector<Box>, WorseBox> open;
  std::uint64_t next_id = 0;
  double pruned_bound = std::numeric_limits<double>::infinity();
  const auto admit = [&](std::vector<double> lo, std::vector<double> hi) {
    if (!reduce(lo, hi)) return;
    const double bound = objective(hi);
    if (bound >= upper * (1.0 - options.eta)) {
      pruned_bound = std::min(pruned_bound, bound);
      return;
    }
    offer(lo, hi);
    if (bound >= upper * (1.0 - options.eta)) {
      pruned_bound = std::min(pruned_bound, bound);
      return;
    }
    open.push(Box{next_id++, bound, std::move(lo), std::move(hi)});
  };

  {
    std::vector<double> lo(n, options.delta);
    std::vector<double> hi(n, 1.0 - static_cast<double>(n - 1) * options.delta);
    std::vector<double> lo_copy = lo;
    std::vector<double> hi_copy = hi;
    if (!reduce(lo_copy, hi_copy)) throw NumericalError("solve_brb: initial box is empty");
    offer(lo_copy, hi_copy);
    admit(std::move(lo), std::move(hi));
  }

  std::uint64_t iterations = 0;
  while (!open.empty() && open.top().bound < upper * (1.0 - options.eta)) {
    if (++iterations > options.max_iterations) {
      throw NumericalError("solve_brb: iteration budget exhausted before reaching the requested gap");
    }
    Box box = open.top();
    open.pop();

    std::size_t axis = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (box.hi[i] - box.lo[i] > box.hi[axis] - box.lo[axis]) axis = i;
    }
    const double mid = 0.5 * (box.lo[axis] + box.hi[axis]);

    std::vector<double> left_hi = box.hi;
    left_hi[axis] = mid;
    std::vector<double> right_lo = box.lo;
    right_lo[axis] = mid;
    admit(std::move(box.lo), std::move(left_hi));
    admit(std::move(right_lo), std::move(box.hi));
  }

  const double lower = std::min(pruned_bound, open.empty() ? upper : open.top().bound);
  SolverReport report;
  report.method = SolverMethod::Brb;
  report.policy = make_policy(catalog, std::move(incumbent));
  report.objective = objective(report.policy.lambdas);
  report.iterations = iterations;
  report.feasibility_gap = std::abs(sum(report.policy.lambdas) - 1.0);
  report.optimality_gap = std::max(0.0, (upper - std::min(lower, upper)) / upper);
  report.incumbent_history = std::move(history);
  return report;
}

}  // namespace aoicache
