#include "aoicache/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "aoicache/error.hpp"
#include "aoicache/format.hpp"

namespace aoicache {
namespace {

// Area under a unit-slope segment of length `span` starting at height `height`.
double trapezoid(double height, double span) { return span * (height + 0.5 * span); }

// Exact piecewise-linear age bookkeeping for all files of one run.
class AgeLedger {
 public:
  AgeLedger(std::size_t n, double horizon)
      : horizon_(horizon), origin_(n, 0.0), segment_start_(n, 0.0), area_(n, 0.0) {}

  double age(std::size_t file, double t) const { return t - origin_[file]; }
  std::span<const double> origins() const { return origin_; }

  // The update of `file` that started at `start` completes at `end`: the age
  // drops to end - start. Drops after the horizon are never observed.
  void complete(std::size_t file, double start, double end) {
    if (end > horizon_) return;
    advance(file, end);
    origin_[file] = start;
  }

  std::vector<double> averages() {
    std::vector<double> out(area_.size());
    for (std::size_t n = 0; n < area_.size(); ++n) {
      advance(n, horizon_);
      out[n] = area_[n] / horizon_;
    }
    return out;
  }

 private:
  void advance(std::size_t file, double t) {
    area_[file] += trapezoid(segment_start_[file] - origin_[file], t - segment_start_[file]);
    segment_start_[file] = t;
  }

  double horizon_;
  std::vector<double> origin_;
  std::vector<double> segment_start_;
  std::vector<double> area_;
};

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("simulation: horizon must be positive");
}

void finish(const Catalog& catalog, AgeLedger& ledger, SimTrace& trace) {
  const auto averages = ledger.averages();
  double busy = 0.0;
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    trace.files[n].average_aoi = averages[n];
    trace.expected_aoi += catalog[n].popularity * averages[n];
    busy += trace.files[n].busy_time;
  }
  trace.busy_fraction = busy / trace.horizon;
}

}  // namespace

std::string_view to_string(Scheduler scheduler) {
  switch (scheduler) {
    case Scheduler::Urgency: return "urgency";
    case Scheduler::RoundRobin: return "roundrobin";
  }
  return "unknown";
}

std::size_t urgency_pick(std::span<const double> aoi, std::span<const double> targets) {
  if (aoi.empty() || aoi.size() != targets.size()) throw ArgumentError("urgency_pick: mismatched or empty inputs");
  std::size_t best = 0;
  double best_slack = targets[0] - aoi[0];
  for (std::size_t n = 1; n < aoi.size(); ++n) {
    const double slack = targets[n] - aoi[n];
    if (slack < best_slack) {
      best_slack = slack;
      best = n;
    }
  }
  return best;
}

SimTrace run_sim(const SimConfig& config) {
  const Catalog& catalog = config.catalog;
  const std::size_t n = catalog.size();
  require_horizon(config.horizon);
  if (config.policy.target_intervals.size() != n) throw ArgumentError("run_sim: policy dimension does not match catalog");

  SimTrace trace;
  trace.horizon = config.horizon;
  trace.files.resize(n);
  AgeLedger ledger(n, config.horizon);
  std::vector<double> ages(n);
  std::size_t next_in_cycle = 0;

  double t = 0.0;
  while (t < config.horizon) {
    std::size_t file = 0;
    if (config.scheduler == Scheduler::Urgency) {
      for (std::size_t i = 0; i < n; ++i) ages[i] = ledger.age(i, t);
      file = urgency_pick(ages, config.policy.target_intervals);
    } else {
      file = next_in_cycle;
      next_in_cycle = (next_in_cycle + 1) % n;
    }
    const double age = ledger.age(file, t);
    const double duration = catalog[file].model.f(age);
    const double end = t + duration;
    if (config.record_updates) trace.updates.push_back({file, t, duration, age});
    auto& stats = trace.files[file];
    ++stats.updates;
    stats.busy_time += std::min(end, config.horizon) - t;
    ledger.complete(file, t, end);
    t = end;
  }
  finish(catalog, ledger, trace);
  return trace;
}

SimTrace replay_schedule(const Catalog& catalog, std::span<const ScheduledUpdate> schedule, double horizon) {
  require_horizon(horizon);
  SimTrace trace;
  trace.horizon = horizon;
  trace.files.resize(catalog.size());
  AgeLedger ledger(catalog.size(), horizon);
  double server_free = 0.0;
  for (const auto& item : schedule) {
    if (item.file >= catalog.size()) throw ArgumentError("replay_schedule: file index out of range");
    if (!(item.start >= 0.0) || !(item.start < horizon)) throw ArgumentError("replay_schedule: start outside [0, T)");
    if (item.start < server_free) throw ArgumentError("replay_schedule: updates overlap or are not sorted");
    const double age = ledger.age(item.file, item.start);
    const double duration = catalog[item.file].model.f(age);
    const double end = item.start + duration;
    trace.updates.push_back({item.file, item.start, duration, age});
    auto& stats = trace.files[item.file];
    ++stats.updates;
    stats.busy_time += std::min(end, horizon) - item.start;
    ledger.complete(item.file, item.start, end);
    server_free = end;
  }
  finish(catalog, ledger, trace);
  return trace;
}

double aoi_integral(const AoiPath& path, double horizon) {
  require_horizon(horizon);
  if (!(path.initial >= 0.0)) throw ArgumentError("aoi_integral: initial age must be non-negative");
  double area = 0.0;
  double t = 0.0;
  double value = path.initial;
  for (const auto& drop : path.drops) {
    if (!(drop.time >= t)) throw ArgumentError("aoi_integral: drops must be sorted in time and start at t >= 0");
    if (!(drop.value >= 0.0)) throw ArgumentError("aoi_integral: age cannot be negative");
    if (drop.time > horizon) break;
    const double before = value + (drop.time - t);
    if (drop.value > before * (1.0 + 1e-12)) throw ArgumentError("aoi_integral: a drop cannot raise the age");
    area += trapezoid(value, drop.time - t);
    t = drop.time;
    value = drop.value;
  }
  return area + trapezoid(value, horizon - t);
}

AoiPath aoi_path(const SimTrace& trace, std::size_t file) {
  AoiPath path;
  for (const auto& update : trace.updates) {
    const double end = update.start + update.duration;
    if (update.file == file && end <= trace.horizon) path.drops.push_back({end, update.duration});
  }
  return path;
}

std::vector<std::string> verify_trace(const Catalog& catalog, const SimTrace& trace) {
  std::vector<std::string> problems;
  const auto report = [&](const std::string& what, std::size_t index) {
    std::ostringstream msg;
    msg << what << " at update " << index;
    problems.push_back(msg.str());
  };
  if (trace.files.size() != catalog.size()) {
    problems.emplace_back("trace has " + std::to_string(trace.files.size()) + " files, catalog has " +
                          std::to_string(catalog.size()));
    return problems;
  }

  std::vector<double> origin(catalog.size(), 0.0);
  std::vector<std::size_t> counts(catalog.size(), 0);
  double busy = 0.0;
  for (std::size_t k = 0; k < trace.updates.size(); ++k) {
    const auto& u = trace.updates[k];
    if (u.file >= catalog.size()) {
      report("file index out of range", k);
      continue;
    }
    if (k > 0) {
      const auto& prev = trace.updates[k - 1];
      if (u.start < prev.start + prev.duration) report("overlapping update intervals", k);
    }
    if (u.aoi_at_start != u.start - origin[u.file]) report("age at start inconsistent with previous completion", k);
    if (u.duration != catalog[u.file].model.f(u.aoi_at_start)) report("duration differs from f(age at start)", k);
    if (u.start + u.duration <= trace.horizon) origin[u.file] = u.start;
    busy += std::min(u.start + u.duration, trace.horizon) - u.start;
    ++counts[u.file];
  }

  double file_busy = 0.0;
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    file_busy += trace.files[n].busy_time;
    if (!trace.updates.empty() && counts[n] != trace.files[n].updates) {
      problems.emplace_back("update count mismatch for file " + std::to_string(n));
    }
  }
  if (trace.busy_fraction > 1.0 + 1e-12) problems.emplace_back("busy fraction exceeds 1");
  if (std::abs(file_busy / trace.horizon - trace.busy_fraction) > 1e-9) {
    problems.emplace_back("per-file utilizations do not sum to the busy fraction");
  }
  if (!trace.updates.empty() && std::abs(busy - file_busy) > 1e-9 * std::max(1.0, busy)) {
    problems.emplace_back("busy time differs from the sum of durations");
  }
  return problems;
}

PolicyMeasurement measure_policy(const Catalog& catalog, const Policy& policy, double horizon, Scheduler scheduler,
                                 bool record_updates) {
  PolicyMeasurement out;
  out.trace = run_sim(SimConfig{catalog, policy, horizon, scheduler, record_updates});
  out.simulated_aoi = out.trace.expected_aoi;
  out.relaxed_objective = policy_objective(catalog, policy);
  out.relative_gap = std::abs(out.simulated_aoi - out.relaxed_objective) / out.relaxed_objective;
  return out;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "file_index,start_time,duration,aoi_at_start\n";
  for (const auto& u : trace.updates) {
    out << u.file + 1 << ',' << format_number(u.start) << ',' << format_number(u.duration) << ','
        << format_number(u.aoi_at_start) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const Catalog& catalog, const Policy& policy, const SimTrace& trace) {
  out << "file_index,p,lambda_target,tau_target,utilization_measured,avg_aoi\n";
  for (std::size_t n = 0; n < catalog.size(); ++n) {
    out << n + 1 << ',' << format_number(catalog[n].popularity) << ',' << format_number(policy.lambdas[n]) << ','
        << format_number(policy.target_intervals[n]) << ',' << format_number(trace.files[n].busy_time / trace.horizon)
        << ',' << format_number(trace.files[n].average_aoi) << '\n';
  }
}

}  // namespace aoicache
