#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aoicache/models.hpp"
#include "aoicache/solver.hpp"

namespace aoicache {

enum class Scheduler {
  /// Picks argmin_n (target_n - age_n), lowest index on ties.
  Urgency,
  /// Cycles 0, 1, ..., N-1; a test fixture.
  RoundRobin,
};

std::string_view to_string(Scheduler scheduler);

struct SimConfig {
  Catalog catalog;
  Policy policy;
  double horizon = 1e5;
  Scheduler scheduler = Scheduler::Urgency;
  /// Keep every update in SimTrace::updates. Long horizons with short
  /// durations produce millions of records; sweeps turn this off.
  bool record_updates = true;
};

struct UpdateRecord {
  std::size_t file;
  double start;
  double duration;
  double aoi_at_start;
};

struct FileStats {
  std::size_t updates = 0;
  /// Server time spent on this file inside (0, T].
  double busy_time = 0.0;
  /// (1/T) integral_0^T X_n(t) dt.
  double average_aoi = 0.0;
};

struct SimTrace {
  double horizon = 0.0;
  /// Chronological; empty when recording was disabled.
  std::vector<UpdateRecord> updates;
  std::vector<FileStats> files;
  /// sum_n p_n average_aoi_n.
  double expected_aoi = 0.0;
  /// Busy time inside (0, T] over T.
  double busy_fraction = 0.0;
};

/// Index argmin_n (targets_n - aoi_n); lowest index wins ties.
std::size_t urgency_pick(std::span<const double> aoi, std::span<const double> targets);

/**
 * Event-driven single-server simulation over (0, T].
 *
 * Whenever the server is free (t = 0 initially) the scheduler picks a file,
 * whose update runs non-preemptively for d = f_n(X_n(t)). When it completes
 * the file's age drops to d. The run stops at the first decision instant at
 * or after T; an update straddling T still runs but the age integral stops at T.
 */
SimTrace run_sim(const SimConfig& config);

struct ScheduledUpdate {
  std::size_t file;
  double start;
};

/// Evaluates a caller-supplied schedule under the same age accounting.
/// ArgumentError when updates overlap, are unsorted, or start outside [0, T).
SimTrace replay_schedule(const Catalog& catalog, std::span<const ScheduledUpdate> schedule, double horizon);

struct AoiDrop {
  double time;
  double value;
};

/// Right-continuous age path with slope 1 between drops.
struct AoiPath {
  double initial = 0.0;
  std::vector<AoiDrop> drops;
};

/// Exact integral of the path over [0, T]. ArgumentError for unsorted drops,
/// negative values, or a "drop" that raises the age.
double aoi_integral(const AoiPath& path, double horizon);

/// Per-file age path implied by a trace (drops at each completion inside [0, T]).
AoiPath aoi_path(const SimTrace& trace, std::size_t file);

/// Re-checks disjointness, durations d = f(age at start), and busy accounting.
/// Returns human-readable violations; empty when the trace is consistent.
std::vector<std::string> verify_trace(const Catalog& catalog, const SimTrace& trace);

struct PolicyMeasurement {
  double simulated_aoi = 0.0;
  double relaxed_objective = 0.0;
  /// |simulated - relaxed| / relaxed.
  double relative_gap = 0.0;
  SimTrace trace;
};

PolicyMeasurement measure_policy(const Catalog& catalog, const Policy& policy, double horizon,
                                 Scheduler scheduler = Scheduler::Urgency, bool record_updates = false);

/// CSV: file_index,start_time,duration,aoi_at_start (file_index is 1-based)
void write_trace_csv(std::ostream& out, const SimTrace& trace);
/// CSV: file_index,p,lambda_target,tau_target,utilization_measured,avg_aoi (1-based)
void write_summary_csv(std::ostream& out, const Catalog& catalog, const Policy& policy, const SimTrace& trace);

}  // namespace aoicache
