#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hgks/checkpoint.hpp"
#include "hgks/config.hpp"
#include "hgks/parallel.hpp"
#include "hgks/statistics.hpp"

namespace hgks {

struct RunOptions {
  /// Continue from this state instead of initialising the case.
  const Checkpoint* restart = nullptr;
  /// Called on the root worker at every diagnostic output with the gathered
  /// field (t, step and field members only).
  std::function<void(const Checkpoint&)> on_output;
  /// Stop after this many steps of this invocation (negative: run to t_end).
  std::int64_t max_steps = -1;
  /// Write timeseries.csv, profile.csv, timing.csv, run.log and checkpoints
  /// into config.output_dir.
  bool write_files = true;
  /// Log lines are also copied here when set.
  std::ostream* echo = nullptr;
};

struct RunResult {
  bool ok = true;
  std::string error;
  double t = 0;
  std::int64_t step = 0;         // steps since the case was initialised
  std::int64_t steps_taken = 0;  // steps of this invocation
  double wall_seconds = 0;
  std::vector<WorkerTiming> timing;  // per worker
  /// Bytes of precision-typed arrays (conservative field plus stepper
  /// storage), summed over the workers.
  std::size_t resident_bytes = 0;
  std::vector<TimeSeriesRecord> series;
  std::optional<PlaneProfile> profile;
  WallUnits wall;
  std::vector<std::string> log;
  /// State at the end of the run (or the last good state after a failure).
  Checkpoint final_state;
};

/// Runs the configured case on config.workers threads. Step failures are
/// reported through RunResult::ok, after the last good state has been saved
/// to checkpoint_failed.bin; configuration and checkpoint errors throw.
RunResult run_simulation(const RunConfig& config, const RunOptions& options = {});

/// Hash that ties a checkpoint to its physical case.
std::uint64_t case_hash(const RunConfig& config);

/// Timing CSV with columns workers,T_total,T_flow,T_com. T_flow and T_com
/// are the maxima over the workers.
void write_timing_csv(std::ostream& os, int workers, const RunResult& r);

struct TimingRow {
  int workers = 0;
  double T_total = 0, T_flow = 0, T_com = 0;
  double S_n = 0;  // T_total(n) / T_total(1)
};

/// Merges timing rows (any order), sorted by worker count, with S_n relative
/// to the single-worker row. Throws ConfigError without a single-worker row.
std::vector<TimingRow> scalability(std::vector<TimingRow> rows);
std::vector<TimingRow> read_timing_csv(std::istream& is);
void write_scalability_csv(std::ostream& os, const std::vector<TimingRow>& rows);

}  // namespace hgks
