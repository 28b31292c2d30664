#pragma once

// Deterministic checkpointing experiments in virtual time.
//
// The driver runs the schedule STARTUP, INITIAL, CHECKPOINT_INITIAL, then for
// every iteration EVOL -> CHECKPOINT -> ANALYSIS, and finally TERMINATE.
// EVOL advances virtual time by the workload's compute cost; CHECKPOINT asks
// the policy engine and, when granted, advances virtual time by the
// checkpoint cost; ANALYSIS records the time series and emits periodic
// timer reports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calipers/checkpoint.hpp"
#include "calipers/checkpoint_file.hpp"
#include "calipers/report.hpp"
#include "calipers/schedule.hpp"
#include "calipers/timer.hpp"
#include "calipers/workload.hpp"

namespace calipers {

struct SeriesRow {
  std::int64_t iteration = 0;
  Nanoseconds elapsed{0};
  Nanoseconds checkpoint_cumulative{0};
  double fraction = 0.0;
  std::int64_t grid_points = 0;
  IterationEvent event = IterationEvent::none;

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

/// One consultation of the policy engine, with the inputs it saw.
struct DecisionRecord {
  std::int64_t iteration = 0;
  Nanoseconds now{0};
  CheckpointAccounting before;  // state the decision was made from
  CheckpointDecision decision;
  Nanoseconds cost{0};  // zero when skipped

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

struct RunSummary {
  WorkloadModel model;
  CheckpointPolicy policy;
  Nanoseconds total_runtime{0};
  Nanoseconds total_checkpoint{0};
  double final_fraction = 0.0;
  std::int64_t checkpoints_taken = 0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<SeriesRow> series;
  std::vector<DecisionRecord> decisions;
  SimulationState final_state;
  TimerSnapshot final_timers;
  ScheduleLayout layout;
  std::vector<std::filesystem::path> checkpoint_files;
  std::vector<std::string> warnings;
};

struct RunOptions {
  ReportConfig report;
  std::ostream* report_stream = nullptr;
  /// When set, every granted checkpoint is written here.
  std::optional<std::filesystem::path> checkpoint_dir;
  /// Clock used for checkpoint accounting.  The harness only offers
  /// "virtual-wall".
  std::string measure_clock = "virtual-wall";
  /// Writes a restart file at the end of this iteration without consuming
  /// virtual time or touching the accounting.
  std::optional<std::int64_t> state_dump_at;
  std::optional<std::filesystem::path> state_dump_path;
};

class Experiment {
 public:
  Experiment(WorkloadModel model, CheckpointPolicy policy, RunOptions options = {});
  /// Continues the run stored in `restart`.
  Experiment(const CheckpointContents& restart, WorkloadModel model, CheckpointPolicy policy,
             RunOptions options = {});
  ~Experiment();

  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  const TimerDatabase& timers() const;
  ScheduleLayout layout() const;

  /// May be called once.
  ExperimentResult run();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ExperimentResult run_experiment(const WorkloadModel& model, const CheckpointPolicy& policy,
                                RunOptions options = {});
ExperimentResult restart_experiment(const CheckpointContents& restart, const WorkloadModel& model,
                                    const CheckpointPolicy& policy, RunOptions options = {});

/// Columns: iteration,elapsed_ns,checkpoint_ns_cum,fraction,grid_points,event
std::string series_csv(const std::vector<SeriesRow>& series);
std::vector<SeriesRow> parse_series_csv(std::string_view text);

std::string summary_json(const RunSummary& summary);
RunSummary parse_summary_json(std::string_view text);

struct CalibrationResult {
  WorkloadModel model;  // skeleton with checkpoint_base filled in
  double baseline_fraction = 0.0;
  int evaluations = 0;
};

/// Searches checkpoint_base (compute_unit held fixed) so the fixed-interval
/// `baseline` run ends within 0.01 of `target_fraction`.  Throws
/// CalibrationError when no such value exists.
CalibrationResult calibrate(const WorkloadModel& skeleton, double target_fraction,
                            const CheckpointPolicy& baseline);

struct Comparison {
  /// (runtime_a - runtime_b) / runtime_a
  double runtime_reduction = 0.0;
  /// checkpoint_a / checkpoint_b
  double checkpoint_ratio = 0.0;
  /// iteration,elapsed_a_ns,fraction_a,elapsed_b_ns,fraction_b
  std::string fraction_curves_csv;
};

/// Throws ConfigError if the two runs used different workload models.
Comparison compare_runs(const ExperimentResult& a, const ExperimentResult& b);

}  // namespace calipers
