#pragma once

// A minimal schedule executor.  Routines live in named bins and each one is
// wrapped in an automatically created timer named "<thorn>: <routine>", so
// user code never touches the timer API to get per-routine timings.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "calipers/timer.hpp"

namespace calipers {

/// STARTUP, INITIAL, CHECKPOINT_INITIAL, EVOL, CHECKPOINT, ANALYSIS, TERMINATE.
std::vector<std::string> default_bin_names();

inline constexpr std::string_view kSimulationTotalTimer = "Total time for simulation";

struct ScheduleContext {
  std::string_view bin;
  std::int64_t iteration = 0;
};

using RoutineBody = std::function<void(const ScheduleContext&)>;

struct RoutineId {
  std::size_t bin = 0;
  std::size_t index = 0;
};

struct BinExecutionRecord {
  std::string bin;
  std::int64_t iteration = 0;
  std::size_t routines_run = 0;
};

/// Report metadata: which timers belong to which bin.
struct RoutineLayout {
  std::string thorn;
  std::string routine;
  std::string timer;
  friend bool operator==(const RoutineLayout&, const RoutineLayout&) = default;
};

struct BinLayout {
  std::string bin;
  std::string label;        // e.g. "CCTK_CHECKPOINT"
  std::string total_timer;  // e.g. "Total time for CCTK_CHECKPOINT"
  std::vector<RoutineLayout> routines;
  friend bool operator==(const BinLayout&, const BinLayout&) = default;
};

using ScheduleLayout = std::vector<BinLayout>;

class Scheduler {
 public:
  /// Creates the per-bin total timers and the simulation total timer in `db`.
  explicit Scheduler(TimerDatabase& db, std::vector<std::string> bins = default_bin_names(),
                     std::string bin_label_prefix = "CCTK_");

  RoutineId register_routine(std::string_view bin, std::string_view thorn,
                             std::string_view routine_name, RoutineBody body);

  /// Runs every routine of `bin` in registration order.  Errors thrown by a
  /// routine propagate after its timer (and the bin timer) are stopped.
  BinExecutionRecord run_bin(std::string_view bin, std::int64_t iteration = 0);

  void begin_simulation();
  void end_simulation();

  TimerHandle simulation_total_timer() const noexcept { return simulation_total_; }
  TimerHandle bin_total_timer(std::string_view bin) const;
  TimerHandle routine_timer(RoutineId id) const;

  const std::vector<std::string>& bins() const noexcept { return bin_names_; }
  ScheduleLayout layout() const;
  TimerDatabase& database() noexcept { return db_; }

 private:
  struct ScheduledRoutine {
    std::string thorn;
    std::string routine_name;
    RoutineBody body;
    TimerHandle timer;
  };
  struct Bin {
    std::string label;
    TimerHandle total;
    std::vector<ScheduledRoutine> routines;
  };

  std::size_t bin_index(std::string_view bin) const;

  TimerDatabase& db_;
  std::vector<std::string> bin_names_;
  std::vector<Bin> bins_;
  TimerHandle simulation_total_;
};

}  // namespace calipers
