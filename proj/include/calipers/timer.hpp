#pragma once

// Timers are named caliper objects.  Each timer owns one instance of every
// clock backend registered at the moment it was created, and starts/stops
// them together.  The database is the queryable registry of all timers.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "calipers/clock.hpp"

namespace calipers {

struct TimerHandle {
  int value = -1;
  friend auto operator<=>(const TimerHandle&, const TimerHandle&) = default;
};

/// Values of one clock inside a timer.
struct ClockReading {
  std::string clock;
  ClockValues values;
  friend bool operator==(const ClockReading&, const ClockReading&) = default;
};

/// Per-clock values of one timer, in backend registration order.
using TimerReading = std::vector<ClockReading>;

/// Values for `clock` in `reading`, or nullptr.
const ClockValues* find_clock(const TimerReading& reading, std::string_view clock) noexcept;

/// Column metadata of a snapshot: one entry per clock backend.
struct ClockColumn {
  std::string clock;
  std::vector<ClockValueDescriptor> values;
};

struct TimerSnapshotEntry {
  std::string name;
  bool running = false;
  TimerReading readings;
};

struct TimerSnapshot {
  Nanoseconds taken_at{0};
  std::vector<ClockColumn> clocks;
  std::vector<TimerSnapshotEntry> entries;  // handle order

  const TimerSnapshotEntry* find(std::string_view timer_name) const noexcept;
};

/// One mutating context plus any number of concurrent snapshot readers.
class TimerDatabase {
 public:
  /// `registry` must outlive the database.  `timestamp_source` stamps
  /// snapshots (first value of the backend); defaults to real wall time.
  explicit TimerDatabase(const ClockRegistry& registry,
                         std::shared_ptr<const ClockBackend> timestamp_source = nullptr);

  TimerDatabase(const TimerDatabase&) = delete;
  TimerDatabase& operator=(const TimerDatabase&) = delete;

  /// Throws DuplicateNameError if `name` exists, ConfigError if empty.
  TimerHandle create(std::string_view name);
  std::optional<TimerHandle> find(std::string_view name) const;

  void start(TimerHandle handle);
  void stop(TimerHandle handle);
  void reset(TimerHandle handle);

  /// Replaces the named clocks' values; other clocks are untouched.  The
  /// timer must be stopped.
  void set(TimerHandle handle, std::span<const ClockReading> values);

  bool running(TimerHandle handle) const;
  std::string name(TimerHandle handle) const;
  TimerReading read(TimerHandle handle) const;

  TimerSnapshot snapshot() const;

  std::size_t size() const;
  const ClockRegistry& registry() const noexcept { return registry_; }

 private:
  struct Timer {
    std::string name;
    std::vector<ClockInstance> clocks;
    bool running = false;
  };

  Timer& timer_at(TimerHandle handle);
  const Timer& timer_at(TimerHandle handle) const;
  static TimerReading read_unlocked(const Timer& timer);

  const ClockRegistry& registry_;
  std::shared_ptr<const ClockBackend> timestamp_source_;
  mutable std::shared_mutex mutex_;
  std::vector<Timer> timers_;
};

/// Starts a timer on construction and stops it on destruction.
class ScopedTimer {
 public:
  ScopedTimer(TimerDatabase& db, TimerHandle handle) : db_(db), handle_(handle) { db_.start(handle_); }
  ~ScopedTimer() {
    if (db_.running(handle_)) db_.stop(handle_);
  }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  TimerDatabase& db_;
  TimerHandle handle_;
};

}  // namespace calipers
