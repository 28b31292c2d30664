#pragma once

// Clocks are the low-level measurement sources behind timers.  A backend
// describes one kind of clock (wall time, CPU time, an event counter, ...)
// and may expose several values at once.  A ClockInstance is one
// independent accumulator over a backend; timers own one instance of every
// registered backend.
//
// All times are integer nanoseconds.  Conversion to seconds happens only
// when formatting.

#include <atomic>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace calipers {

using Nanoseconds = std::chrono::nanoseconds;

enum class ClockUnit { seconds, count };

std::string_view to_string(ClockUnit unit) noexcept;

struct ClockValueDescriptor {
  std::string name;
  ClockUnit unit = ClockUnit::seconds;
  /// Smallest meaningful increment, in nanoseconds or counts.  Informational.
  std::int64_t resolution_hint = 1;
};

/// Seconds-valued entries are nanoseconds; count-valued entries are raw counts.
using ClockValues = std::vector<std::int64_t>;

/// A measurement source.  Implementations report their current raw reading;
/// instances accumulate differences between readings taken at start and stop.
class ClockBackend {
 public:
  virtual ~ClockBackend() = default;

  virtual const std::string& name() const noexcept = 0;
  virtual std::span<const ClockValueDescriptor> descriptors() const noexcept = 0;

  /// Writes one reading per descriptor into `out` (sized to match).
  virtual void sample(std::span<std::int64_t> out) const = 0;
};

/// One independent accumulator over a backend.  Owned by a single execution
/// context at a time.
class ClockInstance {
 public:
  explicit ClockInstance(std::shared_ptr<const ClockBackend> backend);

  const std::string& backend_name() const noexcept { return backend_->name(); }
  std::span<const ClockValueDescriptor> descriptors() const noexcept {
    return backend_->descriptors();
  }
  bool running() const noexcept { return running_; }

  void start();
  void stop();

  /// Accumulated values; while running this includes the interval in progress
  /// without disturbing the instance.
  ClockValues get() const;

  /// Replaces the accumulated values.  The instance must be stopped.
  void set(std::span<const std::int64_t> values);

  /// Zeroes the accumulated values.  A running instance restarts its epoch.
  void reset();

 private:
  ClockValues sample_now() const;

  std::shared_ptr<const ClockBackend> backend_;
  bool running_ = false;
  ClockValues accumulated_;
  ClockValues epoch_;
};

struct BackendId {
  std::size_t value = 0;
  friend auto operator<=>(const BackendId&, const BackendId&) = default;
};

/// Registry of clock backends, in registration order.  Populated during
/// setup and read-only afterwards.
class ClockRegistry {
 public:
  BackendId register_backend(std::shared_ptr<const ClockBackend> backend);

  std::size_t size() const noexcept { return backends_.size(); }
  const ClockBackend& backend(BackendId id) const;
  std::shared_ptr<const ClockBackend> backend_ptr(BackendId id) const;
  std::optional<BackendId> find(std::string_view name) const noexcept;
  std::vector<std::string> list_backends() const;

  ClockInstance create(BackendId id) const;
  /// One fresh instance of every registered backend, in registration order.
  std::vector<ClockInstance> create_all() const;

 private:
  std::vector<std::shared_ptr<const ClockBackend>> backends_;
};

/// Manually advanced simulation time.  Single writer; `now` may be read from
/// any thread.
class VirtualClockController {
 public:
  Nanoseconds now() const noexcept { return Nanoseconds{now_ns_.load(std::memory_order_acquire)}; }

  /// Throws std::invalid_argument for negative steps.
  void advance(Nanoseconds step);
  /// Moves time forward to `t`; moving backwards is an error.
  void advance_to(Nanoseconds t);

 private:
  std::atomic<std::int64_t> now_ns_{0};
};

/// "virtual-wall": reads a VirtualClockController.
class VirtualWallClock final : public ClockBackend {
 public:
  explicit VirtualWallClock(std::shared_ptr<const VirtualClockController> controller,
                            std::string name = "virtual-wall");

  const std::string& name() const noexcept override { return name_; }
  std::span<const ClockValueDescriptor> descriptors() const noexcept override {
    return descriptors_;
  }
  void sample(std::span<std::int64_t> out) const override;

 private:
  std::shared_ptr<const VirtualClockController> controller_;
  std::string name_;
  std::vector<ClockValueDescriptor> descriptors_;
};

/// "real-wall": the OS monotonic clock.
class RealWallClock final : public ClockBackend {
 public:
  explicit RealWallClock(std::string name = "real-wall");

  const std::string& name() const noexcept override { return name_; }
  std::span<const ClockValueDescriptor> descriptors() const noexcept override {
    return descriptors_;
  }
  void sample(std::span<std::int64_t> out) const override;

 private:
  std::string name_;
  std::vector<ClockValueDescriptor> descriptors_;
};

/// "process-cpu": CPU time consumed by the whole process.
class ProcessCpuClock final : public ClockBackend {
 public:
  explicit ProcessCpuClock(std::string name = "process-cpu");

  const std::string& name() const noexcept override { return name_; }
  std::span<const ClockValueDescriptor> descriptors() const noexcept override {
    return descriptors_;
  }
  void sample(std::span<std::int64_t> out) const override;

 private:
  std::string name_;
  std::vector<ClockValueDescriptor> descriptors_;
};

/// "event-counter": counts events reported through record().  Models
/// hardware counter interfaces: the counters are shared, and each running
/// instance sees the events recorded while it runs.
class EventCounterClock final : public ClockBackend {
 public:
  explicit EventCounterClock(std::vector<std::string> event_names = {"events"},
                             std::string name = "event-counter");

  const std::string& name() const noexcept override { return name_; }
  std::span<const ClockValueDescriptor> descriptors() const noexcept override {
    return descriptors_;
  }
  void sample(std::span<std::int64_t> out) const override;

  void record(std::int64_t n, std::size_t event = 0);

 private:
  std::string name_;
  std::vector<ClockValueDescriptor> descriptors_;
  std::unique_ptr<std::atomic<std::int64_t>[]> counters_;
};

/// "cycle": the CPU time-stamp counter.  Returns nullptr on platforms
/// without one; callers treat that as a normal condition.
std::shared_ptr<ClockBackend> make_cycle_clock();

}  // namespace calipers
