#pragma once

// Adaptive checkpoint control.
//
// At every iteration boundary the driver asks decide() whether to write a
// checkpoint.  In adaptive mode a checkpoint is refused while the fraction of
// elapsed wall time already spent checkpointing exceeds the configured
// maximum.  The bound is weak: it is tested on the fraction *before* the
// candidate checkpoint, so a granted checkpoint may push the fraction above
// the limit.  An optional maximum interval forces a checkpoint once that much
// wall time has passed since the last one started, regardless of the
// fraction, so consecutive checkpoint starts are never further apart than
// the interval plus one iteration.
//
// All comparisons are exact: times are integer nanoseconds and the fraction
// limit is an integer number of parts per billion.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "calipers/clock.hpp"

namespace calipers {

/// A ratio in [0, 1] stored as integer parts per billion.
class PartsPerBillion {
 public:
  static constexpr std::int64_t kDenominator = 1'000'000'000;

  constexpr PartsPerBillion() = default;
  static constexpr PartsPerBillion from_ppb(std::int64_t ppb) { return PartsPerBillion(ppb); }
  /// Nearest representable value.
  static PartsPerBillion from_double(double ratio);
  /// Exact decimal parse ("0.05", "5e-2" is not accepted).  Throws ConfigError.
  static PartsPerBillion parse(std::string_view text);

  constexpr std::int64_t ppb() const noexcept { return ppb_; }
  double value() const noexcept { return static_cast<double>(ppb_) / kDenominator; }

  friend constexpr auto operator<=>(PartsPerBillion, PartsPerBillion) = default;

 private:
  constexpr explicit PartsPerBillion(std::int64_t ppb) : ppb_(ppb) {}
  std::int64_t ppb_ = 0;
};

/// part / whole <= bound, evaluated exactly.  A zero `whole` counts as ratio 0.
bool ratio_at_most(Nanoseconds part, Nanoseconds whole, PartsPerBillion bound) noexcept;

enum class CheckpointMode { fixed_interval, adaptive };

std::string_view to_string(CheckpointMode mode) noexcept;

struct CheckpointPolicy {
  CheckpointMode mode = CheckpointMode::fixed_interval;
  std::int64_t every_iterations = 512;
  PartsPerBillion max_fraction = PartsPerBillion::from_ppb(50'000'000);
  /// Unbounded when empty.
  std::optional<Nanoseconds> max_interval;
  bool checkpoint_on_initial = false;
  bool checkpoint_on_terminate = false;

  static CheckpointPolicy fixed_interval(std::int64_t every);
  static CheckpointPolicy adaptive(PartsPerBillion max_fraction,
                                   std::optional<Nanoseconds> max_interval = std::nullopt);

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const CheckpointPolicy&, const CheckpointPolicy&) = default;
};

struct CheckpointAccounting {
  Nanoseconds total_checkpoint{0};
  /// Wall time since simulation start, checkpoint time included.
  Nanoseconds total_elapsed{0};
  std::optional<Nanoseconds> last_checkpoint_start;
  std::optional<Nanoseconds> last_checkpoint_end;
  std::int64_t checkpoints_taken = 0;

  friend bool operator==(const CheckpointAccounting&, const CheckpointAccounting&) = default;
};

/// total_checkpoint / total_elapsed, or 0 when nothing has elapsed.
double checkpoint_fraction(const CheckpointAccounting& accounting) noexcept;

/// Adds one completed checkpoint write.  Throws std::invalid_argument when
/// end < start.
CheckpointAccounting record_checkpoint(CheckpointAccounting accounting, Nanoseconds start,
                                       Nanoseconds end);

/// Advances total_elapsed to `now` (never backwards).
CheckpointAccounting observe_elapsed(CheckpointAccounting accounting, Nanoseconds now) noexcept;

enum class Verdict { checkpoint, skip };

enum class DecisionReason {
  initial,
  terminal,
  periodic_due,
  adaptive_allowed,
  max_interval_forced,
  skip_fraction_exceeded,
  skip_not_due,
};

std::string_view to_string(DecisionReason reason) noexcept;

struct CheckpointDecision {
  Verdict verdict = Verdict::skip;
  DecisionReason reason = DecisionReason::skip_not_due;

  bool checkpoint() const noexcept { return verdict == Verdict::checkpoint; }
  friend bool operator==(const CheckpointDecision&, const CheckpointDecision&) = default;
};

struct DecisionPoint {
  Nanoseconds now{0};  ///< wall time since simulation start
  std::int64_t iteration = 0;
  bool is_initial = false;
  bool is_terminal = false;
};

/// Precedence: terminal (if enabled), initial, then the mode's rule.  In
/// adaptive mode the interval guarantee overrides the fraction gate.
CheckpointDecision decide(const CheckpointPolicy& policy, const CheckpointAccounting& accounting,
                          const DecisionPoint& point);

}  // namespace calipers
