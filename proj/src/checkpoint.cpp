#include "calipers/checkpoint.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "calipers/decimal.hpp"
#include "calipers/error.hpp"

namespace calipers {

PartsPerBillion PartsPerBillion::from_double(double ratio) {
  if (!std::isfinite(ratio)) throw std::invalid_argument("ratio must be finite");
  return PartsPerBillion(std::llround(ratio * kDenominator));
}

PartsPerBillion PartsPerBillion::parse(std::string_view text) {
  const auto v = parse_fixed_point(text, 9);
  if (!v) throw ConfigError(fmt::format("'{}' is not a decimal fraction with at most 9 places", text));
  return PartsPerBillion(*v);
}

bool ratio_at_most(Nanoseconds part, Nanoseconds whole, PartsPerBillion bound) noexcept {
  if (whole.count() <= 0) return bound.ppb() >= 0;
  const Int128 lhs = static_cast<Int128>(part.count()) * PartsPerBillion::kDenominator;
  const Int128 rhs = static_cast<Int128>(bound.ppb()) * whole.count();
  return lhs <= rhs;
}

std::string_view to_string(CheckpointMode mode) noexcept {
  return mode == CheckpointMode::adaptive ? "adaptive" : "fixed_interval";
}

std::string_view to_string(DecisionReason reason) noexcept {
  switch (reason) {
    case DecisionReason::initial:
      return "initial";
    case DecisionReason::terminal:
      return "terminal";
    case DecisionReason::periodic_due:
      return "periodic_due";
    case DecisionReason::adaptive_allowed:
      return "adaptive_allowed";
    case DecisionReason::max_interval_forced:
      return "max_interval_forced";
    case DecisionReason::skip_fraction_exceeded:
      return "skip_fraction_exceeded";
    case DecisionReason::skip_not_due:
      return "skip_not_due";
  }
  return "unknown";
}

CheckpointPolicy CheckpointPolicy::fixed_interval(std::int64_t every) {
  CheckpointPolicy p;
  p.mode = CheckpointMode::fixed_interval;
  p.every_iterations = every;
  p.validate();
  return p;
}

CheckpointPolicy CheckpointPolicy::adaptive(PartsPerBillion max_fraction,
                                            std::optional<Nanoseconds> max_interval) {
  CheckpointPolicy p;
  p.mode = CheckpointMode::adaptive;
  p.max_fraction = max_fraction;
  p.max_interval = max_interval;
  p.validate();
  return p;
}

void CheckpointPolicy::validate() const {
  if (every_iterations < 1) {
    throw ConfigError(fmt::format("checkpoint interval must be positive, got {}", every_iterations));
  }
  if (mode == CheckpointMode::adaptive) {
    if (max_fraction.ppb() <= 0 || max_fraction.ppb() > PartsPerBillion::kDenominator) {
      throw ConfigError(fmt::format("max checkpoint fraction must be in (0, 1], got {}", max_fraction.value()));
    }
  }
  if (max_interval && max_interval->count() <= 0) {
    throw ConfigError("max checkpoint interval must be positive");
  }
}

double checkpoint_fraction(const CheckpointAccounting& accounting) noexcept {
  if (accounting.total_elapsed.count() <= 0) return 0.0;
  return static_cast<double>(accounting.total_checkpoint.count()) /
         static_cast<double>(accounting.total_elapsed.count());
}

CheckpointAccounting record_checkpoint(CheckpointAccounting accounting, Nanoseconds start,
                                       Nanoseconds end) {
  if (end < start) {
    throw std::invalid_argument(
        fmt::format("checkpoint ends before it starts ({} ns < {} ns)", end.count(), start.count()));
  }
  accounting.total_checkpoint += end - start;
  accounting.total_elapsed = std::max(accounting.total_elapsed, end);
  accounting.last_checkpoint_start = start;
  accounting.last_checkpoint_end = end;
  ++accounting.checkpoints_taken;
  return accounting;
}

CheckpointAccounting observe_elapsed(CheckpointAccounting accounting, Nanoseconds now) noexcept {
  accounting.total_elapsed = std::max(accounting.total_elapsed, now);
  return accounting;
}

CheckpointDecision decide(const CheckpointPolicy& policy, const CheckpointAccounting& accounting,
                          const DecisionPoint& point) {
  policy.validate();
  if (point.now < accounting.last_checkpoint_end.value_or(Nanoseconds{0})) {
    throw std::invalid_argument("decision time precedes the last checkpoint");
  }

  if (point.is_terminal && policy.checkpoint_on_terminate) {
    return {Verdict::checkpoint, DecisionReason::terminal};
  }
  if (point.is_initial) {
    // The initial boundary only ever hosts the initial-data checkpoint.
    if (policy.checkpoint_on_initial) return {Verdict::checkpoint, DecisionReason::initial};
    return {Verdict::skip, DecisionReason::skip_not_due};
  }

  if (policy.mode == CheckpointMode::adaptive) {
    const Nanoseconds since_last = point.now - accounting.last_checkpoint_start.value_or(Nanoseconds{0});
    if (policy.max_interval && since_last >= *policy.max_interval) {
      return {Verdict::checkpoint, DecisionReason::max_interval_forced};
    }
    if (ratio_at_most(accounting.total_checkpoint, point.now, policy.max_fraction)) {
      return {Verdict::checkpoint, DecisionReason::adaptive_allowed};
    }
    return {Verdict::skip, DecisionReason::skip_fraction_exceeded};
  }

  if (point.iteration > 0 && point.iteration % policy.every_iterations == 0) {
    return {Verdict::checkpoint, DecisionReason::periodic_due};
  }
  return {Verdict::skip, DecisionReason::skip_not_due};
}

}  // namespace calipers
