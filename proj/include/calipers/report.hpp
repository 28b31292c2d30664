#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calipers/schedule.hpp"
#include "calipers/timer.hpp"

namespace calipers {

enum class ReportMode { off, full };

struct ReportConfig {
  ReportMode mode = ReportMode::off;
  std::int64_t period_iterations = 1;
  bool to_stdout = false;
  std::optional<std::filesystem::path> logfile;
  /// Receives the latest export document on every emission.
  std::optional<std::filesystem::path> export_path;
};

/// Nanoseconds as seconds with 8 decimals, rounded half up: 79763280000 -> "79.76328000".
std::string format_seconds(std::int64_t ns);

/// Fixed-width timer table.  Routines listed in `layout` are grouped into
/// per-bin sections closed by a "Total time for <bin>" line; remaining timers
/// form a trailing section; the last line is "Total time for simulation".
std::string render_report(const TimerSnapshot& snapshot, const ScheduleLayout& layout = {});

/// JSON document with integer values (nanoseconds or counts).
std::string export_snapshot(const TimerSnapshot& snapshot, const ScheduleLayout& layout = {});

struct ParsedSnapshot {
  TimerSnapshot snapshot;
  ScheduleLayout layout;
};

/// Inverse of export_snapshot.  Throws ConfigError on malformed documents.
ParsedSnapshot parse_snapshot(std::string_view document);

/// Emits reports every `period_iterations` iterations to the configured sinks.
/// Sink failures become warnings; they never interrupt the caller.
class Reporter {
 public:
  explicit Reporter(ReportConfig config, std::ostream* out = nullptr);

  /// Returns true if a report was emitted for this iteration.
  bool periodic_emit(std::int64_t iteration, const TimerSnapshot& snapshot,
                     const ScheduleLayout& layout = {});

  const ReportConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t emissions() const noexcept { return emissions_; }

 private:
  ReportConfig config_;
  std::ostream* out_;
  std::vector<std::string> warnings_;
  std::size_t emissions_ = 0;
};

}  // namespace calipers
