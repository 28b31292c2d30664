#pragma once

// Portable checkpoint files.
//
//   "CALIPCKP"                      8-byte magic
//   version                         int64
//   body length in bytes            int64
//   body                            see encode_checkpoint()
//   CRC-32 of all preceding bytes   int64
//
// Every numeric field is a big-endian 64-bit integer; strings are an int64
// byte count followed by the bytes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "calipers/checkpoint.hpp"
#include "calipers/timer.hpp"

namespace calipers {

inline constexpr std::int64_t kCheckpointFormatVersion = 1;

enum class IterationEvent : std::int64_t { none = 0, checkpoint = 1, regrid = 2 };

std::string_view to_string(IterationEvent event) noexcept;

struct SimulationState {
  std::int64_t iteration = 0;
  std::int64_t refinement_levels = 1;
  std::int64_t grid_points = 0;
  Nanoseconds virtual_time{0};
  IterationEvent last_event = IterationEvent::none;
  CheckpointAccounting accounting;

  friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

struct TimerRecord {
  std::string name;
  TimerReading readings;
  friend bool operator==(const TimerRecord&, const TimerRecord&) = default;
};

struct CheckpointContents {
  SimulationState state;
  std::vector<TimerRecord> timers;
  friend bool operator==(const CheckpointContents&, const CheckpointContents&) = default;
};

/// "checkpoint.it_<iteration>.chk"
std::string checkpoint_file_name(std::int64_t iteration);

std::string encode_checkpoint(const CheckpointContents& contents);
/// Throws CorruptCheckpointError or VersionMismatchError.
CheckpointContents decode_checkpoint(std::string_view bytes);

/// Writes through a temporary file and renames it into place.
void write_checkpoint(const std::filesystem::path& path, const CheckpointContents& contents);
CheckpointContents read_checkpoint(const std::filesystem::path& path);

}  // namespace calipers
