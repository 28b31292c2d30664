#pragma once

// Synthetic adaptive-mesh workload.  A refinement level is added every
// `regrid_every` iterations; with L added levels one iteration costs
// compute_unit * 2^L and one checkpoint costs checkpoint_base * (L + 1).

#include <cstdint>

#include "calipers/clock.hpp"

namespace calipers {

struct WorkloadModel {
  std::int64_t base_points = 64'000;        // 40^3
  std::int64_t points_per_level = 64'000;   // 40^3 per regrid
  std::int64_t regrid_every = 5120;
  Nanoseconds compute_unit{18'300'000};     // per iteration at L = 0
  Nanoseconds checkpoint_base{1'000'000'000};
  std::int64_t total_iterations = 20480;
  /// Virtual time spent generating initial data, before iteration 1.
  Nanoseconds initial_data_cost{0};

  /// Throws ConfigError for non-positive parameters or costs that overflow.
  void validate() const;

  /// Levels added by iteration `it`: floor(it / regrid_every).
  std::int64_t added_levels(std::int64_t it) const noexcept { return it / regrid_every; }
  std::int64_t grid_points(std::int64_t it) const noexcept {
    return base_points + added_levels(it) * points_per_level;
  }
  Nanoseconds compute_cost(std::int64_t it) const noexcept {
    return compute_unit * (std::int64_t{1} << added_levels(it));
  }
  Nanoseconds checkpoint_cost(std::int64_t it) const noexcept {
    return checkpoint_base * (added_levels(it) + 1);
  }

  friend bool operator==(const WorkloadModel&, const WorkloadModel&) = default;
};

/// Default workload: 40^3 points, four regrids at 5120-iteration spacing.
/// checkpoint_base is a placeholder; see calibrate().
WorkloadModel reference_model();

/// Constant per-iteration and per-checkpoint costs (no regridding).
WorkloadModel constant_model(Nanoseconds compute, Nanoseconds checkpoint, std::int64_t iterations);

}  // namespace calipers
