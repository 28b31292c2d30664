#include "calipers/workload.hpp"

#include <fmt/core.h>

#include "calipers/decimal.hpp"
#include "calipers/error.hpp"

namespace calipers {

void WorkloadModel::validate() const {
  if (base_points <= 0 || points_per_level <= 0) throw ConfigError("grid point counts must be positive");
  if (regrid_every <= 0) throw ConfigError("regrid interval must be positive");
  if (total_iterations < 0) throw ConfigError("iteration count must not be negative");
  if (compute_unit.count() <= 0) throw ConfigError("compute cost per iteration must be positive");
  if (checkpoint_base.count() <= 0) throw ConfigError("checkpoint cost must be positive");
  if (initial_data_cost.count() < 0) throw ConfigError("initial data cost must not be negative");

  // Bound the whole run's virtual time so every sum fits in int64.
  const std::int64_t max_level = added_levels(total_iterations);
  if (max_level > 40) {
    throw ConfigError(fmt::format("{} refinement levels is beyond the supported 40", max_level));
  }
  const Int128 per_iteration = static_cast<Int128>(compute_unit.count()) << max_level;
  const Int128 per_checkpoint = static_cast<Int128>(checkpoint_base.count()) * (max_level + 1);
  const Int128 worst = (per_iteration + per_checkpoint) * (total_iterations + 2) + initial_data_cost.count();
  if (worst > INT64_MAX / 2) throw ConfigError("workload run time overflows 64-bit nanoseconds");
  const Int128 points = static_cast<Int128>(points_per_level) * max_level + base_points;
  if (points > INT64_MAX) throw ConfigError("grid point count overflows");
}

WorkloadModel reference_model() { return WorkloadModel{}; }

WorkloadModel constant_model(Nanoseconds compute, Nanoseconds checkpoint, std::int64_t iterations) {
  WorkloadModel m;
  m.compute_unit = compute;
  m.checkpoint_base = checkpoint;
  m.total_iterations = iterations;
  m.regrid_every = iterations + 1;
  return m;
}

}  // namespace calipers
