#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "calipers/checkpoint.hpp"
#include "calipers/monitor.hpp"
#include "calipers/param_file.hpp"
#include "calipers/report.hpp"
#include "calipers/workload.hpp"

namespace calipers {

/// Everything a harness run needs, resolved from a parameter file.
///
/// Recognised keys:
///   run::name
///   cactus::print_timing_info           off | full
///   report::period  report::stdout  report::logfile  report::export  report::listen
///   checkpoint::mode                    fixed_interval | adaptive
///   checkpoint::every  checkpoint::on_initial  checkpoint::on_terminate  checkpoint::dir
///   adaptcheck::max_checkpoint_fraction  adaptcheck::max_checkpoint_interval (seconds | inf)
///   adaptcheck::clock
///   workload::base_points  workload::points_per_level  workload::regrid_every
///   workload::total_iterations  workload::compute_unit  workload::checkpoint_base (seconds)
///   workload::initial_data_cost (seconds)
///   workload::calibrate_fraction  workload::calibrate_every
struct RunConfig {
  std::string name = "run";
  WorkloadModel model = reference_model();
  CheckpointPolicy policy;
  ReportConfig report;
  std::optional<std::filesystem::path> checkpoint_dir;
  std::optional<MonitorEndpoint> listen;
  std::string measure_clock = "virtual-wall";
  /// When set, checkpoint_base is derived by calibrate() against a
  /// fixed-interval baseline of `calibrate_every` iterations.
  std::optional<double> calibrate_fraction;
  std::int64_t calibrate_every = 512;
};

/// Throws ConfigError on unknown keys or invalid values.
RunConfig parse_run_config(const ParameterFile& params);
RunConfig load_run_config(const std::filesystem::path& path);

/// Seconds as an exact decimal with at most 9 places.  Throws ConfigError.
Nanoseconds parse_seconds(std::string_view text);

/// Applies calibration if requested; returns the model to run.
WorkloadModel resolve_model(const RunConfig& config);

}  // namespace calipers
