#include "calipers/run_config.hpp"

#include <charconv>

#include <fmt/core.h>

#include "calipers/decimal.hpp"
#include "calipers/error.hpp"
#include "calipers/experiment.hpp"

namespace calipers {

Nanoseconds parse_seconds(std::string_view text) {
  const auto ns = parse_fixed_point(text, 9);
  if (!ns) throw ConfigError(fmt::format("'{}' is not a duration in seconds (at most 9 decimals)", text));
  return Nanoseconds{*ns};
}

RunConfig parse_run_config(const ParameterFile& params) {
  static const std::set<std::string, std::less<>> known{
      "run::name",
      "cactus::print_timing_info",
      "report::period",
      "report::stdout",
      "report::logfile",
      "report::export",
      "report::listen",
      "checkpoint::mode",
      "checkpoint::every",
      "checkpoint::on_initial",
      "checkpoint::on_terminate",
      "checkpoint::dir",
      "adaptcheck::max_checkpoint_fraction",
      "adaptcheck::max_checkpoint_interval",
      "adaptcheck::clock",
      "workload::base_points",
      "workload::points_per_level",
      "workload::regrid_every",
      "workload::total_iterations",
      "workload::compute_unit",
      "workload::checkpoint_base",
      "workload::initial_data_cost",
      "workload::calibrate_fraction",
      "workload::calibrate_every",
  };
  params.require_known(known);

  RunConfig cfg;
  if (auto v = params.get("run::name")) {
    if (v->empty() || v->find('/') != std::string::npos) throw ConfigError("run::name must be a plain file stem");
    cfg.name = *v;
  }

  if (auto v = params.get("cactus::print_timing_info")) {
    if (*v == "full") {
      cfg.report.mode = ReportMode::full;
    } else if (*v == "off" || *v == "no") {
      cfg.report.mode = ReportMode::off;
    } else {
      throw ConfigError(fmt::format("cactus::print_timing_info must be 'full' or 'off', got '{}'", *v));
    }
  }
  if (auto v = params.get_int("report::period")) {
    if (*v < 1) throw ConfigError("report::period must be at least 1");
    cfg.report.period_iterations = *v;
  }
  cfg.report.to_stdout = params.get_bool("report::stdout").value_or(false);
  if (auto v = params.get("report::logfile")) cfg.report.logfile = *v;
  if (auto v = params.get("report::export")) cfg.report.export_path = *v;
  if (auto v = params.get("report::listen")) cfg.listen = parse_endpoint(*v);

  auto& p = cfg.policy;
  if (auto v = params.get("checkpoint::mode")) {
    if (*v == "adaptive") {
      p.mode = CheckpointMode::adaptive;
    } else if (*v == "fixed_interval" || *v == "fixed") {
      p.mode = CheckpointMode::fixed_interval;
    } else {
      throw ConfigError(fmt::format("checkpoint::mode must be fixed_interval or adaptive, got '{}'", *v));
    }
  }
  if (auto v = params.get_int("checkpoint::every")) p.every_iterations = *v;
  p.checkpoint_on_initial = params.get_bool("checkpoint::on_initial").value_or(false);
  p.checkpoint_on_terminate = params.get_bool("checkpoint::on_terminate").value_or(false);
  if (auto v = params.get("checkpoint::dir")) cfg.checkpoint_dir = *v;
  if (auto v = params.get("adaptcheck::max_checkpoint_fraction")) p.max_fraction = PartsPerBillion::parse(*v);
  if (auto v = params.get("adaptcheck::max_checkpoint_interval")) {
    if (*v == "inf" || *v == "infinity" || *v == "none") {
      p.max_interval.reset();
    } else {
      p.max_interval = parse_seconds(*v);
    }
  }
  if (auto v = params.get("adaptcheck::clock")) cfg.measure_clock = *v;
  p.validate();

  auto& m = cfg.model;
  if (auto v = params.get_int("workload::base_points")) m.base_points = *v;
  if (auto v = params.get_int("workload::points_per_level")) m.points_per_level = *v;
  if (auto v = params.get_int("workload::regrid_every")) m.regrid_every = *v;
  if (auto v = params.get_int("workload::total_iterations")) m.total_iterations = *v;
  if (auto v = params.get("workload::compute_unit")) m.compute_unit = parse_seconds(*v);
  if (auto v = params.get("workload::checkpoint_base")) m.checkpoint_base = parse_seconds(*v);
  if (auto v = params.get("workload::initial_data_cost")) m.initial_data_cost = parse_seconds(*v);
  if (auto v = params.get("workload::calibrate_fraction")) {
    const auto ppb = PartsPerBillion::parse(*v);
    cfg.calibrate_fraction = ppb.value();
  }
  if (auto v = params.get_int("workload::calibrate_every")) {
    if (*v < 1) throw ConfigError("workload::calibrate_every must be positive");
    cfg.calibrate_every = *v;
  }
  m.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(ParameterFile::load(path));
}

WorkloadModel resolve_model(const RunConfig& config) {
  if (!config.calibrate_fraction) return config.model;
  return calibrate(config.model, *config.calibrate_fraction,
                   CheckpointPolicy::fixed_interval(config.calibrate_every))
      .model;
}

}  // namespace calipers
