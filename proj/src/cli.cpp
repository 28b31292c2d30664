#include "calipers/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "calipers/error.hpp"
#include "calipers/experiment.hpp"
#include "calipers/monitor.hpp"
#include "calipers/run_config.hpp"

namespace calipers {

namespace fs = std::filesystem;

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct CommonFlags {
  fs::path out_dir = ".";
  std::int64_t seed = 0;
  bool quiet = false;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
}

fs::path under(const fs::path& dir, const fs::path& p) { return p.is_absolute() ? p : dir / p; }

RunConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError(fmt::format("config file '{}' does not exist", path.string()));
  return load_run_config(path);
}

RunOptions options_for(const RunConfig& cfg, const CommonFlags& flags, std::ostream& out) {
  RunOptions opts;
  opts.report = cfg.report;
  if (flags.quiet) opts.report.to_stdout = false;
  if (opts.report.logfile) opts.report.logfile = under(flags.out_dir, *opts.report.logfile);
  if (opts.report.export_path) opts.report.export_path = under(flags.out_dir, *opts.report.export_path);
  opts.report_stream = &out;
  opts.measure_clock = cfg.measure_clock;
  if (cfg.checkpoint_dir) {
    opts.checkpoint_dir = under(flags.out_dir, *cfg.checkpoint_dir);
    fs::create_directories(*opts.checkpoint_dir);
  }
  return opts;
}

void write_outputs(const fs::path& dir, const std::string& stem, const ExperimentResult& r) {
  write_text(dir / (stem + ".series.csv"), series_csv(r.series));
  write_text(dir / (stem + ".summary.json"), summary_json(r.summary));
  write_text(dir / (stem + ".report.txt"), render_report(r.final_timers, r.layout));
  write_text(dir / (stem + ".timers.json"), export_snapshot(r.final_timers, r.layout));
}

void print_summary(std::ostream& out, const std::string& stem, const ExperimentResult& r) {
  const auto& s = r.summary;
  out << fmt::format("{}: {} iterations, runtime {} s, checkpointing {} s in {} checkpoints, fraction {:.4f}\n",
                     stem, s.model.total_iterations, format_seconds(s.total_runtime.count()),
                     format_seconds(s.total_checkpoint.count()), s.checkpoints_taken, s.final_fraction);
}

void report_warnings(std::ostream& err, const ExperimentResult& r) {
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
}

ExperimentResult load_result(const fs::path& summary_path) {
  ExperimentResult r;
  r.summary = parse_summary_json(read_text(summary_path));
  std::string series = summary_path.string();
  const std::string suffix = ".summary.json";
  if (series.size() > suffix.size() && series.ends_with(suffix)) {
    series.replace(series.size() - suffix.size(), suffix.size(), ".series.csv");
    if (fs::exists(series)) r.series = parse_series_csv(read_text(series));
  }
  return r;
}

int cmd_run(const fs::path& config_path, const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const WorkloadModel model = resolve_model(cfg);
  fs::create_directories(flags.out_dir);
  const ExperimentResult r = run_experiment(model, cfg.policy, options_for(cfg, flags, out));
  write_outputs(flags.out_dir, cfg.name, r);
  report_warnings(err, r);
  if (!flags.quiet) print_summary(out, cfg.name, r);
  return 0;
}

int cmd_serve(const fs::path& config_path, double hold_seconds, const CommonFlags& flags, std::ostream& out,
              std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const WorkloadModel model = resolve_model(cfg);
  fs::create_directories(flags.out_dir);
  Experiment experiment(model, cfg.policy, options_for(cfg, flags, out));
  MonitorServer server(experiment.timers(), experiment.layout(), cfg.listen.value_or(MonitorEndpoint{}));
  server.start();
  out << fmt::format("monitor listening on http://{}:{}/timers\n", server.host(), server.port()) << std::flush;

  const ExperimentResult r = experiment.run();
  write_outputs(flags.out_dir, cfg.name, r);
  report_warnings(err, r);
  if (!flags.quiet) print_summary(out, cfg.name, r);
  if (hold_seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(hold_seconds));
  server.stop();
  return 0;
}

int cmd_restart(const fs::path& checkpoint, const fs::path& config_path, const CommonFlags& flags,
                std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const WorkloadModel model = resolve_model(cfg);
  const CheckpointContents contents = read_checkpoint(checkpoint);
  fs::create_directories(flags.out_dir);
  const ExperimentResult r = restart_experiment(contents, model, cfg.policy, options_for(cfg, flags, out));
  const std::string stem = cfg.name + "-restart";
  write_outputs(flags.out_dir, stem, r);
  report_warnings(err, r);
  if (!flags.quiet) {
    out << fmt::format("restarted from iteration {}\n", contents.state.iteration);
    print_summary(out, stem, r);
  }
  return 0;
}

int cmd_compare(const fs::path& a, const fs::path& b, const CommonFlags& flags, std::ostream& out) {
  const ExperimentResult ra = load_result(a);
  const ExperimentResult rb = load_result(b);
  const Comparison c = compare_runs(ra, rb);
  fs::create_directories(flags.out_dir);
  write_text(flags.out_dir / "compare.csv", c.fraction_curves_csv);
  out << fmt::format("runtime reduction: {:.1f}%\n", 100.0 * c.runtime_reduction);
  out << fmt::format("checkpoint time ratio: {:.2f}\n", c.checkpoint_ratio);
  out << fmt::format("final fractions: {:.4f} -> {:.4f}\n", ra.summary.final_fraction, rb.summary.final_fraction);
  return 0;
}

int cmd_report(const fs::path& snapshot, std::ostream& out) {
  const ParsedSnapshot parsed = parse_snapshot(read_text(snapshot));
  out << render_report(parsed.snapshot, parsed.layout);
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-profiling timers and adaptive checkpointing experiments", "calipers"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  app.add_option("--out-dir", flags.out_dir, "Directory for result files");
  app.add_option("--seed", flags.seed, "Reserved; experiments are deterministic");
  app.add_flag("--quiet", flags.quiet, "Suppress progress output");

  fs::path config, checkpoint, file_a, file_b, snapshot;
  double hold_seconds = 0.0;

  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("config", config, "Parameter file")->required();
  auto* serve = app.add_subcommand("serve", "Run an experiment with the HTTP monitor");
  serve->add_option("config", config, "Parameter file")->required();
  serve->add_option("--hold-seconds", hold_seconds, "Keep serving this long after the run");
  auto* restart = app.add_subcommand("restart", "Continue a run from a checkpoint file");
  restart->add_option("checkpoint", checkpoint, "Checkpoint file")->required();
  restart->add_option("config", config, "Parameter file")->required();
  auto* compare = app.add_subcommand("compare", "Compare two runs");
  compare->add_option("a", file_a, "Summary JSON of the reference run")->required();
  compare->add_option("b", file_b, "Summary JSON of the other run")->required();
  auto* report = app.add_subcommand("report", "Render an exported timer snapshot");
  report->add_option("snapshot", snapshot, "Snapshot JSON")->required();

  std::vector<std::string> argv_reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config, flags, out, err);
    if (*serve) return cmd_serve(config, hold_seconds, flags, out, err);
    if (*restart) return cmd_restart(checkpoint, config, flags, out, err);
    if (*compare) return cmd_compare(file_a, file_b, flags, out);
    if (*report) return cmd_report(snapshot, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  return cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace calipers
