#include "calipers/experiment.hpp"

#include <cmath>
#include <sstream>

#include <fmt/core.h>

#include "calipers/error.hpp"
#include "json.hpp"

namespace calipers {

using nlohmann::json;

namespace {

constexpr std::string_view kEventClock = "io-events";

double ratio(Nanoseconds part, Nanoseconds whole) {
  return whole.count() > 0 ? static_cast<double>(part.count()) / static_cast<double>(whole.count()) : 0.0;
}

}  // namespace

struct Experiment::Impl {
  WorkloadModel model;
  CheckpointPolicy policy;
  RunOptions options;

  std::shared_ptr<VirtualClockController> controller = std::make_shared<VirtualClockController>();
  std::shared_ptr<EventCounterClock> io_events =
      std::make_shared<EventCounterClock>(std::vector<std::string>{"checkpoints", "regrids"}, std::string(kEventClock));
  ClockRegistry registry;
  std::unique_ptr<TimerDatabase> db;
  std::unique_ptr<Scheduler> scheduler;
  std::unique_ptr<Reporter> reporter;
  std::optional<ClockInstance> measure;

  SimulationState state;
  ExperimentResult result;
  bool restarted = false;
  bool finished = false;

  Impl(WorkloadModel m, CheckpointPolicy p, RunOptions o)
      : model(m), policy(p), options(std::move(o)) {
    model.validate();
    policy.validate();
    if (options.measure_clock != "virtual-wall") {
      throw ConfigError(fmt::format("the experiment harness measures virtual time; clock '{}' is not available",
                                    options.measure_clock));
    }
    if (options.state_dump_at && !options.state_dump_path) {
      throw ConfigError("a state dump iteration needs a dump path");
    }

    const BackendId wall = registry.register_backend(std::make_shared<VirtualWallClock>(controller));
    registry.register_backend(io_events);
    db = std::make_unique<TimerDatabase>(registry, registry.backend_ptr(wall));
    scheduler = std::make_unique<Scheduler>(*db);
    reporter = std::make_unique<Reporter>(options.report, options.report_stream);
    measure.emplace(registry.create(wall));

    scheduler->register_routine("STARTUP", "AdaptCheck", "Adaptive checkpointing startup",
                                [](const ScheduleContext&) {});
    scheduler->register_routine("INITIAL", "SynthAMR", "Generate initial data",
                                [this](const ScheduleContext&) { controller->advance(model.initial_data_cost); });
    scheduler->register_routine("CHECKPOINT_INITIAL", "SynthIO", "Initial data checkpoint routine",
                                [this](const ScheduleContext& ctx) { checkpoint_boundary(ctx.iteration, true); });
    scheduler->register_routine("EVOL", "SynthAMR", "Evolve refinement hierarchy",
                                [this](const ScheduleContext& ctx) { evolve(ctx.iteration); });
    scheduler->register_routine("CHECKPOINT", "SynthIO", "Evolution checkpoint routine",
                                [this](const ScheduleContext& ctx) { checkpoint_boundary(ctx.iteration, false); });
    scheduler->register_routine("ANALYSIS", "AdaptCheck", "Record checkpoint fraction",
                                [this](const ScheduleContext& ctx) { analyse(ctx.iteration); });
    scheduler->register_routine("TERMINATE", "SynthAMR", "Terminate", [](const ScheduleContext&) {});

    state.iteration = 0;
    state.refinement_levels = 1;
    state.grid_points = model.grid_points(0);
  }

  void restore(const CheckpointContents& chk) {
    const SimulationState& s = chk.state;
    if (s.iteration < 0 || s.iteration > model.total_iterations) {
      throw ConfigError(fmt::format("checkpoint iteration {} is outside this run (0..{})", s.iteration,
                                    model.total_iterations));
    }
    if (s.grid_points != model.grid_points(s.iteration) ||
        s.refinement_levels != model.added_levels(s.iteration) + 1) {
      throw ConfigError("checkpoint does not match the configured workload model");
    }
    state = s;
    controller->advance_to(s.virtual_time);
    const ClockValues now{s.virtual_time.count()};
    measure->set(now);
    for (const auto& t : chk.timers) {
      if (const auto h = db->find(t.name)) {
        db->set(*h, t.readings);
      } else {
        result.warnings.push_back(fmt::format("checkpoint timer '{}' has no counterpart; ignored", t.name));
      }
    }
    restarted = true;
  }

  Nanoseconds now() const { return Nanoseconds{measure->get().front()}; }

  CheckpointContents contents() const { return contents_of(db->snapshot()); }

  CheckpointContents contents_of(const TimerSnapshot& snap) const {
    CheckpointContents c;
    c.state = state;
    for (const auto& e : snap.entries) c.timers.push_back({e.name, e.readings});
    return c;
  }

  void evolve(std::int64_t it) {
    const std::int64_t levels = model.added_levels(it) + 1;
    state.last_event = IterationEvent::none;
    if (levels != state.refinement_levels) {
      state.refinement_levels = levels;
      state.last_event = IterationEvent::regrid;
      io_events->record(1, 1);
    }
    state.grid_points = model.grid_points(it);
    controller->advance(model.compute_cost(it));
    state.iteration = it;
    state.virtual_time = now();
  }

  void checkpoint_boundary(std::int64_t it, bool initial) {
    const Nanoseconds t = now();
    state.accounting = observe_elapsed(state.accounting, t);
    const bool terminal = !initial && it == model.total_iterations;
    DecisionRecord rec{it, t, state.accounting,
                       decide(policy, state.accounting, DecisionPoint{t, it, initial, terminal}), Nanoseconds{0}};
    if (rec.decision.checkpoint()) {
      rec.cost = model.checkpoint_cost(it);
      controller->advance(rec.cost);
      const Nanoseconds end = now();
      state.accounting = record_checkpoint(state.accounting, t, end);
      state.virtual_time = end;
      state.last_event = IterationEvent::checkpoint;
      io_events->record(1, 0);
      if (options.checkpoint_dir) {
        const auto path = *options.checkpoint_dir / checkpoint_file_name(it);
        write_checkpoint(path, contents());
        result.checkpoint_files.push_back(path);
      }
    }
    result.decisions.push_back(rec);
  }

  SeriesRow row_now() const {
    return SeriesRow{state.iteration,
                     state.virtual_time,
                     state.accounting.total_checkpoint,
                     ratio(state.accounting.total_checkpoint, state.virtual_time),
                     state.grid_points,
                     state.last_event};
  }

  void analyse(std::int64_t it) {
    result.series.push_back(row_now());
    const auto& rc = reporter->config();
    if (rc.mode == ReportMode::full && it % rc.period_iterations == 0) {
      reporter->periodic_emit(it, db->snapshot(), scheduler->layout());
    }
  }

  ExperimentResult run() {
    if (finished) throw StateError("an experiment can only be run once");
    finished = true;

    std::int64_t first = 1;
    measure->start();
    scheduler->begin_simulation();
    scheduler->run_bin("STARTUP", state.iteration);
    if (restarted) {
      result.series.push_back(row_now());
      first = state.iteration + 1;
    } else {
      scheduler->run_bin("INITIAL", 0);
      state.virtual_time = now();
      scheduler->run_bin("CHECKPOINT_INITIAL", 0);
    }

    for (std::int64_t it = first; it <= model.total_iterations; ++it) {
      scheduler->run_bin("EVOL", it);
      scheduler->run_bin("CHECKPOINT", it);
      scheduler->run_bin("ANALYSIS", it);
      if (options.state_dump_at && *options.state_dump_at == it) {
        write_checkpoint(*options.state_dump_path, contents());
      }
    }

    scheduler->run_bin("TERMINATE", model.total_iterations);
    scheduler->end_simulation();
    measure->stop();

    state.accounting = observe_elapsed(state.accounting, now());
    result.summary = RunSummary{model,
                                policy,
                                state.virtual_time,
                                state.accounting.total_checkpoint,
                                ratio(state.accounting.total_checkpoint, state.virtual_time),
                                state.accounting.checkpoints_taken};
    result.final_state = state;
    result.final_timers = db->snapshot();
    result.layout = scheduler->layout();
    for (const auto& w : reporter->warnings()) result.warnings.push_back(w);
    return std::move(result);
  }
};

Experiment::Experiment(WorkloadModel model, CheckpointPolicy policy, RunOptions options)
    : impl_(std::make_unique<Impl>(model, policy, std::move(options))) {}

Experiment::Experiment(const CheckpointContents& restart, WorkloadModel model, CheckpointPolicy policy,
                       RunOptions options)
    : impl_(std::make_unique<Impl>(model, policy, std::move(options))) {
  impl_->restore(restart);
}

Experiment::~Experiment() = default;

const TimerDatabase& Experiment::timers() const { return *impl_->db; }

ScheduleLayout Experiment::layout() const { return impl_->scheduler->layout(); }

ExperimentResult Experiment::run() { return impl_->run(); }

ExperimentResult run_experiment(const WorkloadModel& model, const CheckpointPolicy& policy, RunOptions options) {
  return Experiment(model, policy, std::move(options)).run();
}

ExperimentResult restart_experiment(const CheckpointContents& restart, const WorkloadModel& model,
                                    const CheckpointPolicy& policy, RunOptions options) {
  return Experiment(restart, model, policy, std::move(options)).run();
}

// Series CSV

std::string series_csv(const std::vector<SeriesRow>& series) {
  std::string out = "iteration,elapsed_ns,checkpoint_ns_cum,fraction,grid_points,event\n";
  for (const auto& r : series) {
    out += fmt::format("{},{},{},{:.9f},{},{}\n", r.iteration, r.elapsed.count(), r.checkpoint_cumulative.count(),
                       r.fraction, r.grid_points, to_string(r.event));
  }
  return out;
}

std::vector<SeriesRow> parse_series_csv(std::string_view text) {
  std::vector<SeriesRow> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "iteration,elapsed_ns,checkpoint_ns_cum,fraction,grid_points,event") {
    throw ConfigError("series CSV has an unexpected header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw ConfigError(fmt::format("series CSV line {}: expected 6 fields", line_no));
    try {
      SeriesRow r;
      r.iteration = std::stoll(f[0]);
      r.elapsed = Nanoseconds{std::stoll(f[1])};
      r.checkpoint_cumulative = Nanoseconds{std::stoll(f[2])};
      r.fraction = std::stod(f[3]);
      r.grid_points = std::stoll(f[4]);
      if (f[5] == "none") {
        r.event = IterationEvent::none;
      } else if (f[5] == "checkpoint") {
        r.event = IterationEvent::checkpoint;
      } else if (f[5] == "regrid") {
        r.event = IterationEvent::regrid;
      } else {
        throw ConfigError(fmt::format("series CSV line {}: unknown event '{}'", line_no, f[5]));
      }
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("series CSV line {}: malformed number", line_no));
    }
  }
  return out;
}

// Summary JSON

std::string summary_json(const RunSummary& s) {
  json model{{"base_points", s.model.base_points},
             {"points_per_level", s.model.points_per_level},
             {"regrid_every", s.model.regrid_every},
             {"compute_unit_ns", s.model.compute_unit.count()},
             {"checkpoint_base_ns", s.model.checkpoint_base.count()},
             {"total_iterations", s.model.total_iterations},
             {"initial_data_cost_ns", s.model.initial_data_cost.count()}};
  json policy{{"mode", std::string(to_string(s.policy.mode))},
              {"every_iterations", s.policy.every_iterations},
              {"max_fraction_ppb", s.policy.max_fraction.ppb()},
              {"max_interval_ns", s.policy.max_interval ? json(s.policy.max_interval->count()) : json(nullptr)},
              {"checkpoint_on_initial", s.policy.checkpoint_on_initial},
              {"checkpoint_on_terminate", s.policy.checkpoint_on_terminate}};
  json doc{{"model", model},
           {"policy", policy},
           {"total_runtime_ns", s.total_runtime.count()},
           {"total_checkpoint_ns", s.total_checkpoint.count()},
           {"final_fraction", s.final_fraction},
           {"checkpoints_taken", s.checkpoints_taken}};
  return doc.dump(2) + "\n";
}

RunSummary parse_summary_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    RunSummary s;
    const json& m = doc.at("model");
    s.model.base_points = m.at("base_points").get<std::int64_t>();
    s.model.points_per_level = m.at("points_per_level").get<std::int64_t>();
    s.model.regrid_every = m.at("regrid_every").get<std::int64_t>();
    s.model.compute_unit = Nanoseconds{m.at("compute_unit_ns").get<std::int64_t>()};
    s.model.checkpoint_base = Nanoseconds{m.at("checkpoint_base_ns").get<std::int64_t>()};
    s.model.total_iterations = m.at("total_iterations").get<std::int64_t>();
    s.model.initial_data_cost = Nanoseconds{m.at("initial_data_cost_ns").get<std::int64_t>()};
    const json& p = doc.at("policy");
    const auto mode = p.at("mode").get<std::string>();
    s.policy.mode = mode == "adaptive" ? CheckpointMode::adaptive : CheckpointMode::fixed_interval;
    s.policy.every_iterations = p.at("every_iterations").get<std::int64_t>();
    s.policy.max_fraction = PartsPerBillion::from_ppb(p.at("max_fraction_ppb").get<std::int64_t>());
    if (!p.at("max_interval_ns").is_null()) s.policy.max_interval = Nanoseconds{p.at("max_interval_ns").get<std::int64_t>()};
    s.policy.checkpoint_on_initial = p.at("checkpoint_on_initial").get<bool>();
    s.policy.checkpoint_on_terminate = p.at("checkpoint_on_terminate").get<bool>();
    s.total_runtime = Nanoseconds{doc.at("total_runtime_ns").get<std::int64_t>()};
    s.total_checkpoint = Nanoseconds{doc.at("total_checkpoint_ns").get<std::int64_t>()};
    s.final_fraction = doc.at("final_fraction").get<double>();
    s.checkpoints_taken = doc.at("checkpoints_taken").get<std::int64_t>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run summary: ") + e.what());
  }
}

// Calibration

CalibrationResult calibrate(const WorkloadModel& skeleton, double target_fraction, const CheckpointPolicy& baseline) {
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw CalibrationError(fmt::format("target fraction {} is not reachable; it must lie in (0, 1)", target_fraction));
  }
  if (baseline.mode != CheckpointMode::fixed_interval) {
    throw CalibrationError("calibration needs a fixed-interval baseline policy");
  }
  constexpr double kTolerance = 0.01;
  constexpr double kGoal = 1e-5;

  CalibrationResult out{skeleton, 0.0, 0};
  auto fraction_at = [&](std::int64_t c0) {
    WorkloadModel m = skeleton;
    m.checkpoint_base = Nanoseconds{c0};
    ++out.evaluations;
    return run_experiment(m, baseline).summary.final_fraction;
  };

  // Fixed-interval decisions do not depend on timing, so the baseline
  // fraction increases monotonically with the checkpoint cost.
  std::int64_t lo = 1;
  std::int64_t hi = std::max<std::int64_t>(skeleton.compute_unit.count(), 2);
  double f_lo = fraction_at(lo);
  double f_hi = fraction_at(hi);
  if (f_lo > target_fraction + kTolerance) {
    throw CalibrationError("even a 1 ns checkpoint exceeds the target fraction");
  }
  while (f_hi < target_fraction) {
    if (hi > INT64_MAX / 4) throw CalibrationError("target fraction out of reach within search bounds");
    lo = hi;
    f_lo = f_hi;
    hi *= 2;
    WorkloadModel probe = skeleton;
    probe.checkpoint_base = Nanoseconds{hi};
    try {
      probe.validate();
    } catch (const ConfigError&) {
      throw CalibrationError("target fraction out of reach within search bounds");
    }
    f_hi = fraction_at(hi);
  }
  if (f_hi == 0.0) throw CalibrationError("baseline policy never checkpoints; nothing to calibrate");

  std::int64_t best = std::abs(f_lo - target_fraction) < std::abs(f_hi - target_fraction) ? lo : hi;
  double best_f = best == lo ? f_lo : f_hi;
  while (hi - lo > 1 && std::abs(best_f - target_fraction) > kGoal) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const double f = fraction_at(mid);
    if (std::abs(f - target_fraction) < std::abs(best_f - target_fraction)) {
      best = mid;
      best_f = f;
    }
    (f < target_fraction ? lo : hi) = mid;
  }
  if (std::abs(best_f - target_fraction) > kTolerance) {
    throw CalibrationError(fmt::format("closest baseline fraction {} misses target {}", best_f, target_fraction));
  }
  out.model.checkpoint_base = Nanoseconds{best};
  out.baseline_fraction = best_f;
  return out;
}

// Comparison

Comparison compare_runs(const ExperimentResult& a, const ExperimentResult& b) {
  if (!(a.summary.model == b.summary.model)) {
    throw ConfigError("runs used different workload models and cannot be compared");
  }
  Comparison c;
  const double ra = static_cast<double>(a.summary.total_runtime.count());
  const double rb = static_cast<double>(b.summary.total_runtime.count());
  c.runtime_reduction = ra > 0 ? (ra - rb) / ra : 0.0;
  c.checkpoint_ratio = static_cast<double>(a.summary.total_checkpoint.count()) /
                       static_cast<double>(b.summary.total_checkpoint.count());

  c.fraction_curves_csv = "iteration,elapsed_a_ns,fraction_a,elapsed_b_ns,fraction_b\n";
  const std::size_t n = std::min(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.series[i];
    const auto& y = b.series[i];
    c.fraction_curves_csv += fmt::format("{},{},{:.9f},{},{:.9f}\n", x.iteration, x.elapsed.count(), x.fraction,
                                         y.elapsed.count(), y.fraction);
  }
  return c;
}

}  // namespace calipers
