// Acceptance suite.  Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>

#include <fmt/core.h>

#include "calipers/experiment.hpp"
#include "calipers/report.hpp"
#include "calipers/schedule.hpp"
#include "calipers/timer.hpp"
#include "reference_loop.hpp"

using namespace calipers;
using namespace std::chrono_literals;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and thresholds.
constexpr int kRandomConfigs = 600;  // 500 with a finite interval, 100 without
constexpr int kFiniteIntervalConfigs = 500;
constexpr double kCriterion1Seconds = 30.0;
constexpr double kCalibrationTarget = 0.19;
constexpr double kCalibrationTolerance = 0.01;
constexpr std::int64_t kBaselineEvery = 512;
constexpr std::int64_t kFractionPpb = 50'000'000;  // 0.05
constexpr double kReductionLow = 0.10;
constexpr double kReductionHigh = 0.20;
constexpr double kExperimentSeconds = 10.0;
constexpr std::int64_t kIntervalMultiple = 16;  // of the early baseline spacing
constexpr double kMinSparsity = 3.0;
constexpr double kMinCheckpointRatio = 3.0;
constexpr double kMinIntervalReduction = 0.10;
constexpr int kOracleInstances = 200;
constexpr double kSteadySpacing = 40.0;  // c0 / max_fraction for c0 = 2 s, f = 0.05
constexpr double kSpacingTolerance = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double secs(Nanoseconds ns) { return static_cast<double>(ns.count()) / 1e9; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const Outcome& o) {
  fmt::print("criterion {}: {} - {}: {}\n", number, o.pass ? "PASS" : "FAIL", title, o.detail);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

bool exact_ratio_at_most(Nanoseconds part, Nanoseconds whole, std::int64_t ppb) {
  return static_cast<__int128>(part.count()) * 1'000'000'000 <= static_cast<__int128>(ppb) * whole.count();
}

// Randomized workload/policy configurations (criteria 1 and 2).

struct RandomConfig {
  WorkloadModel model;
  CheckpointPolicy policy;
};

RandomConfig random_config(std::mt19937_64& rng, bool finite_interval) {
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  RandomConfig c;
  WorkloadModel& m = c.model;
  m.total_iterations = uniform(100, 2000);
  m.regrid_every = uniform(std::max<std::int64_t>(1, m.total_iterations / 6), m.total_iterations);
  m.compute_unit = Nanoseconds{uniform(1'000'000, 100'000'000)};
  m.checkpoint_base = m.compute_unit * uniform(1, 500);
  m.initial_data_cost = Nanoseconds{uniform(0, 1) * uniform(0, 5'000'000'000)};

  std::optional<Nanoseconds> interval;
  if (finite_interval) {
    // A single write longer than the interval would make the guarantee
    // physically impossible, so the interval is at least the largest write.
    const Nanoseconds largest = m.checkpoint_cost(m.total_iterations);
    interval = largest + m.compute_unit * uniform(0, 2000);
  }
  c.policy = CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(uniform(10'000'000, 500'000'000)), interval);
  c.policy.checkpoint_on_initial = uniform(0, 1) == 1;
  c.policy.checkpoint_on_terminate = uniform(0, 1) == 1;
  return c;
}

struct RandomSuite {
  std::vector<RandomConfig> configs;
  std::vector<ExperimentResult> results;
  double seconds = 0.0;
};

RandomSuite run_random_suite() {
  RandomSuite suite;
  std::mt19937_64 rng(20070924);
  const auto start = Clock::now();
  for (int i = 0; i < kRandomConfigs; ++i) {
    suite.configs.push_back(random_config(rng, i < kFiniteIntervalConfigs));
    suite.results.push_back(run_experiment(suite.configs.back().model, suite.configs.back().policy));
  }
  suite.seconds = seconds_since(start);
  return suite;
}

Outcome criterion1(const RandomSuite& suite) {
  std::int64_t allowed = 0;
  std::int64_t violations = 0;
  std::int64_t above_after = 0;
  for (std::size_t i = 0; i < suite.results.size(); ++i) {
    const std::int64_t ppb = suite.configs[i].policy.max_fraction.ppb();
    for (const auto& d : suite.results[i].decisions) {
      if (d.decision.reason != DecisionReason::adaptive_allowed) continue;
      ++allowed;
      if (!exact_ratio_at_most(d.before.total_checkpoint, d.now, ppb)) ++violations;
      if (!exact_ratio_at_most(d.before.total_checkpoint + d.cost, d.now + d.cost, ppb)) ++above_after;
    }
  }
  const bool pass = violations == 0 && allowed > 0 && suite.seconds < kCriterion1Seconds &&
                    suite.results.size() >= 500;
  return {pass, fmt::format("{} configs, {} adaptive_allowed grants, {} with fraction-before > bound, "
                            "{} grants ended above the bound (allowed by the weak bound), {:.2f} s",
                            suite.results.size(), allowed, violations, above_after, suite.seconds)};
}

Outcome criterion2(const RandomSuite& suite) {
  std::int64_t gaps = 0;
  std::int64_t violations = 0;
  std::int64_t forced = 0;
  std::string first_violation;
  int finite = 0;
  for (std::size_t i = 0; i < suite.results.size(); ++i) {
    const auto& policy = suite.configs[i].policy;
    if (!policy.max_interval) continue;
    ++finite;
    const auto& model = suite.configs[i].model;
    std::optional<Nanoseconds> previous_start;
    for (const auto& d : suite.results[i].decisions) {
      if (!d.decision.checkpoint()) continue;
      if (d.decision.reason == DecisionReason::max_interval_forced) ++forced;
      if (previous_start) {
        ++gaps;
        // One iteration's compute: the iteration whose boundary granted it.
        const Nanoseconds bound = *policy.max_interval + model.compute_cost(d.iteration);
        if (d.now - *previous_start > bound) {
          if (violations++ == 0) {
            first_violation = fmt::format(" (config {}, iteration {}: gap {} ns > {} ns)", i, d.iteration,
                                          (d.now - *previous_start).count(), bound.count());
          }
        }
      }
      previous_start = d.now;
    }
  }
  const bool pass = violations == 0 && finite >= 500 && gaps > 0 && forced > 0;
  return {pass, fmt::format("{} configs with finite interval, {} consecutive-start gaps, {} forced checkpoints, "
                            "{} gaps over max_interval + one iteration{}",
                            finite, gaps, forced, violations, first_violation)};
}

// Calibrated reference model (criteria 3 and 4).

struct Calibrated {
  WorkloadModel model;
  ExperimentResult baseline;
  double seconds = 0.0;
};

Calibrated calibrated_reference() {
  const auto start = Clock::now();
  const auto baseline_policy = CheckpointPolicy::fixed_interval(kBaselineEvery);
  const CalibrationResult cal = calibrate(reference_model(), kCalibrationTarget, baseline_policy);
  Calibrated c{cal.model, run_experiment(cal.model, baseline_policy), 0.0};
  c.seconds = seconds_since(start);
  return c;
}

Outcome criterion3(const Calibrated& cal) {
  const auto start = Clock::now();
  const auto adaptive =
      run_experiment(cal.model, CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(kFractionPpb)));
  const double seconds = cal.seconds + seconds_since(start);
  const Comparison cmp = compare_runs(cal.baseline, adaptive);

  const double base_fraction = cal.baseline.summary.final_fraction;
  const bool calibrated = std::abs(base_fraction - kCalibrationTarget) <= kCalibrationTolerance;
  const bool a_ok = exact_ratio_at_most(adaptive.summary.total_checkpoint, adaptive.summary.total_runtime, kFractionPpb);
  const bool b_ok = cmp.runtime_reduction >= kReductionLow && cmp.runtime_reduction <= kReductionHigh;
  const bool fast = seconds < kExperimentSeconds;
  return {calibrated && a_ok && b_ok && fast,
          fmt::format("baseline fraction {:.4f} (c0/t0 = {:.1f}, runtime {:.1f} s, checkpoint {:.1f} s); "
                      "(a) adaptive final fraction {:.4f} {} 0.05 [{}]; "
                      "(b) runtime reduction {:.1f}% [{}]; {} checkpoints vs {}; {:.2f} s",
                      base_fraction,
                      static_cast<double>(cal.model.checkpoint_base.count()) /
                          static_cast<double>(cal.model.compute_unit.count()),
                      secs(cal.baseline.summary.total_runtime), secs(cal.baseline.summary.total_checkpoint),
                      adaptive.summary.final_fraction, a_ok ? "<=" : ">", a_ok ? "ok" : "fails",
                      100.0 * cmp.runtime_reduction, b_ok ? "ok" : "fails", adaptive.summary.checkpoints_taken,
                      cal.baseline.summary.checkpoints_taken, seconds)};
}

// Mean start-to-start spacing of checkpoints whose start lies in [from, to).
std::optional<double> mean_spacing(const ExperimentResult& r, std::int64_t from, std::int64_t to) {
  std::vector<Nanoseconds> starts;
  for (const auto& d : r.decisions) {
    if (d.decision.checkpoint() && d.iteration >= from && d.iteration < to) starts.push_back(d.now);
  }
  if (starts.size() < 2) return std::nullopt;
  return secs(starts.back() - starts.front()) / static_cast<double>(starts.size() - 1);
}

Outcome criterion4(const Calibrated& cal) {
  const auto start = Clock::now();
  const WorkloadModel& m = cal.model;
  const Nanoseconds early_baseline_spacing = m.compute_cost(1) * kBaselineEvery + m.checkpoint_cost(1);
  const Nanoseconds interval = early_baseline_spacing * kIntervalMultiple;
  const auto adaptive =
      run_experiment(m, CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(kFractionPpb), interval));
  const double seconds = cal.seconds + seconds_since(start);
  const Comparison cmp = compare_runs(cal.baseline, adaptive);

  // Early phase: before the first regrid.
  const auto base_early = mean_spacing(cal.baseline, 1, m.regrid_every);
  const auto adapt_early = mean_spacing(adaptive, 1, m.regrid_every);
  const double sparsity = base_early && adapt_early ? *adapt_early / *base_early : 0.0;
  std::int64_t forced = 0;
  for (const auto& d : adaptive.decisions) forced += d.decision.reason == DecisionReason::max_interval_forced;

  const bool pass = sparsity >= kMinSparsity && cmp.checkpoint_ratio >= kMinCheckpointRatio &&
                    cmp.runtime_reduction >= kMinIntervalReduction && forced > 0 && seconds < kExperimentSeconds;
  return {pass, fmt::format("max_interval {:.1f} s ({}x early baseline spacing {:.1f} s); early spacing {:.1f} s vs "
                            "{:.1f} s ({:.2f}x sparser); checkpoint time {:.1f} s -> {:.1f} s (ratio {:.2f}); "
                            "runtime reduction {:.1f}%; {} forced; {:.2f} s",
                            secs(interval), kIntervalMultiple, secs(early_baseline_spacing), adapt_early.value_or(0),
                            base_early.value_or(0), sparsity, secs(cal.baseline.summary.total_checkpoint),
                            secs(adaptive.summary.total_checkpoint), cmp.checkpoint_ratio,
                            100.0 * cmp.runtime_reduction, forced, seconds)};
}

// Criterion 5: report golden test through the real timer path.

Outcome criterion5() {
  auto wall = std::make_shared<VirtualClockController>();
  auto cpu = std::make_shared<VirtualClockController>();
  ClockRegistry registry;
  const BackendId w = registry.register_backend(std::make_shared<VirtualWallClock>(wall, "gettimeofday"));
  registry.register_backend(std::make_shared<VirtualWallClock>(cpu, "getrusage"));
  TimerDatabase db(registry, registry.backend_ptr(w));
  Scheduler scheduler(db);
  const RoutineId ckpt = scheduler.register_routine("CHECKPOINT", "CarpetIOHDF5", "Evolution checkpoint routine", {});
  const TimerHandle startup = db.create("AdaptCheck: Adaptive checkpointing startup");
  const TimerHandle slicings = db.create("BSSN_MoL: Register provided slicings");

  auto set = [&](TimerHandle h, std::int64_t a, std::int64_t b) {
    db.set(h, std::vector<ClockReading>{{"gettimeofday", {a}}, {"getrusage", {b}}});
  };
  set(scheduler.routine_timer(ckpt), 79'763'280'000, 13'666'922'000);
  set(scheduler.bin_total_timer("CHECKPOINT"), 79'763'280'000, 13'666'922'000);
  set(startup, 13'000, 0);
  set(slicings, 7'000, 0);
  set(scheduler.simulation_total_timer(), 1'417'137'309'000, 1'305'433'544'000);

  const std::string text = render_report(db.snapshot(), scheduler.layout());
  const std::string row =
      "CarpetIOHDF5   | Evolution checkpoint routine     |         79.76328000 |      13.66692200 \n";
  const std::string bin =
      "               | Total time for CCTK_CHECKPOINT   |         79.76328000 |      13.66692200 \n";
  const bool has_row = text.find(row) != std::string::npos;
  const bool has_bin = text.find(bin) != std::string::npos;
  const bool has_total = text.find("| Total time for simulation        |       1417.13730900 |    1305.43354400 \n") !=
                         std::string::npos;
  return {has_row && has_bin && has_total,
          fmt::format("checkpoint row {}, bin total line {}, simulation total {}", has_row ? "exact" : "MISSING",
                      has_bin ? "exact" : "MISSING", has_total ? "exact" : "MISSING")};
}

// Criterion 6: restart equivalence.

Outcome criterion6(const Calibrated& cal) {
  const fs::path dir = fs::temp_directory_path() / "calipers_acceptance_restart";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const WorkloadModel& m = cal.model;
  const Nanoseconds interval = (m.compute_cost(1) * kBaselineEvery + m.checkpoint_cost(1)) * kIntervalMultiple;
  const std::vector<std::pair<std::string, CheckpointPolicy>> policies{
      {"fixed", CheckpointPolicy::fixed_interval(kBaselineEvery)},
      {"adaptive", CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(kFractionPpb), interval)},
  };

  int cases = 0;
  int identical = 0;
  std::string mismatch;
  for (const auto& [name, policy] : policies) {
    const ExperimentResult full = run_experiment(m, policy);
    for (std::int64_t k : {std::int64_t{1}, m.regrid_every, m.regrid_every + 1}) {
      ++cases;
      const fs::path file = dir / fmt::format("{}-{}", name, checkpoint_file_name(k));
      RunOptions dump;
      dump.state_dump_at = k;
      dump.state_dump_path = file;
      const ExperimentResult first_leg = run_experiment(m, policy, dump);
      const ExperimentResult resumed = restart_experiment(read_checkpoint(file), m, policy);

      const std::vector<SeriesRow> tail(full.series.begin() + (k - 1), full.series.end());
      std::vector<DecisionRecord> later;
      for (const auto& d : full.decisions) {
        if (d.iteration > k) later.push_back(d);
      }
      const bool same = series_csv(resumed.series) == series_csv(tail) && resumed.final_state == full.final_state &&
                        resumed.decisions == later && resumed.summary == full.summary &&
                        first_leg.decisions == full.decisions &&
                        export_snapshot(resumed.final_timers) == export_snapshot(full.final_timers);
      if (same) {
        ++identical;
      } else if (mismatch.empty()) {
        mismatch = fmt::format("; first mismatch: {} policy, k = {}", name, k);
      }
    }
  }
  fs::remove_all(dir);
  return {identical == cases,
          fmt::format("{}/{} restarts (k in {{1, {}, {}}}, fixed and adaptive) byte-identical in series, state, "
                      "decisions and timers{}",
                      identical, cases, m.regrid_every, m.regrid_every + 1, mismatch)};
}

// Criterion 7: oracle equivalence against the brute-force loop.

Outcome criterion7() {
  std::mt19937_64 rng(1905);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  int matched = 0;
  std::int64_t decisions = 0;
  std::string mismatch;
  for (int i = 0; i < kOracleInstances; ++i) {
    reference::Instance in;
    in.iterations = uniform(1, 1000);
    in.regrid_every = uniform(std::max<std::int64_t>(1, in.iterations / 8), in.iterations + 1);
    in.t0 = uniform(1, 50'000'000);
    in.c0 = in.t0 * uniform(0, 300) + uniform(1, 1000);
    in.initial_cost = uniform(0, 1) * uniform(0, 1'000'000'000);
    in.adaptive = uniform(0, 3) != 0;
    in.every = uniform(1, 100);
    in.fraction_ppb = uniform(1'000'000, 1'000'000'000);
    if (uniform(0, 1)) in.max_interval = uniform(1, 200) * in.t0;
    in.on_initial = uniform(0, 1) == 1;
    in.on_terminate = uniform(0, 1) == 1;

    WorkloadModel m;
    m.compute_unit = Nanoseconds{in.t0};
    m.checkpoint_base = Nanoseconds{in.c0};
    m.regrid_every = in.regrid_every;
    m.total_iterations = in.iterations;
    m.initial_data_cost = Nanoseconds{in.initial_cost};
    CheckpointPolicy p =
        in.adaptive ? CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(in.fraction_ppb),
                                                 in.max_interval ? std::optional<Nanoseconds>(Nanoseconds{*in.max_interval})
                                                                 : std::nullopt)
                    : CheckpointPolicy::fixed_interval(in.every);
    p.checkpoint_on_initial = in.on_initial;
    p.checkpoint_on_terminate = in.on_terminate;

    const reference::Outcome want = reference::simulate(in);
    const ExperimentResult got = run_experiment(m, p);
    bool same = got.decisions.size() == want.steps.size() && got.summary.total_runtime.count() == want.runtime &&
                got.summary.total_checkpoint.count() == want.checkpoint_total &&
                got.summary.checkpoints_taken == want.checkpoints;
    for (std::size_t s = 0; same && s < want.steps.size(); ++s) {
      const auto& g = got.decisions[s];
      const auto& w = want.steps[s];
      same = g.iteration == w.iteration && g.now.count() == w.now && g.decision.checkpoint() == w.checkpoint &&
             to_string(g.decision.reason) == w.reason && g.cost.count() == w.cost;
    }
    decisions += static_cast<std::int64_t>(want.steps.size());
    if (same) {
      ++matched;
    } else if (mismatch.empty()) {
      mismatch = fmt::format("; first mismatch at instance {}", i);
    }
  }
  return {matched == kOracleInstances,
          fmt::format("{}/{} instances (<= 1000 iterations, {} decisions) identical to the reference loop{}", matched,
                      kOracleInstances, decisions, mismatch)};
}

// Criterion 8: clock/timer invariants under the virtual clock.

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::int64_t failures_additivity = 0, failures_reset = 0, failures_independence = 0, failures_nesting = 0,
               failures_snapshot = 0, failures_roundtrip = 0;
  constexpr int kPrograms = 200;
  for (int trial = 0; trial < kPrograms; ++trial) {
    auto controller = std::make_shared<VirtualClockController>();
    auto events = std::make_shared<EventCounterClock>();
    ClockRegistry registry;
    const BackendId wall = registry.register_backend(std::make_shared<VirtualWallClock>(controller));
    registry.register_backend(events);
    TimerDatabase db(registry, registry.backend_ptr(wall));

    // Clock instances from one backend are independent.
    ClockInstance a = registry.create(wall);
    ClockInstance b = registry.create(wall);
    a.start();
    controller->advance(Nanoseconds{static_cast<std::int64_t>(rng() % 1'000'000)});
    a.stop();
    if (b.get() != ClockValues{0}) ++failures_independence;

    constexpr int kDepth = 5;
    std::vector<TimerHandle> nest;
    for (int i = 0; i < kDepth; ++i) nest.push_back(db.create(fmt::format("nest {}", i)));
    const TimerHandle idle = db.create("idle");
    std::vector<std::int64_t> expected_wall(kDepth, 0), expected_events(kDepth, 0);
    int depth = 0;

    for (int step = 0; step < 300; ++step) {
      switch (rng() % 5) {
        case 0:
          if (depth < kDepth) db.start(nest[static_cast<std::size_t>(depth++)]);
          break;
        case 1:
          if (depth > 0) db.stop(nest[static_cast<std::size_t>(--depth)]);
          break;
        case 2: {
          const auto dt = static_cast<std::int64_t>(rng() % 1'000'000'000);
          controller->advance(Nanoseconds{dt});
          for (int i = 0; i < depth; ++i) expected_wall[static_cast<std::size_t>(i)] += dt;
          break;
        }
        case 3: {
          const auto n = static_cast<std::int64_t>(rng() % 10);
          events->record(n);
          for (int i = 0; i < depth; ++i) expected_events[static_cast<std::size_t>(i)] += n;
          break;
        }
        default: {
          const TimerSnapshot snap = db.snapshot();
          for (std::size_t i = 0; i < nest.size(); ++i) {
            if (snap.entries[i].readings != db.read(nest[i])) ++failures_snapshot;
          }
          break;
        }
      }
      for (std::size_t i = 0; i < nest.size(); ++i) {
        const TimerReading r = db.read(nest[i]);
        if (find_clock(r, "virtual-wall")->front() != expected_wall[i] ||
            find_clock(r, "event-counter")->front() != expected_events[i]) {
          ++failures_additivity;
        }
        if (i > 0 && find_clock(r, "virtual-wall")->front() >
                         find_clock(db.read(nest[i - 1]), "virtual-wall")->front()) {
          ++failures_nesting;
        }
      }
      for (const auto& r : db.read(idle)) {
        if (r.values != ClockValues{0}) ++failures_independence;
      }
    }
    while (depth > 0) db.stop(nest[static_cast<std::size_t>(--depth)]);

    // set/read round trip and reset to zero.
    const TimerSnapshot before = db.snapshot();
    for (std::size_t i = 0; i < nest.size(); ++i) {
      db.reset(nest[i]);
      for (const auto& r : db.read(nest[i])) {
        for (auto v : r.values) failures_reset += v != 0;
      }
      db.set(nest[i], before.entries[i].readings);
      if (db.read(nest[i]) != before.entries[i].readings) ++failures_roundtrip;
    }
  }

  // Snapshot consistency under a concurrent reader.
  {
    auto controller = std::make_shared<VirtualClockController>();
    ClockRegistry registry;
    const BackendId wall = registry.register_backend(std::make_shared<VirtualWallClock>(controller));
    TimerDatabase db(registry, registry.backend_ptr(wall));
    const TimerHandle x = db.create("x");
    const TimerHandle y = db.create("y");
    std::atomic<bool> done{false};
    std::thread reader([&] {
      while (!done.load()) {
        const TimerSnapshot s = db.snapshot();
        // y starts after and stops before x, so y <= x in every consistent view.
        if (s.entries[1].readings[0].values[0] > s.entries[0].readings[0].values[0]) ++failures_snapshot;
      }
    });
    for (int i = 0; i < 5000; ++i) {
      db.start(x);
      db.start(y);
      controller->advance(1ms);
      db.stop(y);
      db.stop(x);
    }
    done = true;
    reader.join();
  }

  const std::int64_t total = failures_additivity + failures_reset + failures_independence + failures_nesting +
                             failures_snapshot + failures_roundtrip;
  return {total == 0,
          fmt::format("{} random programs; violations: additivity {}, reset {}, independence {}, nesting {}, "
                      "snapshot {}, set/read {}",
                      kPrograms, failures_additivity, failures_reset, failures_independence, failures_nesting,
                      failures_snapshot, failures_roundtrip)};
}

// Criterion 9: steady-state spacing on the constant model.

Outcome criterion9() {
  constexpr std::int64_t kIterations = 20'000;
  const WorkloadModel m = constant_model(1s, 2s, kIterations);
  const ExperimentResult r = run_experiment(m, CheckpointPolicy::adaptive(PartsPerBillion::from_ppb(kFractionPpb)));

  std::vector<Nanoseconds> starts;
  for (const auto& d : r.decisions) {
    if (d.decision.checkpoint()) starts.push_back(d.now);
  }
  // Asymptotic regime: the second half of the checkpoints.
  const std::size_t half = starts.size() / 2;
  double worst = 0.0;
  for (std::size_t i = half + 1; i < starts.size(); ++i) {
    worst = std::max(worst, std::abs(secs(starts[i] - starts[i - 1]) - kSteadySpacing));
  }
  const double mean = secs(starts.back() - starts[half]) / static_cast<double>(starts.size() - 1 - half);

  // Brute-force oracle on the same instance.
  reference::Instance in;
  in.t0 = 1'000'000'000;
  in.c0 = 2'000'000'000;
  in.regrid_every = kIterations + 1;
  in.iterations = kIterations;
  in.adaptive = true;
  in.fraction_ppb = kFractionPpb;
  std::vector<std::int64_t> oracle_starts;
  for (const auto& s : reference::simulate(in).steps) {
    if (s.checkpoint) oracle_starts.push_back(s.now);
  }
  const std::size_t ohalf = oracle_starts.size() / 2;
  const double oracle_mean = static_cast<double>(oracle_starts.back() - oracle_starts[ohalf]) / 1e9 /
                             static_cast<double>(oracle_starts.size() - 1 - ohalf);

  const bool pass = starts.size() > 10 && std::abs(mean - kSteadySpacing) <= kSpacingTolerance &&
                    worst <= kSpacingTolerance && std::abs(oracle_mean - mean) <= 1e-9;
  return {pass, fmt::format("{} checkpoints; mean spacing over the second half {:.4f} s (oracle {:.4f} s, "
                            "prediction c0/f = {:.1f} s); largest deviation of a single gap {:.4f} s",
                            starts.size(), mean, oracle_mean, kSteadySpacing, worst)};
}

}  // namespace

int main() {
  fmt::print("acceptance suite\n");
  const RandomSuite suite = run_random_suite();
  report(1, "weak bound", criterion1(suite));
  report(2, "regularity guarantee", criterion2(suite));

  const Calibrated cal = calibrated_reference();
  report(3, "calibrated reproduction", criterion3(cal));
  report(4, "interval-bound experiment", criterion4(cal));
  report(5, "report golden test", criterion5());
  report(6, "restart equivalence", criterion6(cal));
  report(7, "oracle equivalence", criterion7());
  report(8, "clock/timer invariants", criterion8());
  report(9, "steady-state spacing", criterion9());

  fmt::print("{} of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
