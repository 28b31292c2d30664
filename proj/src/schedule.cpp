#include "calipers/schedule.hpp"

#include <set>

#include <fmt/core.h>

#include "calipers/error.hpp"

namespace calipers {

std::vector<std::string> default_bin_names() {
  return {"STARTUP", "INITIAL", "CHECKPOINT_INITIAL", "EVOL", "CHECKPOINT", "ANALYSIS", "TERMINATE"};
}

Scheduler::Scheduler(TimerDatabase& db, std::vector<std::string> bins, std::string bin_label_prefix)
    : db_(db), bin_names_(std::move(bins)) {
  std::set<std::string_view> seen;
  for (const auto& name : bin_names_) {
    if (name.empty()) throw ConfigError("schedule bin name must not be empty");
    if (!seen.insert(name).second) throw DuplicateNameError(name);
  }
  for (const auto& name : bin_names_) {
    std::string label = bin_label_prefix + name;
    const TimerHandle total = db_.create("Total time for " + label);
    bins_.push_back(Bin{std::move(label), total, {}});
  }
  simulation_total_ = db_.create(kSimulationTotalTimer);
}

std::size_t Scheduler::bin_index(std::string_view bin) const {
  for (std::size_t i = 0; i < bin_names_.size(); ++i) {
    if (bin_names_[i] == bin) return i;
  }
  throw UnknownNameError("schedule bin", std::string(bin));
}

RoutineId Scheduler::register_routine(std::string_view bin, std::string_view thorn,
                                      std::string_view routine_name, RoutineBody body) {
  const std::size_t b = bin_index(bin);
  for (const auto& r : bins_[b].routines) {
    if (r.thorn == thorn && r.routine_name == routine_name) {
      throw DuplicateNameError(fmt::format("{}: {}", thorn, routine_name));
    }
  }
  const TimerHandle timer = db_.create(fmt::format("{}: {}", thorn, routine_name));
  bins_[b].routines.push_back(
      ScheduledRoutine{std::string(thorn), std::string(routine_name), std::move(body), timer});
  return RoutineId{b, bins_[b].routines.size() - 1};
}

BinExecutionRecord Scheduler::run_bin(std::string_view bin, std::int64_t iteration) {
  const std::size_t b = bin_index(bin);
  BinExecutionRecord record{bin_names_[b], iteration, 0};
  const ScheduleContext ctx{bin_names_[b], iteration};

  ScopedTimer bin_timer(db_, bins_[b].total);
  for (const auto& r : bins_[b].routines) {
    ScopedTimer routine_timer(db_, r.timer);
    if (r.body) r.body(ctx);
    ++record.routines_run;
  }
  return record;
}

void Scheduler::begin_simulation() { db_.start(simulation_total_); }

void Scheduler::end_simulation() { db_.stop(simulation_total_); }

TimerHandle Scheduler::bin_total_timer(std::string_view bin) const {
  return bins_[bin_index(bin)].total;
}

TimerHandle Scheduler::routine_timer(RoutineId id) const {
  if (id.bin >= bins_.size() || id.index >= bins_[id.bin].routines.size()) {
    throw UnknownHandleError(fmt::format("unknown routine id {}/{}", id.bin, id.index));
  }
  return bins_[id.bin].routines[id.index].timer;
}

ScheduleLayout Scheduler::layout() const {
  ScheduleLayout out;
  for (std::size_t b = 0; b < bins_.size(); ++b) {
    BinLayout bl{bin_names_[b], bins_[b].label, db_.name(bins_[b].total), {}};
    for (const auto& r : bins_[b].routines) {
      bl.routines.push_back({r.thorn, r.routine_name, db_.name(r.timer)});
    }
    out.push_back(std::move(bl));
  }
  return out;
}

}  // namespace calipers
