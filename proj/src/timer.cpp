#include "calipers/timer.hpp"

#include <mutex>

#include <fmt/core.h>

#include "calipers/error.hpp"

namespace calipers {

const ClockValues* find_clock(const TimerReading& reading, std::string_view clock) noexcept {
  for (const auto& r : reading) {
    if (r.clock == clock) return &r.values;
  }
  return nullptr;
}

const TimerSnapshotEntry* TimerSnapshot::find(std::string_view timer_name) const noexcept {
  for (const auto& e : entries) {
    if (e.name == timer_name) return &e;
  }
  return nullptr;
}

TimerDatabase::TimerDatabase(const ClockRegistry& registry,
                             std::shared_ptr<const ClockBackend> timestamp_source)
    : registry_(registry), timestamp_source_(std::move(timestamp_source)) {
  if (!timestamp_source_) timestamp_source_ = std::make_shared<RealWallClock>();
}

TimerDatabase::Timer& TimerDatabase::timer_at(TimerHandle handle) {
  if (handle.value < 0 || static_cast<std::size_t>(handle.value) >= timers_.size()) {
    throw UnknownHandleError(fmt::format("unknown timer handle {}", handle.value));
  }
  return timers_[static_cast<std::size_t>(handle.value)];
}

const TimerDatabase::Timer& TimerDatabase::timer_at(TimerHandle handle) const {
  return const_cast<TimerDatabase*>(this)->timer_at(handle);
}

TimerHandle TimerDatabase::create(std::string_view name) {
  if (name.empty()) throw ConfigError("timer name must not be empty");
  std::unique_lock lock(mutex_);
  for (const auto& t : timers_) {
    if (t.name == name) throw DuplicateNameError(std::string(name));
  }
  timers_.push_back(Timer{std::string(name), registry_.create_all(), false});
  return TimerHandle{static_cast<int>(timers_.size() - 1)};
}

std::optional<TimerHandle> TimerDatabase::find(std::string_view name) const {
  std::shared_lock lock(mutex_);
  for (std::size_t i = 0; i < timers_.size(); ++i) {
    if (timers_[i].name == name) return TimerHandle{static_cast<int>(i)};
  }
  return std::nullopt;
}

void TimerDatabase::start(TimerHandle handle) {
  std::unique_lock lock(mutex_);
  Timer& t = timer_at(handle);
  if (t.running) throw StateError(fmt::format("timer '{}' is already running", t.name));
  for (auto& c : t.clocks) c.start();
  t.running = true;
}

void TimerDatabase::stop(TimerHandle handle) {
  std::unique_lock lock(mutex_);
  Timer& t = timer_at(handle);
  if (!t.running) throw StateError(fmt::format("timer '{}' is not running", t.name));
  for (auto& c : t.clocks) c.stop();
  t.running = false;
}

void TimerDatabase::reset(TimerHandle handle) {
  std::unique_lock lock(mutex_);
  for (auto& c : timer_at(handle).clocks) c.reset();
}

void TimerDatabase::set(TimerHandle handle, std::span<const ClockReading> values) {
  std::unique_lock lock(mutex_);
  Timer& t = timer_at(handle);
  if (t.running) throw StateError(fmt::format("cannot set running timer '{}'", t.name));

  // Validate everything before touching any clock.
  std::vector<ClockInstance*> targets;
  for (const auto& v : values) {
    ClockInstance* target = nullptr;
    for (auto& c : t.clocks) {
      if (c.backend_name() == v.clock) target = &c;
    }
    if (!target) throw UnknownNameError("clock", v.clock);
    if (target->descriptors().size() != v.values.size()) {
      throw ArityError(fmt::format("clock '{}' has {} values, got {}", v.clock,
                                   target->descriptors().size(), v.values.size()));
    }
    targets.push_back(target);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i]->set(values[i].values);
}

bool TimerDatabase::running(TimerHandle handle) const {
  std::shared_lock lock(mutex_);
  return timer_at(handle).running;
}

std::string TimerDatabase::name(TimerHandle handle) const {
  std::shared_lock lock(mutex_);
  return timer_at(handle).name;
}

TimerReading TimerDatabase::read_unlocked(const Timer& timer) {
  TimerReading out;
  out.reserve(timer.clocks.size());
  for (const auto& c : timer.clocks) out.push_back({c.backend_name(), c.get()});
  return out;
}

TimerReading TimerDatabase::read(TimerHandle handle) const {
  std::shared_lock lock(mutex_);
  return read_unlocked(timer_at(handle));
}

TimerSnapshot TimerDatabase::snapshot() const {
  std::shared_lock lock(mutex_);
  TimerSnapshot snap;
  ClockValues stamp(timestamp_source_->descriptors().size());
  timestamp_source_->sample(stamp);
  snap.taken_at = Nanoseconds{stamp.front()};

  for (std::size_t i = 0; i < registry_.size(); ++i) {
    const auto& b = registry_.backend(BackendId{i});
    const auto d = b.descriptors();
    snap.clocks.push_back({b.name(), {d.begin(), d.end()}});
  }
  snap.entries.reserve(timers_.size());
  for (const auto& t : timers_) snap.entries.push_back({t.name, t.running, read_unlocked(t)});
  return snap;
}

std::size_t TimerDatabase::size() const {
  std::shared_lock lock(mutex_);
  return timers_.size();
}

}  // namespace calipers
