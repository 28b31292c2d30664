#include "calipers/clock.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <time.h>

#include <fmt/core.h>

#include "calipers/error.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define CALIPERS_HAVE_CYCLE_COUNTER 1
#elif defined(__aarch64__)
#define CALIPERS_HAVE_CYCLE_COUNTER 1
#endif

namespace calipers {

std::string_view to_string(ClockUnit unit) noexcept {
  switch (unit) {
    case ClockUnit::seconds:
      return "seconds";
    case ClockUnit::count:
      return "count";
  }
  return "unknown";
}

// ClockInstance

ClockInstance::ClockInstance(std::shared_ptr<const ClockBackend> backend)
    : backend_(std::move(backend)) {
  if (!backend_) throw std::invalid_argument("ClockInstance: null backend");
  accumulated_.assign(backend_->descriptors().size(), 0);
  epoch_.assign(accumulated_.size(), 0);
}

ClockValues ClockInstance::sample_now() const {
  ClockValues now(accumulated_.size());
  backend_->sample(now);
  return now;
}

void ClockInstance::start() {
  if (running_) throw StateError(fmt::format("clock '{}' is already running", backend_name()));
  epoch_ = sample_now();
  running_ = true;
}

void ClockInstance::stop() {
  if (!running_) throw StateError(fmt::format("clock '{}' is not running", backend_name()));
  const ClockValues now = sample_now();
  for (std::size_t i = 0; i < accumulated_.size(); ++i) accumulated_[i] += now[i] - epoch_[i];
  running_ = false;
}

ClockValues ClockInstance::get() const {
  if (!running_) return accumulated_;
  ClockValues values = sample_now();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = accumulated_[i] + (values[i] - epoch_[i]);
  return values;
}

void ClockInstance::set(std::span<const std::int64_t> values) {
  if (running_) throw StateError(fmt::format("cannot set running clock '{}'", backend_name()));
  if (values.size() != accumulated_.size()) {
    throw ArityError(fmt::format("clock '{}' has {} values, got {}", backend_name(),
                                 accumulated_.size(), values.size()));
  }
  std::copy(values.begin(), values.end(), accumulated_.begin());
}

void ClockInstance::reset() {
  std::fill(accumulated_.begin(), accumulated_.end(), 0);
  if (running_) epoch_ = sample_now();
}

// ClockRegistry

BackendId ClockRegistry::register_backend(std::shared_ptr<const ClockBackend> backend) {
  if (!backend) throw std::invalid_argument("register_backend: null backend");
  if (backend->name().empty()) throw ConfigError("clock backend name must not be empty");
  if (find(backend->name())) throw DuplicateNameError(backend->name());

  const auto descriptors = backend->descriptors();
  if (descriptors.empty()) {
    throw ConfigError(fmt::format("clock backend '{}' exposes no values", backend->name()));
  }
  std::set<std::string_view> seen;
  for (const auto& d : descriptors) {
    if (d.name.empty() || !seen.insert(d.name).second) {
      throw ConfigError(fmt::format("clock backend '{}' has an empty or repeated value name '{}'",
                                    backend->name(), d.name));
    }
  }

  backends_.push_back(std::move(backend));
  return BackendId{backends_.size() - 1};
}

const ClockBackend& ClockRegistry::backend(BackendId id) const { return *backend_ptr(id); }

std::shared_ptr<const ClockBackend> ClockRegistry::backend_ptr(BackendId id) const {
  if (id.value >= backends_.size()) {
    throw UnknownBackendError(fmt::format("unknown clock backend id {}", id.value));
  }
  return backends_[id.value];
}

std::optional<BackendId> ClockRegistry::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < backends_.size(); ++i) {
    if (backends_[i]->name() == name) return BackendId{i};
  }
  return std::nullopt;
}

std::vector<std::string> ClockRegistry::list_backends() const {
  std::vector<std::string> names;
  names.reserve(backends_.size());
  for (const auto& b : backends_) names.push_back(b->name());
  return names;
}

ClockInstance ClockRegistry::create(BackendId id) const { return ClockInstance(backend_ptr(id)); }

std::vector<ClockInstance> ClockRegistry::create_all() const {
  std::vector<ClockInstance> out;
  out.reserve(backends_.size());
  for (const auto& b : backends_) out.emplace_back(b);
  return out;
}

// VirtualClockController

void VirtualClockController::advance(Nanoseconds step) {
  if (step.count() < 0) throw std::invalid_argument("virtual time cannot move backwards");
  now_ns_.fetch_add(step.count(), std::memory_order_acq_rel);
}

void VirtualClockController::advance_to(Nanoseconds t) {
  const auto current = now_ns_.load(std::memory_order_acquire);
  if (t.count() < current) {
    throw std::invalid_argument(
        fmt::format("virtual time cannot move backwards ({} ns -> {} ns)", current, t.count()));
  }
  now_ns_.store(t.count(), std::memory_order_release);
}

// Built-in backends

namespace {

std::int64_t posix_clock_ns(clockid_t id) {
  timespec ts{};
  ::clock_gettime(id, &ts);
  return static_cast<std::int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec;
}

std::int64_t posix_resolution_ns(clockid_t id) {
  timespec ts{};
  if (::clock_getres(id, &ts) != 0) return 1;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec);
}

class CycleClock final : public ClockBackend {
 public:
  CycleClock() : name_("cycle"), descriptors_{{"cycle", ClockUnit::count, 1}} {}

  const std::string& name() const noexcept override { return name_; }
  std::span<const ClockValueDescriptor> descriptors() const noexcept override {
    return descriptors_;
  }
  void sample(std::span<std::int64_t> out) const override {
#if defined(__x86_64__) || defined(__i386__)
    out[0] = static_cast<std::int64_t>(__rdtsc());
#elif defined(__aarch64__)
    std::uint64_t v;
    asm volatile("mrs %0, cntvct_el0" : "=r"(v));
    out[0] = static_cast<std::int64_t>(v);
#else
    out[0] = 0;
#endif
  }

 private:
  std::string name_;
  std::vector<ClockValueDescriptor> descriptors_;
};

}  // namespace

VirtualWallClock::VirtualWallClock(std::shared_ptr<const VirtualClockController> controller,
                                   std::string name)
    : controller_(std::move(controller)), name_(std::move(name)) {
  if (!controller_) throw std::invalid_argument("VirtualWallClock: null controller");
  descriptors_.push_back({name_, ClockUnit::seconds, 1});
}

void VirtualWallClock::sample(std::span<std::int64_t> out) const {
  out[0] = controller_->now().count();
}

RealWallClock::RealWallClock(std::string name) : name_(std::move(name)) {
  descriptors_.push_back({name_, ClockUnit::seconds, posix_resolution_ns(CLOCK_MONOTONIC)});
}

void RealWallClock::sample(std::span<std::int64_t> out) const {
  out[0] = posix_clock_ns(CLOCK_MONOTONIC);
}

ProcessCpuClock::ProcessCpuClock(std::string name) : name_(std::move(name)) {
  descriptors_.push_back({name_, ClockUnit::seconds, posix_resolution_ns(CLOCK_PROCESS_CPUTIME_ID)});
}

void ProcessCpuClock::sample(std::span<std::int64_t> out) const {
  out[0] = posix_clock_ns(CLOCK_PROCESS_CPUTIME_ID);
}

EventCounterClock::EventCounterClock(std::vector<std::string> event_names, std::string name)
    : name_(std::move(name)),
      counters_(std::make_unique<std::atomic<std::int64_t>[]>(event_names.size())) {
  for (auto& n : event_names) descriptors_.push_back({std::move(n), ClockUnit::count, 1});
}

void EventCounterClock::sample(std::span<std::int64_t> out) const {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    out[i] = counters_[i].load(std::memory_order_acquire);
  }
}

void EventCounterClock::record(std::int64_t n, std::size_t event) {
  if (event >= descriptors_.size()) {
    throw std::out_of_range(fmt::format("event-counter '{}' has no event {}", name_, event));
  }
  if (n < 0) throw std::invalid_argument("event counts are non-negative");
  counters_[event].fetch_add(n, std::memory_order_acq_rel);
}

std::shared_ptr<ClockBackend> make_cycle_clock() {
#ifdef CALIPERS_HAVE_CYCLE_COUNTER
  return std::make_shared<CycleClock>();
#else
  return nullptr;
#endif
}

}  // namespace calipers
