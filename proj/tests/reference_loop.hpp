#pragma once

// Brute-force reference for the checkpointing driver.  Written against the
// rules only: it shares no code with the library besides the standard
// library, and keeps time in plain int64 nanoseconds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace reference {

struct Instance {
  std::int64_t t0 = 0;              // compute per iteration at level 0
  std::int64_t c0 = 0;              // checkpoint cost at level 0
  std::int64_t regrid_every = 1;
  std::int64_t iterations = 0;
  std::int64_t initial_cost = 0;
  bool adaptive = false;
  std::int64_t every = 1;           // fixed mode
  std::int64_t fraction_ppb = 0;    // adaptive mode
  std::optional<std::int64_t> max_interval;
  bool on_initial = false;
  bool on_terminate = false;
};

struct Step {
  std::int64_t iteration = 0;
  std::int64_t now = 0;
  bool checkpoint = false;
  std::string reason;
  std::int64_t cost = 0;
};

struct Outcome {
  std::vector<Step> steps;
  std::int64_t runtime = 0;
  std::int64_t checkpoint_total = 0;
  std::int64_t checkpoints = 0;
};

inline Outcome simulate(const Instance& in) {
  Outcome out;
  std::int64_t t = in.initial_cost;
  std::int64_t spent = 0;
  bool any = false;
  std::int64_t last_start = 0;

  auto boundary = [&](std::int64_t it, bool initial, bool terminal) {
    Step s{it, t, false, "", 0};
    if (terminal && in.on_terminate) {
      s.checkpoint = true;
      s.reason = "terminal";
    } else if (initial) {
      s.checkpoint = in.on_initial;
      s.reason = in.on_initial ? "initial" : "skip_not_due";
    } else if (in.adaptive) {
      const std::int64_t since = t - (any ? last_start : 0);
      // spent / t <= ppb / 1e9, cross-multiplied in 128 bits
      const bool under = static_cast<__int128>(spent) * 1'000'000'000 <=
                         static_cast<__int128>(in.fraction_ppb) * t;
      if (in.max_interval && since >= *in.max_interval) {
        s.checkpoint = true;
        s.reason = "max_interval_forced";
      } else if (under) {
        s.checkpoint = true;
        s.reason = "adaptive_allowed";
      } else {
        s.reason = "skip_fraction_exceeded";
      }
    } else {
      s.checkpoint = it > 0 && it % in.every == 0;
      s.reason = s.checkpoint ? "periodic_due" : "skip_not_due";
    }
    if (s.checkpoint) {
      const std::int64_t level = it / in.regrid_every;
      s.cost = in.c0 * (level + 1);
      any = true;
      last_start = t;
      t += s.cost;
      spent += s.cost;
      ++out.checkpoints;
    }
    out.steps.push_back(s);
  };

  boundary(0, true, false);
  for (std::int64_t it = 1; it <= in.iterations; ++it) {
    std::int64_t compute = in.t0;
    for (std::int64_t l = 0; l < it / in.regrid_every; ++l) compute *= 2;
    t += compute;
    boundary(it, false, it == in.iterations);
  }
  out.runtime = t;
  out.checkpoint_total = spent;
  return out;
}

}  // namespace reference
