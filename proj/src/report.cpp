#include "calipers/report.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include <fmt/core.h>

#include "calipers/error.hpp"
#include "json.hpp"

namespace calipers {

using nlohmann::json;

std::string format_seconds(std::int64_t ns) {
  const bool negative = ns < 0;
  // Units of 10 ns, rounded half up on the magnitude.
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(ns + 1)) + 1 : static_cast<std::uint64_t>(ns);
  const std::uint64_t tens = (magnitude + 5) / 10;
  return fmt::format("{}{}.{:08d}", negative ? "-" : "", tens / 100'000'000, tens % 100'000'000);
}

namespace {

struct Column {
  std::string clock;
  std::size_t value_index;
  ClockUnit unit;
  std::string header;
};

struct Row {
  std::string thorn;
  std::string routine;
  const TimerSnapshotEntry* entry;  // may be null: prints zeros
};

std::vector<Column> columns_of(const TimerSnapshot& snapshot) {
  std::vector<Column> cols;
  for (const auto& c : snapshot.clocks) {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const auto& d = c.values[i];
      cols.push_back({c.clock, i, d.unit,
                      d.name + (d.unit == ClockUnit::seconds ? " [secs]" : " [count]")});
    }
  }
  return cols;
}

std::string cell_text(const Column& col, const TimerSnapshotEntry* entry) {
  std::int64_t v = 0;
  if (entry) {
    const ClockValues* values = find_clock(entry->readings, col.clock);
    if (!values || col.value_index >= values->size()) return {};
    v = (*values)[col.value_index];
  }
  return col.unit == ClockUnit::seconds ? format_seconds(v) : std::to_string(v);
}

std::pair<std::string, std::string> split_timer_name(const std::string& name) {
  const auto pos = name.find(": ");
  if (pos == std::string::npos) return {"", name};
  return {name.substr(0, pos), name.substr(pos + 2)};
}

std::string pad_right(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

std::string pad_left(std::string_view s, std::size_t width) {
  std::string out;
  if (s.size() < width) out.append(width - s.size(), ' ');
  out.append(s);
  return out;
}

}  // namespace

std::string render_report(const TimerSnapshot& snapshot, const ScheduleLayout& layout) {
  const std::vector<Column> cols = columns_of(snapshot);

  // Group rows into sections.  Each section is a list of routine rows plus an
  // optional closing total row.
  struct Section {
    std::vector<Row> rows;
    std::optional<Row> total;
  };
  std::vector<Section> sections;
  std::set<std::string, std::less<>> grouped{std::string(kSimulationTotalTimer)};

  for (const auto& bin : layout) {
    grouped.insert(bin.total_timer);
    for (const auto& r : bin.routines) grouped.insert(r.timer);
    if (bin.routines.empty()) continue;
    Section s;
    for (const auto& r : bin.routines) s.rows.push_back({r.thorn, r.routine, snapshot.find(r.timer)});
    s.total = Row{"", bin.total_timer, snapshot.find(bin.total_timer)};
    sections.push_back(std::move(s));
  }
  Section rest;
  for (const auto& e : snapshot.entries) {
    if (grouped.contains(e.name)) continue;
    auto [thorn, routine] = split_timer_name(e.name);
    rest.rows.push_back({std::move(thorn), std::move(routine), &e});
  }
  if (!rest.rows.empty()) sections.push_back(std::move(rest));
  const Row sim_total{"", std::string(kSimulationTotalTimer), snapshot.find(kSimulationTotalTimer)};

  // Column widths.
  std::size_t thorn_width = std::string_view("Thorn").size();
  std::size_t routine_width = std::string_view("Scheduled routine in time bin").size();
  auto widen = [&](const Row& r) {
    thorn_width = std::max(thorn_width, r.thorn.size());
    routine_width = std::max(routine_width, r.routine.size());
  };
  for (const auto& s : sections) {
    for (const auto& r : s.rows) widen(r);
    if (s.total) widen(*s.total);
  }
  widen(sim_total);
  thorn_width += 3;
  routine_width += 3;

  std::vector<std::size_t> widths;
  for (const auto& c : cols) widths.push_back(c.header.size());
  auto widen_values = [&](const Row& r) {
    for (std::size_t i = 0; i < cols.size(); ++i) widths[i] = std::max(widths[i], cell_text(cols[i], r.entry).size());
  };
  for (const auto& s : sections) {
    for (const auto& r : s.rows) widen_values(r);
    if (s.total) widen_values(*s.total);
  }
  widen_values(sim_total);

  std::size_t line_width = thorn_width + 2 + routine_width;
  for (auto w : widths) line_width += 3 + w;
  const std::string heavy_rule(line_width, '=');
  const std::string light_rule(line_width, '-');

  std::string out;
  auto emit_row = [&](const Row& r) {
    out += pad_right(r.thorn, thorn_width);
    out += "| ";
    out += pad_right(r.routine, routine_width);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out += "| ";
      out += pad_left(cell_text(cols[i], r.entry), widths[i]);
      out += ' ';
    }
    out += '\n';
  };

  out += pad_right("Thorn", thorn_width);
  out += "| ";
  out += pad_right("Scheduled routine in time bin", routine_width);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += "| ";
    out += pad_right(cols[i].header, widths[i]);
    out += ' ';
  }
  out += '\n';
  out += heavy_rule + '\n';

  for (const auto& s : sections) {
    for (const auto& r : s.rows) emit_row(r);
    if (s.total) {
      out += light_rule + '\n';
      emit_row(*s.total);
    }
    out += heavy_rule + '\n';
  }
  emit_row(sim_total);
  out += heavy_rule + '\n';
  return out;
}

// Export / parse

std::string export_snapshot(const TimerSnapshot& snapshot, const ScheduleLayout& layout) {
  json doc;
  doc["taken_at"] = snapshot.taken_at.count();

  json clocks = json::array();
  json descriptors = json::object();
  for (const auto& c : snapshot.clocks) {
    clocks.push_back(c.clock);
    json ds = json::array();
    for (const auto& d : c.values) {
      ds.push_back({{"name", d.name}, {"unit", std::string(to_string(d.unit))},
                    {"resolution", d.resolution_hint}});
    }
    descriptors[c.clock] = std::move(ds);
  }
  doc["clocks"] = std::move(clocks);
  doc["descriptors"] = std::move(descriptors);

  json timers = json::array();
  for (const auto& e : snapshot.entries) {
    json values = json::object();
    for (const auto& r : e.readings) values[r.clock] = r.values;
    timers.push_back({{"name", e.name}, {"running", e.running}, {"values", std::move(values)}});
  }
  doc["timers"] = std::move(timers);

  if (!layout.empty()) {
    json bins = json::array();
    for (const auto& b : layout) {
      json routines = json::array();
      for (const auto& r : b.routines) {
        routines.push_back({{"thorn", r.thorn}, {"routine", r.routine}, {"timer", r.timer}});
      }
      bins.push_back({{"bin", b.bin}, {"label", b.label}, {"total_timer", b.total_timer},
                      {"routines", std::move(routines)}});
    }
    doc["schedule"] = std::move(bins);
  }
  return doc.dump(2) + "\n";
}

ParsedSnapshot parse_snapshot(std::string_view document) {
  ParsedSnapshot out;
  try {
    const json doc = json::parse(document);
    out.snapshot.taken_at = Nanoseconds{doc.at("taken_at").get<std::int64_t>()};

    const json& descriptors = doc.at("descriptors");
    for (const auto& name : doc.at("clocks")) {
      ClockColumn col{name.get<std::string>(), {}};
      for (const auto& d : descriptors.at(col.clock)) {
        const auto unit = d.at("unit").get<std::string>();
        if (unit != "seconds" && unit != "count") throw ConfigError("unknown clock unit '" + unit + "'");
        col.values.push_back({d.at("name").get<std::string>(),
                              unit == "seconds" ? ClockUnit::seconds : ClockUnit::count,
                              d.at("resolution").get<std::int64_t>()});
      }
      out.snapshot.clocks.push_back(std::move(col));
    }

    for (const auto& t : doc.at("timers")) {
      TimerSnapshotEntry e{t.at("name").get<std::string>(), t.at("running").get<bool>(), {}};
      const json& values = t.at("values");
      // Readings follow clock registration order.
      for (const auto& col : out.snapshot.clocks) {
        if (values.contains(col.clock)) {
          e.readings.push_back({col.clock, values.at(col.clock).get<ClockValues>()});
        }
      }
      if (e.readings.size() != values.size()) {
        throw ConfigError("timer '" + e.name + "' references an undeclared clock");
      }
      out.snapshot.entries.push_back(std::move(e));
    }

    if (doc.contains("schedule")) {
      for (const auto& b : doc.at("schedule")) {
        BinLayout bl{b.at("bin").get<std::string>(), b.at("label").get<std::string>(),
                     b.at("total_timer").get<std::string>(), {}};
        for (const auto& r : b.at("routines")) {
          bl.routines.push_back({r.at("thorn").get<std::string>(), r.at("routine").get<std::string>(),
                                 r.at("timer").get<std::string>()});
        }
        out.layout.push_back(std::move(bl));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed snapshot document: ") + e.what());
  }
  return out;
}

// Reporter

Reporter::Reporter(ReportConfig config, std::ostream* out) : config_(std::move(config)), out_(out) {
  if (config_.period_iterations < 1) throw ConfigError("report period must be at least 1 iteration");
  if (!out_) out_ = &std::cout;
}

bool Reporter::periodic_emit(std::int64_t iteration, const TimerSnapshot& snapshot,
                             const ScheduleLayout& layout) {
  if (config_.mode == ReportMode::off) return false;
  if (iteration % config_.period_iterations != 0) return false;

  const std::string text = render_report(snapshot, layout);
  if (config_.to_stdout) {
    *out_ << "Timer report at iteration " << iteration << "\n" << text << std::flush;
  }
  if (config_.logfile) {
    std::ofstream log(*config_.logfile, std::ios::app);
    if (log) log << "Timer report at iteration " << iteration << "\n" << text;
    if (!log) warnings_.push_back(fmt::format("cannot write timer log '{}'", config_.logfile->string()));
  }
  if (config_.export_path) {
    std::ofstream ex(*config_.export_path, std::ios::trunc);
    if (ex) ex << export_snapshot(snapshot, layout);
    if (!ex) warnings_.push_back(fmt::format("cannot write snapshot '{}'", config_.export_path->string()));
  }
  ++emissions_;
  return true;
}

}  // namespace calipers
