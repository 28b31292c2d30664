#include "calipers/checkpoint_file.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <system_error>

#include <boost/crc.hpp>
#include <fmt/core.h>

#include "calipers/error.hpp"

namespace calipers {

namespace {

constexpr std::string_view kMagic = "CALIPCKP";
constexpr std::size_t kHeaderSize = kMagic.size() + 2 * sizeof(std::int64_t);
constexpr std::size_t kTrailerSize = sizeof(std::int64_t);

class Writer {
 public:
  void put(std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int shift = 56; shift >= 0; shift -= 8) bytes_.push_back(static_cast<char>((u >> shift) & 0xff));
  }
  void put(std::string_view s) {
    put(static_cast<std::int64_t>(s.size()));
    bytes_.append(s);
  }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::int64_t get() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u = (u << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
    pos_ += 8;
    return static_cast<std::int64_t>(u);
  }
  std::int64_t get_count() {
    const std::int64_t n = get();
    if (n < 0 || static_cast<std::uint64_t>(n) > bytes_.size() - pos_) {
      throw CorruptCheckpointError(fmt::format("implausible length {} at offset {}", n, pos_ - 8));
    }
    return n;
  }
  std::string get_string() {
    const auto n = static_cast<std::size_t>(get_count());
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CorruptCheckpointError("checkpoint body is truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::int64_t crc_of(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return static_cast<std::int64_t>(crc.checksum());
}

}  // namespace

std::string_view to_string(IterationEvent event) noexcept {
  switch (event) {
    case IterationEvent::none:
      return "none";
    case IterationEvent::checkpoint:
      return "checkpoint";
    case IterationEvent::regrid:
      return "regrid";
  }
  return "unknown";
}

std::string checkpoint_file_name(std::int64_t iteration) {
  return fmt::format("checkpoint.it_{}.chk", iteration);
}

std::string encode_checkpoint(const CheckpointContents& contents) {
  Writer body;
  const SimulationState& s = contents.state;
  body.put(s.iteration);
  body.put(s.refinement_levels);
  body.put(s.grid_points);
  body.put(s.virtual_time.count());
  body.put(static_cast<std::int64_t>(s.last_event));
  body.put(s.accounting.total_checkpoint.count());
  body.put(s.accounting.total_elapsed.count());
  body.put(s.accounting.last_checkpoint_end ? 1 : 0);
  body.put(s.accounting.last_checkpoint_start.value_or(Nanoseconds{0}).count());
  body.put(s.accounting.last_checkpoint_end.value_or(Nanoseconds{0}).count());
  body.put(s.accounting.checkpoints_taken);

  body.put(static_cast<std::int64_t>(contents.timers.size()));
  for (const auto& t : contents.timers) {
    body.put(t.name);
    body.put(static_cast<std::int64_t>(t.readings.size()));
    for (const auto& r : t.readings) {
      body.put(r.clock);
      body.put(static_cast<std::int64_t>(r.values.size()));
      for (auto v : r.values) body.put(v);
    }
  }

  Writer file;
  file.bytes().append(kMagic);
  file.put(kCheckpointFormatVersion);
  file.put(static_cast<std::int64_t>(body.bytes().size()));
  file.bytes().append(body.bytes());
  file.put(crc_of(file.bytes()));
  return std::move(file.bytes());
}

CheckpointContents decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kHeaderSize + kTrailerSize || bytes.substr(0, kMagic.size()) != kMagic) {
    throw CorruptCheckpointError("not a checkpoint file (bad magic or too short)");
  }
  Reader header(bytes.substr(kMagic.size(), 2 * sizeof(std::int64_t)));
  const std::int64_t version = header.get();
  const std::int64_t body_size = header.get();
  if (body_size < 0 || static_cast<std::uint64_t>(body_size) != bytes.size() - kHeaderSize - kTrailerSize) {
    throw CorruptCheckpointError(fmt::format("checkpoint length mismatch: header says {} body bytes, file has {}",
                                             body_size, bytes.size() - kHeaderSize - kTrailerSize));
  }
  const std::string_view covered = bytes.substr(0, bytes.size() - kTrailerSize);
  if (Reader(bytes.substr(covered.size())).get() != crc_of(covered)) {
    throw CorruptCheckpointError("checkpoint checksum mismatch");
  }
  if (version != kCheckpointFormatVersion) {
    throw VersionMismatchError(fmt::format("unsupported checkpoint version {} (expected {})", version,
                                           kCheckpointFormatVersion));
  }

  Reader in(bytes.substr(kHeaderSize, static_cast<std::size_t>(body_size)));
  CheckpointContents out;
  SimulationState& s = out.state;
  s.iteration = in.get();
  s.refinement_levels = in.get();
  s.grid_points = in.get();
  s.virtual_time = Nanoseconds{in.get()};
  const std::int64_t event = in.get();
  if (event < 0 || event > static_cast<std::int64_t>(IterationEvent::regrid)) {
    throw CorruptCheckpointError(fmt::format("unknown iteration event code {}", event));
  }
  s.last_event = static_cast<IterationEvent>(event);
  s.accounting.total_checkpoint = Nanoseconds{in.get()};
  s.accounting.total_elapsed = Nanoseconds{in.get()};
  const bool has_last = in.get() != 0;
  const Nanoseconds last_start{in.get()};
  const Nanoseconds last_end{in.get()};
  if (has_last) {
    s.accounting.last_checkpoint_start = last_start;
    s.accounting.last_checkpoint_end = last_end;
  }
  s.accounting.checkpoints_taken = in.get();

  const std::int64_t timer_count = in.get_count();
  for (std::int64_t i = 0; i < timer_count; ++i) {
    TimerRecord t{in.get_string(), {}};
    const std::int64_t clock_count = in.get_count();
    for (std::int64_t c = 0; c < clock_count; ++c) {
      ClockReading r{in.get_string(), {}};
      const std::int64_t n = in.get_count();
      for (std::int64_t k = 0; k < n; ++k) r.values.push_back(in.get());
      t.readings.push_back(std::move(r));
    }
    out.timers.push_back(std::move(t));
  }
  if (!in.done()) throw CorruptCheckpointError("trailing bytes in checkpoint body");
  return out;
}

void write_checkpoint(const std::filesystem::path& path, const CheckpointContents& contents) {
  const std::string bytes = encode_checkpoint(contents);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointIoError(fmt::format("cannot open '{}' for writing", tmp.string()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointIoError(fmt::format("failed writing '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointIoError(fmt::format("cannot move checkpoint into '{}': {}", path.string(), ec.message()));
}

CheckpointContents read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointIoError(fmt::format("cannot open checkpoint '{}'", path.string()));
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_checkpoint(bytes);
}

}  // namespace calipers
