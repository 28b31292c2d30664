#pragma once

#include <memory>
#include <string>
#include <thread>

#include "calipers/schedule.hpp"
#include "calipers/timer.hpp"

namespace httplib {
class Server;
}

namespace calipers {

struct MonitorEndpoint {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
};

/// Parses "host:port" (or ":port", or "port").  Throws ConfigError.
MonitorEndpoint parse_endpoint(const std::string& listen);

/// Read-only HTTP view of a timer database.
///   GET /timers  export document of a snapshot taken at request time
///   GET /report  rendered text report
/// Only ever calls TimerDatabase::snapshot().
class MonitorServer {
 public:
  MonitorServer(const TimerDatabase& db, ScheduleLayout layout, MonitorEndpoint endpoint);
  ~MonitorServer();

  MonitorServer(const MonitorServer&) = delete;
  MonitorServer& operator=(const MonitorServer&) = delete;

  /// Binds and starts serving in a background thread.  Throws Error if the
  /// address cannot be bound.
  void start();
  void stop();

  int port() const noexcept { return port_; }
  const std::string& host() const noexcept { return endpoint_.host; }

 private:
  const TimerDatabase& db_;
  ScheduleLayout layout_;
  MonitorEndpoint endpoint_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace calipers
