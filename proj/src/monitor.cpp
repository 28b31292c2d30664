#include "calipers/monitor.hpp"

#include <charconv>

#include <fmt/core.h>

#include "calipers/error.hpp"
#include "calipers/report.hpp"
#include "httplib.h"

namespace calipers {

MonitorEndpoint parse_endpoint(const std::string& listen) {
  MonitorEndpoint ep;
  std::string port_text = listen;
  if (const auto colon = listen.rfind(':'); colon != std::string::npos) {
    if (colon > 0) ep.host = listen.substr(0, colon);
    port_text = listen.substr(colon + 1);
  }
  int port = -1;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw ConfigError(fmt::format("invalid listen address '{}'", listen));
  }
  ep.port = port;
  return ep;
}

MonitorServer::MonitorServer(const TimerDatabase& db, ScheduleLayout layout, MonitorEndpoint endpoint)
    : db_(db), layout_(std::move(layout)), endpoint_(std::move(endpoint)),
      server_(std::make_unique<httplib::Server>()) {
  // Default options include SO_REUSEPORT, which lets a second monitor share
  // the port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->Get("/timers", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(export_snapshot(db_.snapshot(), layout_), "application/json");
  });
  server_->Get("/report", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(render_report(db_.snapshot(), layout_), "text/plain");
  });
  server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(what + "\n", "text/plain");
  });
}

MonitorServer::~MonitorServer() { stop(); }

void MonitorServer::start() {
  if (thread_.joinable()) return;
  if (endpoint_.port == 0) {
    port_ = server_->bind_to_any_port(endpoint_.host);
  } else {
    port_ = server_->bind_to_port(endpoint_.host, endpoint_.port) ? endpoint_.port : -1;
  }
  if (port_ <= 0) {
    throw Error(fmt::format("monitor cannot bind {}:{}", endpoint_.host, endpoint_.port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void MonitorServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

}  // namespace calipers
