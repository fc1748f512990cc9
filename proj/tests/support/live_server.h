#pragma once

// Runs the HTTP service on an ephemeral localhost port for the lifetime of
// the object.

#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "embaudit/service/server.h"
#include "httplib.h"

namespace testing_support {

class LiveServer {
 public:
  explicit LiveServer(std::shared_ptr<embaudit::service::ServerState> state)
      : state_(std::move(state)), server_(state_) {
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind a local port");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  int port() const { return port_; }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }
  const embaudit::service::ServerState& state() const { return *state_; }

 private:
  std::shared_ptr<embaudit::service::ServerState> state_;
  embaudit::service::Server server_;
  int port_ = -1;
  std::thread thread_;
};

inline std::string query_string(const embaudit::service::Params& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    out += out.empty() ? "?" : "&";
    out += k + "=" + httplib::detail::encode_query_param(v);
  }
  return out;
}

}  // namespace testing_support
