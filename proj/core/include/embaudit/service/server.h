#pragma once

#include <memory>
#include <string>

#include "embaudit/service/protocol.h"

namespace embaudit::service {

// JSON-over-HTTP front end. Routes:
//   GET  /api/meta
//   GET  /api/query   a b c algo mode [topn delta epsilon cosmul cutoff rules]
//   GET  /api/rank    ... + term
//   GET  /api/pairs   a c [delta limit cutoff rules]
//   POST /api/sweep   JSON body {a, b, c, mode, deltas, cutoffs, shape_rules}
//   GET  /api/vocab   token [cutoff rules]
class Server {
 public:
  explicit Server(std::shared_ptr<const ServerState> state);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Returns the bound port, or -1 on failure.
  int bind_to_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool listen_after_bind();
  void stop();
  bool is_running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace embaudit::service
