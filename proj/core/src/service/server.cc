#include "embaudit/service/server.h"

#include <functional>

#include "httplib.h"

namespace embaudit::service {

namespace {

constexpr const char* kJson = "application/json";

Params to_params(const httplib::Request& req) {
  Params params;
  for (const auto& [key, value] : req.params) params[key] = value;
  return params;
}

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

// Runs a handler and turns every failure into a JSON error reply.
void guarded(httplib::Response& res,
             const std::function<nlohmann::json()>& handler) {
  try {
    reply(res, 200, handler());
  } catch (const std::exception& e) {
    const ErrorReply err = error_reply(e);
    reply(res, err.http_status, err.body);
  }
}

}  // namespace

struct Server::Impl {
  std::shared_ptr<const ServerState> state;
  httplib::Server http;
};

Server::Server(std::shared_ptr<const ServerState> state)
    : impl_(std::make_unique<Impl>()) {
  impl_->state = std::move(state);
  const ServerState& s = *impl_->state;
  auto& http = impl_->http;

  http.Get("/api/meta", [&s](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { return meta_json(s); });
  });
  http.Get("/api/query",
           [&s](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] { return query_json(s, to_params(req)); });
           });
  http.Get("/api/rank",
           [&s](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] { return rank_json(s, to_params(req)); });
           });
  http.Get("/api/pairs",
           [&s](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] { return pairs_json(s, to_params(req)); });
           });
  http.Get("/api/vocab",
           [&s](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] { return vocab_json(s, to_params(req)); });
           });
  http.Post("/api/sweep",
            [&s](const httplib::Request& req, httplib::Response& res) {
              guarded(res, [&] {
                return sweep_json(s, nlohmann::json::parse(req.body));
              });
            });

  // Unmatched routes reach the error handler with status 404.
  http.set_error_handler([](const httplib::Request& req,
                            httplib::Response& res) {
    if (res.status == 404) {
      reply(res, 404,
            {{"error", "not_found"}, {"message", "no route for " + req.path}});
    }
  });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      const ErrorReply err = error_reply(e);
      reply(res, err.http_status, err.body);
    } catch (...) {
      reply(res, 500, {{"error", "internal"}, {"message", "unknown error"}});
    }
  });
}

Server::~Server() { stop(); }

int Server::bind_to_any_port(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

bool Server::bind(const std::string& host, int port) {
  return impl_->http.bind_to_port(host, port);
}

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::is_running() const { return impl_->http.is_running(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace embaudit::service
