#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "embaudit/audit.h"
#include "embaudit/engine.h"
#include "json.hpp"

namespace embaudit::service {

// Raw request parameters: HTTP query-string pairs or CLI flags.
using Params = std::map<std::string, std::string>;

// A request the service refuses; rendered as HTTP 400 / CLI exit 2.
class RequestError : public std::runtime_error {
 public:
  RequestError(std::string reason, const std::string& message)
      : std::runtime_error(message), reason_(std::move(reason)) {}

  // Machine-readable code, e.g. "missing_parameter".
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

// Loaded model plus defaults. Query handling never mutates it apart from the
// request counter.
struct ServerState {
  std::string model_id;
  EmbeddingSetPtr set;
  Cutoff default_cutoff = Cutoff::all();
  ShapeRules default_rules;
  // Largest prefix a request may ask for; nullopt = unlimited.
  std::optional<std::size_t> cutoff_max;
  mutable std::atomic<std::uint64_t> request_count{0};
};

// Fully resolved parameters of an analogy request.
struct QueryParams {
  std::string a;
  std::string b;
  std::string c;
  Algorithm algorithm;
  ConstraintMode mode = ConstraintMode::kExcludeInputs;
  std::size_t top_n = 10;
  Cutoff cutoff = Cutoff::all();
  ShapeRules rules;
  std::vector<std::string> warnings;
};

// Keys: a, b, c, algo, mode (required); topn (10), delta (1.0), epsilon
// (0.001), cosmul (shifted|raw), cutoff (all), rules (comma list).
QueryParams parse_query_params(const Params& raw, const ServerState& state);

// Effective-parameter echo shared by every response.
nlohmann::json params_json(const QueryParams& params);

nlohmann::json meta_json(const ServerState& state);
nlohmann::json query_json(const ServerState& state, const Params& raw);
nlohmann::json rank_json(const ServerState& state, const Params& raw);
nlohmann::json pairs_json(const ServerState& state, const Params& raw);
nlohmann::json sweep_json(const ServerState& state, const nlohmann::json& body);
nlohmann::json vocab_json(const ServerState& state, const Params& raw);

nlohmann::json cutoff_json(const Cutoff& cutoff);
Cutoff cutoff_from_json(const nlohmann::json& value);

struct ErrorReply {
  int http_status = 400;
  nlohmann::json body;
};

// Maps RequestError, ResolutionError, InvalidArgument and JSON errors onto a
// 400 reply with {"error": reason, "message": ...}; anything else is a 500.
ErrorReply error_reply(const std::exception& e);

}  // namespace embaudit::service
