#include "embaudit/service/protocol.h"

#include <chrono>
#include <charconv>

#include "embaudit/errors.h"

namespace embaudit::service {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

const std::string* find(const Params& raw, const std::string& key) {
  const auto it = raw.find(key);
  return it == raw.end() ? nullptr : &it->second;
}

const std::string& require(const Params& raw, const std::string& key) {
  const std::string* value = find(raw, key);
  if (value == nullptr || value->empty()) {
    throw RequestError("missing_parameter",
                       "missing required parameter '" + key + "'");
  }
  return *value;
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw RequestError("invalid_parameter",
                       "parameter '" + key + "' is not a number: '" + text +
                           "'");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      value == 0) {
    throw RequestError("invalid_parameter", "parameter '" + key +
                                                "' must be a positive "
                                                "integer, got '" +
                                                text + "'");
  }
  return value;
}

template <typename Fn>
auto as_request_error(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw RequestError("invalid_parameter",
                       "parameter '" + key + "': " + e.what());
  }
}

void check_cutoff(const ServerState& state, const Cutoff& cutoff) {
  if (!state.cutoff_max) return;
  const std::size_t prefix = cutoff.limit(state.set->size());
  if (prefix > *state.cutoff_max) {
    throw RequestError("cutoff_exceeds_max",
                       "cutoff " + cutoff.str() + " admits " +
                           std::to_string(prefix) +
                           " words; this service allows at most " +
                           std::to_string(*state.cutoff_max));
  }
}

Cutoff parse_cutoff(const Params& raw, const ServerState& state) {
  const std::string* text = find(raw, "cutoff");
  const Cutoff cutoff =
      text ? as_request_error("cutoff", [&] { return Cutoff::parse(*text); })
           : state.default_cutoff;
  check_cutoff(state, cutoff);
  return cutoff;
}

ShapeRules parse_rules(const Params& raw, const ServerState& state) {
  const std::string* text = find(raw, "rules");
  if (!text) return state.default_rules;
  return as_request_error("rules",
                          [&] { return ShapeRules::parse_csv(*text); });
}

VocabView make_request_view(const ServerState& state, const Cutoff& cutoff,
                            const ShapeRules& rules) {
  try {
    return VocabView(state.set, cutoff, rules);
  } catch (const InvalidArgument& e) {
    throw RequestError("empty_view", e.what());
  }
}

json candidates_json(const std::vector<ScoredCandidate>& candidates) {
  json out = json::array();
  for (const auto& c : candidates) {
    out.push_back({{"token", c.token}, {"score", c.score}, {"rank", c.rank}});
  }
  return out;
}

json rules_json(const ShapeRules& rules) { return rules.names(); }

ShapeRules rules_from_json(const json& value) {
  if (value.is_string()) return ShapeRules::parse_csv(value.get<std::string>());
  return ShapeRules::parse_list(value.get<std::vector<std::string>>());
}

AnalogyQuery to_query(const QueryParams& p, const VocabView& view) {
  return {p.a, p.b, p.c, p.algorithm, p.mode, view, p.top_n};
}

}  // namespace

QueryParams parse_query_params(const Params& raw, const ServerState& state) {
  QueryParams p;
  p.a = require(raw, "a");
  p.b = require(raw, "b");
  p.c = require(raw, "c");
  const std::string& algo = require(raw, "algo");
  p.algorithm = as_request_error("algo", [&] { return parse_algorithm(algo); });
  const std::string& mode = require(raw, "mode");
  p.mode = as_request_error("mode", [&] { return parse_mode(mode); });
  if (const auto* topn = find(raw, "topn")) p.top_n = parse_count("topn", *topn);

  const std::string* delta = find(raw, "delta");
  const std::string* epsilon = find(raw, "epsilon");
  const std::string* variant = find(raw, "cosmul");
  if (auto* b = std::get_if<BolukbasiDir>(&p.algorithm)) {
    if (delta) b->delta = parse_double("delta", *delta);
    if (!(b->delta > 0.0)) {
      throw RequestError("invalid_parameter", "delta must be positive");
    }
  } else if (delta) {
    p.warnings.push_back("delta is only used by bolukbasi; ignored");
  }
  if (auto* m = std::get_if<CosMul>(&p.algorithm)) {
    if (epsilon) m->epsilon = parse_double("epsilon", *epsilon);
    if (!(m->epsilon > 0.0)) {
      throw RequestError("invalid_parameter", "epsilon must be positive");
    }
    if (variant) {
      if (*variant == "shifted") {
        m->shifted = true;
      } else if (*variant == "raw") {
        m->shifted = false;
      } else {
        throw RequestError("invalid_parameter",
                           "cosmul must be 'shifted' or 'raw'");
      }
    }
  } else {
    if (epsilon) p.warnings.push_back("epsilon is only used by cosmul; ignored");
    if (variant) p.warnings.push_back("cosmul is only used by cosmul; ignored");
  }

  p.cutoff = parse_cutoff(raw, state);
  p.rules = parse_rules(raw, state);
  return p;
}

json cutoff_json(const Cutoff& cutoff) {
  if (cutoff.is_all()) return "all";
  return cutoff.value();
}

Cutoff cutoff_from_json(const json& value) {
  if (value.is_string()) return Cutoff::parse(value.get<std::string>());
  if (value.is_number_integer() && value.get<long long>() > 0) {
    return Cutoff::top(value.get<std::size_t>());
  }
  throw InvalidArgument("cutoff must be \"all\" or a positive integer");
}

json params_json(const QueryParams& p) {
  json j = {{"a", p.a},
            {"b", p.b},
            {"c", p.c},
            {"algo", algorithm_name(p.algorithm)},
            {"mode", mode_name(p.mode)},
            {"topn", p.top_n},
            {"cutoff", cutoff_json(p.cutoff)},
            {"shape_rules", rules_json(p.rules)}};
  if (const auto* b = std::get_if<BolukbasiDir>(&p.algorithm)) {
    j["delta"] = b->delta;
  }
  if (const auto* m = std::get_if<CosMul>(&p.algorithm)) {
    j["epsilon"] = m->epsilon;
    j["cosmul_variant"] = m->shifted ? "shifted" : "raw";
  }
  return j;
}

json meta_json(const ServerState& state) {
  ++state.request_count;
  json j = {{"model", state.model_id},
            {"vocab_size", state.set->size()},
            {"dim", state.set->dim()},
            {"normalized", state.set->normalized()},
            {"algorithms", {"cosadd", "cosmul", "bolukbasi"}},
            {"modes", {"constrained", "unconstrained"}},
            {"shape_rules", {"max_len_20", "no_punctuation", "no_uppercase"}},
            {"defaults",
             {{"topn", 10},
              {"delta", BolukbasiDir{}.delta},
              {"epsilon", CosMul{}.epsilon},
              {"cosmul_variant", "shifted"},
              {"cutoff", cutoff_json(state.default_cutoff)},
              {"shape_rules", rules_json(state.default_rules)}}}};
  j["cutoff_max"] = state.cutoff_max ? json(*state.cutoff_max) : json(nullptr);
  return j;
}

json query_json(const ServerState& state, const Params& raw) {
  ++state.request_count;
  const auto start = Clock::now();
  const QueryParams p = parse_query_params(raw, state);
  const VocabView view = make_request_view(state, p.cutoff, p.rules);
  const RankedList result = solve(to_query(p, view));
  json j = {{"model", state.model_id},
            {"params", params_json(p)},
            {"candidates", candidates_json(result.candidates)},
            {"evaluated_count", result.evaluated_count},
            {"warnings", p.warnings}};
  j["timing_ms"] = elapsed_ms(start);
  return j;
}

json rank_json(const ServerState& state, const Params& raw) {
  ++state.request_count;
  const auto start = Clock::now();
  const QueryParams p = parse_query_params(raw, state);
  const std::string& term = require(raw, "term");
  const VocabView view = make_request_view(state, p.cutoff, p.rules);
  const FullRanking ranking = rank_all(to_query(p, view));
  const auto rank = ranking.rank_of(term);

  json j = {{"model", state.model_id},
            {"params", params_json(p)},
            {"term", term},
            {"term_status", lookup_status_name(view.lookup(term).status)},
            {"in_candidate_set", rank.has_value()},
            {"candidate_count", ranking.size()},
            {"context", candidates_json(ranking.top(p.top_n))},
            {"warnings", p.warnings}};
  j["rank"] = rank ? json(*rank) : json(nullptr);
  j["score"] =
      rank ? json(ranking.entries()[*rank - 1].score) : json(nullptr);
  j["timing_ms"] = elapsed_ms(start);
  return j;
}

json pairs_json(const ServerState& state, const Params& raw) {
  ++state.request_count;
  const auto start = Clock::now();
  const std::string& a = require(raw, "a");
  const std::string& c = require(raw, "c");
  double delta = BolukbasiDir{}.delta;
  if (const auto* d = find(raw, "delta")) delta = parse_double("delta", *d);
  if (!(delta > 0.0)) {
    throw RequestError("invalid_parameter", "delta must be positive");
  }
  std::size_t limit = 10;
  if (const auto* l = find(raw, "limit")) limit = parse_count("limit", *l);
  const Cutoff cutoff = parse_cutoff(raw, state);
  const ShapeRules rules = parse_rules(raw, state);
  const VocabView view = make_request_view(state, cutoff, rules);

  const auto pairs = pair_search(a, c, view, delta, limit);
  json list = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    list.push_back({{"b", pairs[i].b},
                    {"d", pairs[i].d},
                    {"score", pairs[i].score},
                    {"rank", i + 1}});
  }
  json j = {{"model", state.model_id},
            {"params",
             {{"a", a},
              {"c", c},
              {"algo", "bolukbasi"},
              {"delta", delta},
              {"limit", limit},
              {"cutoff", cutoff_json(cutoff)},
              {"shape_rules", rules_json(rules)}}},
            {"pairs", std::move(list)}};
  j["timing_ms"] = elapsed_ms(start);
  return j;
}

json sweep_json(const ServerState& state, const json& body) {
  ++state.request_count;
  const auto start = Clock::now();
  if (!body.is_object()) {
    throw RequestError("invalid_body", "sweep body must be a JSON object");
  }
  auto text = [&](const char* key) -> std::string {
    if (!body.contains(key) || !body[key].is_string() ||
        body[key].get<std::string>().empty()) {
      throw RequestError("missing_parameter",
                         std::string("missing required field '") + key + "'");
    }
    return body[key].get<std::string>();
  };
  SweepSpec spec = SweepSpec::with_defaults(text("a"), text("b"), text("c"));
  const ConstraintMode mode =
      as_request_error("mode", [&] { return parse_mode(text("mode")); });
  if (body.contains("deltas")) {
    spec.deltas = body["deltas"].get<std::vector<double>>();
  }
  if (body.contains("cutoffs")) {
    spec.cutoffs.clear();
    for (const auto& c : body["cutoffs"]) {
      spec.cutoffs.push_back(
          as_request_error("cutoffs", [&] { return cutoff_from_json(c); }));
    }
  }
  if (body.contains("shape_rules")) {
    spec.rules = as_request_error(
        "shape_rules", [&] { return rules_from_json(body["shape_rules"]); });
  }
  for (const auto& c : spec.cutoffs) check_cutoff(state, c);

  const SweepGrid grid = sweep(spec, state.set, mode);

  json cutoffs = json::array();
  for (const auto& c : spec.cutoffs) cutoffs.push_back(cutoff_json(c));
  json rows = json::array();
  for (const auto& row : grid.grid) {
    json cells = json::array();
    for (const auto& cell : row) cells.push_back(cell ? json(*cell) : json());
    rows.push_back(std::move(cells));
  }
  json j = {{"model", state.model_id},
            {"params",
             {{"a", spec.a},
              {"b", spec.b},
              {"c", spec.c},
              {"algo", "bolukbasi"},
              {"mode", mode_name(mode)},
              {"deltas", spec.deltas},
              {"cutoffs", cutoffs},
              {"shape_rules", rules_json(spec.rules)}}},
            {"rows", cutoffs},
            {"columns", spec.deltas},
            {"grid", std::move(rows)}};
  j["timing_ms"] = elapsed_ms(start);
  return j;
}

json vocab_json(const ServerState& state, const Params& raw) {
  ++state.request_count;
  const std::string& token = require(raw, "token");
  const Cutoff cutoff = parse_cutoff(raw, state);
  const ShapeRules rules = parse_rules(raw, state);
  const VocabView view = make_request_view(state, cutoff, rules);
  const LookupResult result = view.lookup(token);
  json j = {{"token", token},
            {"status", lookup_status_name(result.status)},
            {"params",
             {{"cutoff", cutoff_json(cutoff)},
              {"shape_rules", rules_json(rules)}}}};
  j["rank"] = result.status == LookupStatus::kUnknown ? json(nullptr)
                                                      : json(result.index);
  return j;
}

ErrorReply error_reply(const std::exception& e) {
  if (const auto* r = dynamic_cast<const RequestError*>(&e)) {
    return {400, {{"error", r->reason()}, {"message", r->what()}}};
  }
  if (const auto* r = dynamic_cast<const ResolutionError*>(&e)) {
    return {400,
            {{"error", r->status() == LookupStatus::kFiltered
                           ? "filtered_token"
                           : "unknown_token"},
             {"token", r->token()},
             {"status", lookup_status_name(r->status())},
             {"message", r->what()}}};
  }
  if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) {
    return {400, {{"error", "invalid_parameter"}, {"message", e.what()}}};
  }
  if (dynamic_cast<const json::exception*>(&e) != nullptr) {
    return {400, {{"error", "invalid_body"}, {"message", e.what()}}};
  }
  return {500, {{"error", "internal"}, {"message", e.what()}}};
}

}  // namespace embaudit::service
