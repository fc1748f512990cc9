#include "embaudit/service/config.h"

#include <fstream>

#include "embaudit/errors.h"
#include "embaudit/service/protocol.h"

namespace embaudit::service {

using nlohmann::json;

namespace {

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string() ||
      j[key].get<std::string>().empty()) {
    throw RequestError("invalid_config",
                       std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

JobConfig parse_job_config(const json& j) {
  if (!j.is_object()) {
    throw RequestError("invalid_config", "config must be a JSON object");
  }
  JobConfig config;
  try {
    if (j.contains("algorithm")) {
      config.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
    }
    if (auto* m = std::get_if<CosMul>(&config.algorithm)) {
      m->epsilon = j.value("epsilon", m->epsilon);
      const std::string variant = j.value("cosmul_variant", "shifted");
      if (variant != "shifted" && variant != "raw") {
        throw InvalidArgument("cosmul_variant must be 'shifted' or 'raw'");
      }
      m->shifted = variant == "shifted";
    }
    if (auto* b = std::get_if<BolukbasiDir>(&config.algorithm)) {
      b->delta = j.value("delta", b->delta);
    }
    config.mode = parse_mode(string_field(j, "mode"));
    if (j.contains("cutoff")) config.view.cutoff = cutoff_from_json(j["cutoff"]);
    if (j.contains("shape_rules")) {
      config.view.rules = ShapeRules::parse_list(
          j["shape_rules"].get<std::vector<std::string>>());
    }
    if (j.contains("queries")) {
      for (const auto& q : j["queries"]) {
        BiasQuery query{string_field(q, "a"), string_field(q, "b"),
                        string_field(q, "c"), std::nullopt};
        if (q.contains("reported") && !q["reported"].is_null()) {
          query.reported = q["reported"].get<std::string>();
        }
        config.queries.push_back(std::move(query));
      }
    }
    const SweepSpec defaults = SweepSpec::with_defaults("", "", "");
    config.deltas = j.contains("deltas")
                        ? j["deltas"].get<std::vector<double>>()
                        : defaults.deltas;
    if (j.contains("cutoffs")) {
      for (const auto& c : j["cutoffs"]) {
        config.cutoffs.push_back(cutoff_from_json(c));
      }
    } else {
      config.cutoffs = defaults.cutoffs;
    }
  } catch (const InvalidArgument& e) {
    throw RequestError("invalid_config", e.what());
  } catch (const json::exception& e) {
    throw RequestError("invalid_config", e.what());
  }
  if (config.queries.empty()) {
    throw RequestError("usage", "config lists no queries");
  }
  return config;
}

JobConfig load_job_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw RequestError("invalid_config", path.string() + ": " + e.what());
  }
  return parse_job_config(j);
}

json sweep_body(const JobConfig& config, const BiasQuery& query) {
  json cutoffs = json::array();
  for (const auto& c : config.cutoffs) cutoffs.push_back(cutoff_json(c));
  return {{"a", query.a},
          {"b", query.b},
          {"c", query.c},
          {"mode", mode_name(config.mode)},
          {"deltas", config.deltas},
          {"cutoffs", cutoffs},
          {"shape_rules", config.view.rules.names()}};
}

json audit_report_json(const AuditReport& report, const JobConfig& config) {
  json params = {{"algo", algorithm_name(config.algorithm)},
                 {"mode", mode_name(config.mode)},
                 {"cutoff", cutoff_json(config.view.cutoff)},
                 {"shape_rules", config.view.rules.names()}};
  if (const auto* m = std::get_if<CosMul>(&config.algorithm)) {
    params["epsilon"] = m->epsilon;
    params["cosmul_variant"] = m->shifted ? "shifted" : "raw";
  }
  if (const auto* b = std::get_if<BolukbasiDir>(&config.algorithm)) {
    params["delta"] = b->delta;
  }
  json sets = json::array();
  for (const auto& s : report.per_set) {
    json entry = {{"set", s.set_id},
                  {"usable", s.usable},
                  {"top5", s.top5},
                  {"candidate_count", s.candidate_count}};
    entry["rank_of_reported"] =
        s.rank_of_reported ? json(*s.rank_of_reported) : json(nullptr);
    if (!s.usable) entry["problem"] = s.problem;
    sets.push_back(std::move(entry));
  }
  json query = {{"a", report.query.a},
                {"b", report.query.b},
                {"c", report.query.c}};
  query["reported"] =
      report.query.reported ? json(*report.query.reported) : json(nullptr);
  json j = {{"params", params},
            {"query", query},
            {"per_set", sets},
            {"aggregated_top5", report.aggregated_top5}};
  j["mean_rank"] = report.mean_rank ? json(*report.mean_rank) : json(nullptr);
  return j;
}

}  // namespace embaudit::service
