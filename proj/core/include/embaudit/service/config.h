#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "embaudit/audit.h"
#include "json.hpp"

namespace embaudit::service {

// Audit/sweep job description, read from JSON:
//
//   {
//     "algorithm": "cosadd",            // cosadd | cosmul | bolukbasi
//     "epsilon": 0.001, "delta": 1.0,   // optional algorithm settings
//     "cosmul_variant": "shifted",      // or "raw"
//     "mode": "unconstrained",          // required
//     "cutoff": "all",                  // audit view cutoff
//     "shape_rules": ["no_uppercase"],
//     "queries": [{"a": "man", "b": "doctor", "c": "woman",
//                  "reported": "nurse"}],
//     "deltas": [0.8, 1.0, 1.2],        // sweep axes (defaults if absent)
//     "cutoffs": [10000, 50000, "all"]
//   }
struct JobConfig {
  Algorithm algorithm = CosAdd{};
  ConstraintMode mode = ConstraintMode::kUnconstrained;
  ViewSettings view;
  std::vector<BiasQuery> queries;
  std::vector<double> deltas;
  std::vector<Cutoff> cutoffs;
};

// Throws RequestError("usage", ...) for an empty query list and
// RequestError("invalid_config", ...) for anything malformed.
JobConfig parse_job_config(const nlohmann::json& j);
JobConfig load_job_config(const std::filesystem::path& path);

// Sweep request body for one query of the job.
nlohmann::json sweep_body(const JobConfig& config, const BiasQuery& query);

nlohmann::json audit_report_json(const AuditReport& report,
                                 const JobConfig& config);

}  // namespace embaudit::service
