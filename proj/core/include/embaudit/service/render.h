#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace embaudit::service {

// Plain-text tables built from the JSON responses, so the table and --json
// outputs of the CLI can never disagree.
std::string render_params(const nlohmann::json& params);
std::string render_query(const nlohmann::json& response);
std::string render_rank(const nlohmann::json& response);
std::string render_pairs(const nlohmann::json& response);
// Rows are cutoffs, columns are thresholds.
std::string render_sweep(const nlohmann::json& response);
std::string render_audit(const std::vector<nlohmann::json>& reports);

// Number of decimals in rendered scores.
inline constexpr int kScoreDigits = 6;

}  // namespace embaudit::service
