#include "embaudit/service/render.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace embaudit::service {

using nlohmann::json;

namespace {

std::string format(const char* fmt, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

std::string score_text(const json& score) {
  if (!score.is_number()) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", kScoreDigits,
                score.get<double>());
  return buffer;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format("%g", v.get<double>());
  if (v.is_null()) return "-";
  if (v.is_array()) {
    if (v.empty()) return "none";
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ",";
      out += scalar_text(item);
    }
    return out;
  }
  return v.dump();
}

std::string pad(std::string s, std::size_t width, bool left_align = true) {
  if (s.size() >= width) return s;
  if (left_align) return s + std::string(width - s.size(), ' ');
  return std::string(width - s.size(), ' ') + s;
}

std::string candidate_table(const json& candidates) {
  std::size_t width = 5;
  for (const auto& c : candidates) {
    width = std::max(width, c["token"].get<std::string>().size());
  }
  std::ostringstream out;
  out << pad("rank", 6, false) << "  " << pad("token", width) << "  "
      << pad("score", kScoreDigits + 4, false) << '\n';
  for (const auto& c : candidates) {
    out << pad(std::to_string(c["rank"].get<std::size_t>()), 6, false) << "  "
        << pad(c["token"].get<std::string>(), width) << "  "
        << pad(score_text(c["score"]), kScoreDigits + 4, false) << '\n';
  }
  return out.str();
}

}  // namespace

std::string render_params(const json& params) {
  static const char* const kOrder[] = {
      "algo",   "mode",    "topn",           "delta",  "epsilon",
      "cosmul_variant", "limit", "cutoff", "shape_rules", "deltas",
      "cutoffs"};
  std::string out;
  for (const char* key : kOrder) {
    if (!params.contains(key)) continue;
    if (!out.empty()) out += "  ";
    out += std::string(key) + "=" + scalar_text(params[key]);
  }
  return out;
}

std::string render_query(const json& response) {
  const json& p = response["params"];
  std::ostringstream out;
  out << "model " << response["model"].get<std::string>() << "  "
      << render_params(p) << '\n';
  out << p["a"].get<std::string>() << " : " << p["b"].get<std::string>()
      << " :: " << p["c"].get<std::string>() << " : ?\n";
  out << candidate_table(response["candidates"]);
  out << response["evaluated_count"].get<std::size_t>()
      << " candidates scored\n";
  return out.str();
}

std::string render_rank(const json& response) {
  const json& p = response["params"];
  std::ostringstream out;
  out << "model " << response["model"].get<std::string>() << "  "
      << render_params(p) << '\n';
  out << p["a"].get<std::string>() << " : " << p["b"].get<std::string>()
      << " :: " << p["c"].get<std::string>() << " : ?\n";
  const std::string term = response["term"].get<std::string>();
  if (response["rank"].is_null()) {
    out << "'" << term << "' is not in the candidate set (token "
        << response["term_status"].get<std::string>() << ")\n";
  } else {
    out << "'" << term << "' ranks " << response["rank"].get<std::size_t>()
        << " of " << response["candidate_count"].get<std::size_t>()
        << " (score " << score_text(response["score"]) << ")\n";
  }
  out << "top " << response["context"].size() << ":\n";
  out << candidate_table(response["context"]);
  return out.str();
}

std::string render_pairs(const json& response) {
  const json& p = response["params"];
  std::ostringstream out;
  out << "model " << response["model"].get<std::string>() << "  "
      << render_params(p) << '\n';
  out << p["a"].get<std::string>() << " : b :: " << p["c"].get<std::string>()
      << " : d\n";
  std::size_t width = 1;
  for (const auto& pair : response["pairs"]) {
    width = std::max(width, pair["b"].get<std::string>().size());
  }
  out << pad("rank", 6, false) << "  " << pad("b", width) << "  "
      << pad("d", width) << "  " << pad("score", kScoreDigits + 4, false)
      << '\n';
  for (const auto& pair : response["pairs"]) {
    out << pad(std::to_string(pair["rank"].get<std::size_t>()), 6, false)
        << "  " << pad(pair["b"].get<std::string>(), width) << "  "
        << pad(pair["d"].get<std::string>(), width) << "  "
        << pad(score_text(pair["score"]), kScoreDigits + 4, false) << '\n';
  }
  if (response["pairs"].empty()) out << "(no pair within the threshold)\n";
  return out.str();
}

namespace {

// 50000 -> "50,000"; "all" is passed through.
std::string cutoff_label(const json& cutoff) {
  if (!cutoff.is_number_unsigned()) return scalar_text(cutoff);
  std::string digits = std::to_string(cutoff.get<std::size_t>());
  for (int pos = static_cast<int>(digits.size()) - 3; pos > 0; pos -= 3) {
    digits.insert(static_cast<std::size_t>(pos), ",");
  }
  return digits;
}

// 1 -> "1.0", 1.25 -> "1.25"
std::string delta_label(double delta) {
  std::string text = format("%g", delta);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

}  // namespace

std::string render_sweep(const json& response) {
  const json& p = response["params"];
  std::ostringstream out;
  out << "bolukbasi sweep  " << p["a"].get<std::string>() << " : "
      << p["b"].get<std::string>() << " :: " << p["c"].get<std::string>()
      << " : ?  mode=" << p["mode"].get<std::string>()
      << "  shape_rules=" << scalar_text(p["shape_rules"]) << '\n';

  std::size_t width = 8;
  for (const auto& row : response["grid"]) {
    for (const auto& cell : row) {
      if (cell.is_string()) {
        width = std::max(width, cell.get<std::string>().size());
      }
    }
  }
  const std::size_t label_width = 14;
  out << pad("cutoff \\ delta", label_width);
  for (const auto& d : response["columns"]) {
    out << "  " << pad(delta_label(d.get<double>()), width);
  }
  out << '\n';
  const auto& rows = response["rows"];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << pad(cutoff_label(rows[i]), label_width);
    for (const auto& cell : response["grid"][i]) {
      out << "  "
          << pad(cell.is_string() ? cell.get<std::string>() : "(empty)",
                 width);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_audit(const std::vector<json>& reports) {
  std::ostringstream out;
  if (!reports.empty()) out << render_params(reports.front()["params"]) << '\n';
  std::size_t analogy_width = 7;
  std::size_t reported_width = 8;
  for (const auto& r : reports) {
    const auto& q = r["query"];
    const std::string analogy = q["a"].get<std::string>() + " " +
                                q["b"].get<std::string>() + " " +
                                q["c"].get<std::string>();
    analogy_width = std::max(analogy_width, analogy.size());
    if (q["reported"].is_string()) {
      reported_width =
          std::max(reported_width, q["reported"].get<std::string>().size());
    }
  }
  out << pad("analogy", analogy_width) << "  " << pad("reported", reported_width)
      << "  " << pad("idx", 8, false) << "  top-5 (averaged)\n";
  for (const auto& r : reports) {
    const auto& q = r["query"];
    const std::string analogy = q["a"].get<std::string>() + " " +
                                q["b"].get<std::string>() + " " +
                                q["c"].get<std::string>();
    std::string top;
    for (const auto& t : r["aggregated_top5"]) {
      if (!top.empty()) top += " ";
      top += t.get<std::string>();
    }
    const std::string idx = r["mean_rank"].is_null()
                                ? "-"
                                : format("%.1f", r["mean_rank"].get<double>());
    out << pad(analogy, analogy_width) << "  "
        << pad(scalar_text(q["reported"]), reported_width) << "  "
        << pad(idx, 8, false) << "  " << top << '\n';
  }
  out << "\nper set:\n";
  for (const auto& r : reports) {
    const auto& q = r["query"];
    out << "  " << q["a"].get<std::string>() << " : "
        << q["b"].get<std::string>() << " :: " << q["c"].get<std::string>()
        << " : ?\n";
    for (const auto& s : r["per_set"]) {
      out << "    " << s["set"].get<std::string>() << ": ";
      if (!s["usable"].get<bool>()) {
        out << "unusable (" << s["problem"].get<std::string>() << ")\n";
        continue;
      }
      out << "rank " << scalar_text(s["rank_of_reported"]) << "  top-5 "
          << scalar_text(s["top5"]) << '\n';
    }
  }
  return out.str();
}

}  // namespace embaudit::service
