#include "embaudit/evaluation.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "embaudit/errors.h"
#include "json.hpp"
#include "text_util.h"

namespace embaudit {

namespace {

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

void add_algorithm_params(nlohmann::json& j, const Algorithm& algorithm) {
  if (const auto* m = std::get_if<CosMul>(&algorithm)) {
    j["epsilon"] = m->epsilon;
    j["cosmul_variant"] = m->shifted ? "shifted" : "raw";
  } else if (const auto* b = std::get_if<BolukbasiDir>(&algorithm)) {
    j["delta"] = b->delta;
  }
}

}  // namespace

std::size_t AnalogyDataset::total() const {
  std::size_t n = 0;
  for (const auto& category : categories) n += category.quadruples.size();
  return n;
}

AnalogyDataset parse_dataset(std::istream& in) {
  AnalogyDataset dataset;
  std::unordered_set<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == ':') {
      const std::string name(detail::trim(text.substr(1)));
      if (name.empty()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": category header without a name");
      }
      if (!names.insert(name).second) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": duplicate category '" + name + "'");
      }
      if (!dataset.categories.empty() &&
          dataset.categories.back().quadruples.empty()) {
        throw FormatError("category '" + dataset.categories.back().name +
                          "' has no questions");
      }
      dataset.categories.push_back({name, {}});
      continue;
    }
    const auto fields = detail::split_whitespace(text);
    if (fields.size() != 4) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 4 tokens, got " +
                        std::to_string(fields.size()));
    }
    if (dataset.categories.empty()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": question before any ': category' header");
    }
    dataset.categories.back().quadruples.push_back(
        {std::string(fields[0]), std::string(fields[1]),
         std::string(fields[2]), std::string(fields[3])});
  }
  if (dataset.categories.empty()) {
    throw FormatError("analogy dataset is empty");
  }
  if (dataset.categories.back().quadruples.empty()) {
    throw FormatError("category '" + dataset.categories.back().name +
                      "' has no questions");
  }
  return dataset;
}

AnalogyDataset parse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open analogy dataset " + path.string());
  try {
    return parse_dataset(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

EvalReport evaluate(const VocabView& view, const AnalogyDataset& dataset,
                    const Algorithm& algorithm, ConstraintMode mode) {
  EvalReport report;
  report.algorithm = algorithm;
  report.mode = mode;

  std::size_t total_correct = 0;
  std::size_t total_evaluated = 0;
  double accuracy_sum = 0.0;
  std::size_t scored_categories = 0;

  for (const auto& category : dataset.categories) {
    CategoryResult result;
    result.name = category.name;
    for (const auto& q : category.quadruples) {
      if (!view.lookup(q.a).found() || !view.lookup(q.b).found() ||
          !view.lookup(q.c).found() || !view.lookup(q.d).found()) {
        ++result.skipped_oov;
        continue;
      }
      const AnalogyQuery query{q.a, q.b, q.c, algorithm, mode, view, 1};
      const RankedList answer = solve(query);
      ++result.evaluated;
      const std::string& top = answer.candidates.front().token;
      if (top == q.d) {
        ++result.correct;
      } else if (top == q.b) {
        ++report.errors.returned_b;
      } else if (top == q.c) {
        ++report.errors.returned_c;
      } else {
        ++report.errors.returned_other;
      }
    }
    if (result.evaluated > 0) {
      result.accuracy = static_cast<double>(result.correct) /
                        static_cast<double>(result.evaluated);
      accuracy_sum += result.accuracy;
      ++scored_categories;
    }
    total_correct += result.correct;
    total_evaluated += result.evaluated;
    report.per_category.push_back(std::move(result));
  }

  if (total_evaluated > 0) {
    report.micro = static_cast<double>(total_correct) /
                   static_cast<double>(total_evaluated);
  }
  if (scored_categories > 0) {
    report.macro = accuracy_sum / static_cast<double>(scored_categories);
  }
  return report;
}

std::vector<ModeComparison> compare_modes(
    const VocabView& view, const AnalogyDataset& dataset,
    const std::vector<Algorithm>& algorithms) {
  std::vector<ModeComparison> rows;
  rows.reserve(algorithms.size());
  for (const auto& algorithm : algorithms) {
    rows.push_back(
        {evaluate(view, dataset, algorithm, ConstraintMode::kExcludeInputs),
         evaluate(view, dataset, algorithm, ConstraintMode::kUnconstrained)});
  }
  return rows;
}

void print_report_table(std::ostream& out, const EvalReport& report) {
  std::size_t width = 8;
  for (const auto& c : report.per_category) width = std::max(width, c.name.size());
  out << pad_right("category", width) << "  evaluated  skipped  correct  "
      << "accuracy\n";
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t correct = 0;
  for (const auto& c : report.per_category) {
    out << pad_right(c.name, width) << "  "
        << pad_left(std::to_string(c.evaluated), 9) << "  "
        << pad_left(std::to_string(c.skipped_oov), 7) << "  "
        << pad_left(std::to_string(c.correct), 7) << "  "
        << pad_left(c.evaluated > 0 ? fixed(c.accuracy, 4) : "-", 8) << '\n';
    evaluated += c.evaluated;
    skipped += c.skipped_oov;
    correct += c.correct;
  }
  out << pad_right("total", width) << "  "
      << pad_left(std::to_string(evaluated), 9) << "  "
      << pad_left(std::to_string(skipped), 7) << "  "
      << pad_left(std::to_string(correct), 7) << '\n';
  out << "micro " << fixed(report.micro, 4) << "  macro "
      << fixed(report.macro, 4) << '\n';
  const auto& e = report.errors;
  out << "wrong answers: returned b " << e.returned_b << ", returned c "
      << e.returned_c << ", other " << e.returned_other << '\n';
}

void print_comparison_table(std::ostream& out,
                            const std::vector<ModeComparison>& rows) {
  out << pad_right("", 8);
  for (const auto& row : rows) {
    out << pad_left(algorithm_name(row.constrained.algorithm), 11)
        << pad_left("uncon.", 9);
  }
  out << '\n';
  auto line = [&](const char* label, auto pick) {
    out << pad_right(label, 8);
    for (const auto& row : rows) {
      out << pad_left(fixed(pick(row.constrained), 2), 11)
          << pad_left(fixed(pick(row.unconstrained), 2), 9);
    }
    out << '\n';
  };
  line("micro", [](const EvalReport& r) { return r.micro; });
  line("macro", [](const EvalReport& r) { return r.macro; });
  out << "\nunconstrained wrong answers (returned b / returned c / other):\n";
  for (const auto& row : rows) {
    const auto& e = row.unconstrained.errors;
    out << "  " << pad_right(algorithm_name(row.unconstrained.algorithm), 10)
        << e.returned_b << " / " << e.returned_c << " / " << e.returned_other
        << '\n';
  }
}

void write_report_jsonl(std::ostream& out, const EvalReport& report) {
  for (const auto& c : report.per_category) {
    const nlohmann::json record = {{"name", c.name},
                                   {"evaluated", c.evaluated},
                                   {"skipped_oov", c.skipped_oov},
                                   {"correct", c.correct},
                                   {"accuracy", c.accuracy}};
    out << record.dump() << '\n';
  }
  nlohmann::json summary = {{"micro", report.micro},
                            {"macro", report.macro},
                            {"algorithm", algorithm_name(report.algorithm)},
                            {"mode", mode_name(report.mode)},
                            {"returned_b", report.errors.returned_b},
                            {"returned_c", report.errors.returned_c},
                            {"returned_other", report.errors.returned_other}};
  add_algorithm_params(summary, report.algorithm);
  out << summary.dump() << '\n';
}

}  // namespace embaudit
