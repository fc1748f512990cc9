#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "embaudit/engine.h"

namespace embaudit {

struct Quadruple {
  std::string a;
  std::string b;
  std::string c;
  std::string d;
};

struct AnalogyCategory {
  std::string name;
  std::vector<Quadruple> quadruples;
};

// Categorised A:B::C:D questions in file order.
struct AnalogyDataset {
  std::vector<AnalogyCategory> categories;

  std::size_t total() const;
};

// questions-words layout: ": name" opens a category, every other non-empty
// line holds four whitespace-separated tokens. Throws FormatError.
AnalogyDataset parse_dataset(std::istream& in);
AnalogyDataset parse_dataset(const std::filesystem::path& path);

struct CategoryResult {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t skipped_oov = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

// Where wrong top-1 answers came from.
struct ErrorBreakdown {
  std::size_t returned_b = 0;
  std::size_t returned_c = 0;
  std::size_t returned_other = 0;  // includes returning a

  std::size_t total() const { return returned_b + returned_c + returned_other; }
};

struct EvalReport {
  std::vector<CategoryResult> per_category;
  double micro = 0.0;
  double macro = 0.0;
  Algorithm algorithm;
  ConstraintMode mode = ConstraintMode::kExcludeInputs;
  ErrorBreakdown errors;
};

// A quadruple is scored only when all four tokens are admitted by `view`;
// otherwise it counts in skipped_oov. Correct iff the top-1 answer is d.
EvalReport evaluate(const VocabView& view, const AnalogyDataset& dataset,
                    const Algorithm& algorithm, ConstraintMode mode);

struct ModeComparison {
  EvalReport constrained;
  EvalReport unconstrained;
};

std::vector<ModeComparison> compare_modes(
    const VocabView& view, const AnalogyDataset& dataset,
    const std::vector<Algorithm>& algorithms);

void print_report_table(std::ostream& out, const EvalReport& report);
void print_comparison_table(std::ostream& out,
                            const std::vector<ModeComparison>& rows);
// One JSON object per line: a record per category, then a summary record.
void write_report_jsonl(std::ostream& out, const EvalReport& report);

}  // namespace embaudit
