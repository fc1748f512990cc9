#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "embaudit/engine.h"

namespace embaudit {

struct BiasQuery {
  std::string a;
  std::string b;
  std::string c;
  // The answer a cited work claimed for this analogy.
  std::optional<std::string> reported;
};

struct NamedSet {
  std::string id;
  EmbeddingSetPtr set;
};

struct SetAuditResult {
  std::string set_id;
  bool usable = true;
  std::string problem;  // why the set could not be used
  std::vector<std::string> top5;
  std::optional<std::size_t> rank_of_reported;
  std::size_t candidate_count = 0;
};

struct AuditReport {
  BiasQuery query;
  std::vector<SetAuditResult> per_set;
  // Mean over sets where the reported term was ranked.
  std::optional<double> mean_rank;
  // Best five tokens by mean rank across usable sets; a token missing from
  // a set's ranking counts as rank candidate_count + 1 there.
  std::vector<std::string> aggregated_top5;
};

struct ViewSettings {
  Cutoff cutoff = Cutoff::all();
  ShapeRules rules;
};

// Throws InvalidArgument when `sets` is empty. A set that cannot resolve the
// query is flagged unusable rather than failing the whole audit.
AuditReport audit(const BiasQuery& query, const std::vector<NamedSet>& sets,
                  const Algorithm& algorithm, ConstraintMode mode,
                  const ViewSettings& view);

struct SweepSpec {
  std::string a;
  std::string b;
  std::string c;
  std::vector<double> deltas;
  std::vector<Cutoff> cutoffs;
  ShapeRules rules;

  // Vocabulary sizes and thresholds of the reference sweep, including the
  // extreme thresholds 0.5 and 1.5.
  static SweepSpec with_defaults(std::string a, std::string b, std::string c);
};

// grid[cutoff][delta]; nullopt marks a cell with no candidate.
struct SweepGrid {
  SweepSpec spec;
  ConstraintMode mode = ConstraintMode::kExcludeInputs;
  std::vector<std::vector<std::optional<std::string>>> grid;
};

// Each cell is the top-1 of solve() under BolukbasiDir{delta} over the
// cutoff view. Throws InvalidArgument if deltas or cutoffs are empty and
// ResolutionError if a query token is missing from `set`.
SweepGrid sweep(const SweepSpec& spec, const EmbeddingSetPtr& set,
                ConstraintMode mode);

// Top-n slice of the ranking with scores and ranks.
RankedList transparency_report(const BiasQuery& query,
                               const EmbeddingSetPtr& set,
                               const Algorithm& algorithm, ConstraintMode mode,
                               const ViewSettings& view, std::size_t n);

}  // namespace embaudit
