#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "embaudit/vocab_view.h"

namespace embaudit {

struct CosAdd {
  bool operator==(const CosAdd&) const = default;
};

struct CosMul {
  double epsilon = 0.001;
  // Use (1 + cos) / 2 inside the product. false gives the raw-cosine form.
  bool shifted = true;
  bool operator==(const CosMul&) const = default;
};

struct BolukbasiDir {
  double delta = 1.0;
  bool operator==(const BolukbasiDir&) const = default;
};

using Algorithm = std::variant<CosAdd, CosMul, BolukbasiDir>;

// "cosadd", "cosmul", "bolukbasi"
const char* algorithm_name(const Algorithm& algorithm);
// Default-parameterised algorithm for a name; throws InvalidArgument.
Algorithm parse_algorithm(std::string_view name);

enum class ConstraintMode {
  kExcludeInputs,  // never return a, b or c
  kUnconstrained,
};

// "constrained" / "unconstrained"
const char* mode_name(ConstraintMode mode);
ConstraintMode parse_mode(std::string_view name);

struct AnalogyQuery {
  std::string a;
  std::string b;
  std::string c;
  Algorithm algorithm;
  ConstraintMode mode = ConstraintMode::kExcludeInputs;
  // Candidates come from the view; a, b, c only need to exist in its base.
  VocabView view;
  std::size_t top_n = 10;
};

struct ScoredCandidate {
  std::string token;
  double score = 0.0;
  std::size_t rank = 0;   // 1-based
  std::size_t index = 0;  // base-set index
};

struct RankedList {
  AnalogyQuery query;
  std::vector<ScoredCandidate> candidates;
  std::size_t evaluated_count = 0;
};

struct RankedEntry {
  std::uint32_t index = 0;
  double score = 0.0;
};

// Every candidate of a query ordered by score, ties to the lower base index.
class FullRanking {
 public:
  FullRanking(EmbeddingSetPtr base, std::vector<RankedEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const std::vector<RankedEntry>& entries() const { return entries_; }
  const EmbeddingSet& base() const { return *base_; }

  // 1-based position of `token`; nullopt when it is not a candidate.
  std::optional<std::size_t> rank_of(std::string_view token) const;
  std::optional<std::size_t> rank_of_index(std::size_t index) const;

  std::vector<ScoredCandidate> top(std::size_t n) const;

 private:
  EmbeddingSetPtr base_;
  std::vector<RankedEntry> entries_;
};

// Throws ResolutionError when a, b or c is missing from the base set and
// InvalidArgument when the constraint leaves no candidate or top_n == 0.
RankedList solve(const AnalogyQuery& query);
FullRanking rank_all(const AnalogyQuery& query);

inline std::optional<std::size_t> rank_of(const FullRanking& ranking,
                                          std::string_view token) {
  return ranking.rank_of(token);
}

struct PairResult {
  std::string b;
  std::string d;
  double score = 0.0;
};

// Top `limit` ordered pairs (b, d), b != d, over the view's admitted words,
// ranked by cos(a - c, b - d). Pairs with ||b - d|| > delta or a zero
// difference vector never appear. Ties go to the lower (b, d) indices.
std::vector<PairResult> pair_search(std::string_view a, std::string_view c,
                                    const VocabView& view, double delta,
                                    std::size_t limit);

}  // namespace embaudit
