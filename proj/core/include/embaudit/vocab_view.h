#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embaudit/embedding_set.h"
#include "embaudit/errors.h"

namespace embaudit {

// Number of most-frequent words a view keeps, or every word.
class Cutoff {
 public:
  static Cutoff all() { return Cutoff(); }
  // k >= 1
  static Cutoff top(std::size_t k);
  // "all" or a positive decimal integer (thousands separators ',' and '_'
  // are accepted, so "50,000" works).
  static Cutoff parse(std::string_view text);

  bool is_all() const { return !k_.has_value(); }
  std::size_t value() const { return *k_; }
  std::size_t limit(std::size_t vocab_size) const;
  std::string str() const;

  bool operator==(const Cutoff&) const = default;

 private:
  Cutoff() = default;
  std::optional<std::size_t> k_;
};

struct LookupResult {
  LookupStatus status = LookupStatus::kUnknown;
  // Base-set index; meaningful for kFound and kFiltered.
  std::size_t index = 0;

  bool found() const { return status == LookupStatus::kFound; }
};

// Restriction of an EmbeddingSet to the indices
//   { i < min(cutoff, V) : token_i passes every enabled shape rule }.
// Holds no vector data of its own.
class VocabView {
 public:
  // Throws InvalidArgument when nothing is admitted.
  VocabView(EmbeddingSetPtr base, Cutoff cutoff, ShapeRules rules);

  const EmbeddingSet& base() const { return *base_; }
  const EmbeddingSetPtr& base_ptr() const { return base_; }
  Cutoff cutoff() const { return cutoff_; }
  ShapeRules rules() const { return rules_; }

  // Upper bound (exclusive) of admitted indices.
  std::size_t prefix() const { return prefix_; }
  std::size_t admitted_count() const { return admitted_count_; }

  bool admits(std::size_t index) const {
    return index < prefix_ && (base_->shape_violations(index) & mask_) == 0;
  }

  LookupResult lookup(std::string_view token) const;

  std::vector<std::uint32_t> admitted_indices() const;

  template <typename Fn>
  void for_each_admitted(Fn&& fn) const {
    for (std::size_t i = 0; i < prefix_; ++i) {
      if ((base_->shape_violations(i) & mask_) == 0) fn(i);
    }
  }

 private:
  EmbeddingSetPtr base_;
  Cutoff cutoff_;
  ShapeRules rules_;
  std::uint8_t mask_ = 0;
  std::size_t prefix_ = 0;
  std::size_t admitted_count_ = 0;
};

inline VocabView make_view(EmbeddingSetPtr set, Cutoff cutoff,
                           ShapeRules rules = {}) {
  return VocabView(std::move(set), cutoff, rules);
}

}  // namespace embaudit
