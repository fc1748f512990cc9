#include "embaudit/engine.h"

#include <algorithm>
#include <array>
#include <queue>
#include <stdexcept>
#include <thread>

#include "embaudit/errors.h"
#include "embaudit/scoring.h"
#include "parallel.h"

namespace embaudit {

namespace {

constexpr std::size_t kMinParallelCandidates = 1 << 15;
constexpr std::size_t kMinParallelPairRows = 64;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool ranks_before(const RankedEntry& x, const RankedEntry& y) {
  if (x.score != y.score) return x.score > y.score;
  return x.index < y.index;
}

std::size_t resolve(const EmbeddingSet& set, const std::string& token) {
  const auto index = set.find(token);
  if (!index) throw ResolutionError(token, LookupStatus::kUnknown);
  return *index;
}

void validate(const Algorithm& algorithm) {
  std::visit(Overloaded{
                 [](const CosAdd&) {},
                 [](const CosMul& m) {
                   if (!(m.epsilon > 0.0)) {
                     throw InvalidArgument("epsilon must be positive");
                   }
                 },
                 [](const BolukbasiDir& b) {
                   if (!(b.delta > 0.0)) {
                     throw InvalidArgument("delta must be positive");
                   }
                 },
             },
             algorithm);
}

std::vector<double> widen(std::span<const float> row) {
  return {row.begin(), row.end()};
}

// Cosines of a candidate row against the three query rows.
struct QueryCosines {
  QueryCosines(const EmbeddingSet& set, std::size_t a, std::size_t b,
               std::size_t c)
      : set_(set),
        rows_{widen(set.row(a)), widen(set.row(b)), widen(set.row(c))},
        inv_{set.inverse_norm(a), set.inverse_norm(b), set.inverse_norm(c)} {}

  // {cos(d, a), cos(d, b), cos(d, c)}
  std::array<double, 3> operator()(std::size_t d) const {
    const auto row = set_.row(d);
    double da = 0.0;
    double db = 0.0;
    double dc = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double x = row[k];
      da += x * rows_[0][k];
      db += x * rows_[1][k];
      dc += x * rows_[2][k];
    }
    const double inv_d = set_.inverse_norm(d);
    return {da * inv_d * inv_[0], db * inv_d * inv_[1], dc * inv_d * inv_[2]};
  }

  const EmbeddingSet& set_;
  std::array<std::vector<double>, 3> rows_;
  std::array<double, 3> inv_;
};

std::vector<RankedEntry> score_candidates(const AnalogyQuery& query) {
  validate(query.algorithm);
  const EmbeddingSet& set = query.view.base();
  const std::size_t a = resolve(set, query.a);
  const std::size_t b = resolve(set, query.b);
  const std::size_t c = resolve(set, query.c);

  std::vector<std::uint32_t> candidates = query.view.admitted_indices();
  if (query.mode == ConstraintMode::kExcludeInputs) {
    std::erase_if(candidates, [&](std::uint32_t i) {
      return i == a || i == b || i == c;
    });
  }
  if (candidates.empty()) {
    throw InvalidArgument("no candidate remains after applying the " +
                          std::string(mode_name(query.mode)) +
                          " constraint to the vocabulary view");
  }

  std::vector<RankedEntry> entries(candidates.size());
  std::visit(
      Overloaded{
          [&](const CosAdd&) {
            const QueryCosines cosines(set, a, b, c);
            detail::parallel_chunks(
                candidates.size(), kMinParallelCandidates,
                [&](std::size_t begin, std::size_t end) {
                  for (std::size_t i = begin; i < end; ++i) {
                    const auto [da, db, dc] = cosines(candidates[i]);
                    entries[i] = {candidates[i], dc - da + db};
                  }
                });
          },
          [&](const CosMul& m) {
            const QueryCosines cosines(set, a, b, c);
            detail::parallel_chunks(
                candidates.size(), kMinParallelCandidates,
                [&](std::size_t begin, std::size_t end) {
                  for (std::size_t i = begin; i < end; ++i) {
                    auto [da, db, dc] = cosines(candidates[i]);
                    if (m.shifted) {
                      da = shifted_cosine(da);
                      db = shifted_cosine(db);
                      dc = shifted_cosine(dc);
                    }
                    entries[i] = {candidates[i], (dc * db) / (da + m.epsilon)};
                  }
                });
          },
          [&](const BolukbasiDir& dir) {
            const OffsetDirection direction(set.row(a), set.row(c));
            const auto b_row = set.row(b);
            detail::parallel_chunks(
                candidates.size(), kMinParallelCandidates,
                [&](std::size_t begin, std::size_t end) {
                  for (std::size_t i = begin; i < end; ++i) {
                    const auto s = direction.score(
                        b_row, set.row(candidates[i]), dir.delta);
                    entries[i] = {candidates[i], s.value};
                  }
                });
          },
      },
      query.algorithm);
  return entries;
}

ScoredCandidate to_candidate(const EmbeddingSet& set, const RankedEntry& e,
                             std::size_t rank) {
  return {set.token(e.index), e.score, rank, e.index};
}

struct PairEntry {
  double score;
  std::uint32_t b;
  std::uint32_t d;
};

bool pair_before(const PairEntry& x, const PairEntry& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.b != y.b) return x.b < y.b;
  return x.d < y.d;
}

}  // namespace

const char* algorithm_name(const Algorithm& algorithm) {
  return std::visit(Overloaded{
                        [](const CosAdd&) { return "cosadd"; },
                        [](const CosMul&) { return "cosmul"; },
                        [](const BolukbasiDir&) { return "bolukbasi"; },
                    },
                    algorithm);
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "cosadd" || name == "3cosadd") return CosAdd{};
  if (name == "cosmul" || name == "3cosmul") return CosMul{};
  if (name == "bolukbasi") return BolukbasiDir{};
  throw InvalidArgument("unknown algorithm '" + std::string(name) +
                        "' (expected cosadd, cosmul or bolukbasi)");
}

const char* mode_name(ConstraintMode mode) {
  return mode == ConstraintMode::kExcludeInputs ? "constrained"
                                                : "unconstrained";
}

ConstraintMode parse_mode(std::string_view name) {
  if (name == "constrained" || name == "exclude-inputs") {
    return ConstraintMode::kExcludeInputs;
  }
  if (name == "unconstrained") return ConstraintMode::kUnconstrained;
  throw InvalidArgument("unknown mode '" + std::string(name) +
                        "' (expected constrained or unconstrained)");
}

FullRanking::FullRanking(EmbeddingSetPtr base, std::vector<RankedEntry> entries)
    : base_(std::move(base)), entries_(std::move(entries)) {}

std::optional<std::size_t> FullRanking::rank_of(std::string_view token) const {
  const auto index = base_->find(token);
  if (!index) return std::nullopt;
  return rank_of_index(*index);
}

std::optional<std::size_t> FullRanking::rank_of_index(std::size_t index) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index == index) return i + 1;
  }
  return std::nullopt;
}

std::vector<ScoredCandidate> FullRanking::top(std::size_t n) const {
  std::vector<ScoredCandidate> out;
  const std::size_t count = std::min(n, entries_.size());
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(to_candidate(*base_, entries_[i], i + 1));
  }
  return out;
}

FullRanking rank_all(const AnalogyQuery& query) {
  auto entries = score_candidates(query);
  std::sort(entries.begin(), entries.end(), ranks_before);
  return FullRanking(query.view.base_ptr(), std::move(entries));
}

RankedList solve(const AnalogyQuery& query) {
  if (query.top_n == 0) throw InvalidArgument("top_n must be at least 1");
  auto entries = score_candidates(query);
  const std::size_t n = std::min(query.top_n, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + n, entries.end(),
                    ranks_before);

  RankedList result{query, {}, entries.size()};
  result.candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.candidates.push_back(
        to_candidate(query.view.base(), entries[i], i + 1));
  }
  return result;
}

std::vector<PairResult> pair_search(std::string_view a, std::string_view c,
                                    const VocabView& view, double delta,
                                    std::size_t limit) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (limit == 0) throw InvalidArgument("limit must be at least 1");
  const EmbeddingSet& set = view.base();
  const std::size_t ia = resolve(set, std::string(a));
  const std::size_t ic = resolve(set, std::string(c));
  const OffsetDirection direction(set.row(ia), set.row(ic));
  const std::vector<std::uint32_t> admitted = view.admitted_indices();

  auto worse_on_top = [](const PairEntry& x, const PairEntry& y) {
    return pair_before(x, y);
  };
  using Heap = std::priority_queue<PairEntry, std::vector<PairEntry>,
                                   decltype(worse_on_top)>;

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t slots =
      std::min<std::size_t>(hw, admitted.size() / kMinParallelPairRows + 1);
  std::vector<std::vector<PairEntry>> partial(slots);

  auto scan = [&](std::size_t begin, std::size_t end,
                  std::vector<PairEntry>& out) {
    Heap heap(worse_on_top);
    for (std::size_t i = begin; i < end; ++i) {
      const auto b_row = set.row(admitted[i]);
      for (std::size_t j = 0; j < admitted.size(); ++j) {
        if (j == i) continue;
        const auto s = direction.score(b_row, set.row(admitted[j]), delta);
        if (!s.scored()) continue;
        const PairEntry entry{s.value, admitted[i], admitted[j]};
        if (heap.size() < limit) {
          heap.push(entry);
        } else if (pair_before(entry, heap.top())) {
          heap.pop();
          heap.push(entry);
        }
      }
    }
    out.reserve(heap.size());
    while (!heap.empty()) {
      out.push_back(heap.top());
      heap.pop();
    }
  };

  if (slots <= 1) {
    scan(0, admitted.size(), partial[0]);
  } else {
    const std::size_t chunk = (admitted.size() + slots - 1) / slots;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < slots; ++w) {
      const std::size_t begin = std::min(admitted.size(), w * chunk);
      const std::size_t end = std::min(admitted.size(), begin + chunk);
      workers.emplace_back(
          [&, begin, end, w] { scan(begin, end, partial[w]); });
    }
  }

  std::vector<PairEntry> merged;
  for (auto& part : partial) merged.insert(merged.end(), part.begin(), part.end());
  std::sort(merged.begin(), merged.end(), pair_before);
  if (merged.size() > limit) merged.resize(limit);

  std::vector<PairResult> out;
  out.reserve(merged.size());
  for (const auto& e : merged) {
    out.push_back({set.token(e.b), set.token(e.d), e.score});
  }
  return out;
}

}  // namespace embaudit
