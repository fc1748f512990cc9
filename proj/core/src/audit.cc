#include "embaudit/audit.h"

#include <algorithm>
#include <limits>
#include <map>

#include "embaudit/errors.h"

namespace embaudit {

namespace {

constexpr std::size_t kTopK = 5;

struct UsableRanking {
  std::size_t candidate_count;
  // rank_by_index[i] = 1-based rank of base index i, 0 when not a candidate.
  std::vector<std::uint32_t> rank_by_index;
  const FullRanking* ranking;
};

double mean_rank_of(const std::string& token,
                    const std::vector<UsableRanking>& rankings,
                    const std::vector<const EmbeddingSet*>& bases) {
  double sum = 0.0;
  for (std::size_t s = 0; s < rankings.size(); ++s) {
    const auto& r = rankings[s];
    std::size_t rank = r.candidate_count + 1;
    if (const auto index = bases[s]->find(token)) {
      if (r.rank_by_index[*index] != 0) rank = r.rank_by_index[*index];
    }
    sum += static_cast<double>(rank);
  }
  return sum / static_cast<double>(rankings.size());
}

// Five tokens with the lowest mean rank. Only tokens inside some set's top m
// can beat a mean of m + 1, so m grows until the fifth mean is below that.
std::vector<std::string> aggregate_top(
    const std::vector<UsableRanking>& rankings,
    const std::vector<const EmbeddingSet*>& bases) {
  if (rankings.empty()) return {};
  std::size_t longest = 0;
  for (const auto& r : rankings) longest = std::max(longest, r.candidate_count);

  std::size_t m = kTopK;
  while (true) {
    std::map<std::string, double> means;
    for (std::size_t s = 0; s < rankings.size(); ++s) {
      const auto& entries = rankings[s].ranking->entries();
      const std::size_t upto = std::min(m, entries.size());
      for (std::size_t i = 0; i < upto; ++i) {
        const std::string& token = bases[s]->token(entries[i].index);
        if (!means.contains(token)) {
          means.emplace(token, mean_rank_of(token, rankings, bases));
        }
      }
    }
    std::vector<std::pair<double, std::string>> ordered;
    ordered.reserve(means.size());
    for (auto& [token, mean] : means) ordered.emplace_back(mean, token);
    std::sort(ordered.begin(), ordered.end());

    const bool exhausted = m >= longest;
    if (exhausted || (ordered.size() >= kTopK &&
                      ordered[kTopK - 1].first < static_cast<double>(m + 1))) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < std::min(kTopK, ordered.size()); ++i) {
        out.push_back(ordered[i].second);
      }
      return out;
    }
    m *= 2;
  }
}

}  // namespace

AuditReport audit(const BiasQuery& query, const std::vector<NamedSet>& sets,
                  const Algorithm& algorithm, ConstraintMode mode,
                  const ViewSettings& view) {
  if (sets.empty()) throw InvalidArgument("audit needs at least one set");
  for (const std::string* token : {&query.a, &query.b, &query.c}) {
    if (token->empty()) throw InvalidArgument("empty query token");
  }

  AuditReport report;
  report.query = query;

  std::vector<FullRanking> rankings;
  rankings.reserve(sets.size());
  std::vector<UsableRanking> usable;
  std::vector<const EmbeddingSet*> bases;

  double rank_sum = 0.0;
  std::size_t rank_count = 0;

  for (const auto& named : sets) {
    SetAuditResult result;
    result.set_id = named.id;
    try {
      const VocabView v(named.set, view.cutoff, view.rules);
      const AnalogyQuery q{query.a, query.b, query.c, algorithm, mode, v, 1};
      rankings.push_back(rank_all(q));
    } catch (const ResolutionError& e) {
      result.usable = false;
      result.problem = e.what();
    } catch (const InvalidArgument& e) {
      result.usable = false;
      result.problem = e.what();
    }
    if (result.usable) {
      const FullRanking& ranking = rankings.back();
      result.candidate_count = ranking.size();
      for (const auto& c : ranking.top(kTopK)) result.top5.push_back(c.token);
      if (query.reported) {
        result.rank_of_reported = ranking.rank_of(*query.reported);
        if (result.rank_of_reported) {
          rank_sum += static_cast<double>(*result.rank_of_reported);
          ++rank_count;
        }
      }
      UsableRanking u{ranking.size(),
                      std::vector<std::uint32_t>(named.set->size(), 0),
                      &ranking};
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        u.rank_by_index[ranking.entries()[i].index] =
            static_cast<std::uint32_t>(i + 1);
      }
      usable.push_back(std::move(u));
      bases.push_back(named.set.get());
    }
    report.per_set.push_back(std::move(result));
  }

  if (rank_count > 0) report.mean_rank = rank_sum / rank_count;
  report.aggregated_top5 = aggregate_top(usable, bases);
  return report;
}

SweepSpec SweepSpec::with_defaults(std::string a, std::string b,
                                   std::string c) {
  SweepSpec spec;
  spec.a = std::move(a);
  spec.b = std::move(b);
  spec.c = std::move(c);
  spec.deltas = {0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5};
  spec.cutoffs = {Cutoff::top(10'000),  Cutoff::top(25'000),
                  Cutoff::top(50'000),  Cutoff::top(100'000),
                  Cutoff::top(250'000), Cutoff::top(500'000),
                  Cutoff::all()};
  return spec;
}

SweepGrid sweep(const SweepSpec& spec, const EmbeddingSetPtr& set,
                ConstraintMode mode) {
  if (spec.deltas.empty()) throw InvalidArgument("sweep needs deltas");
  if (spec.cutoffs.empty()) throw InvalidArgument("sweep needs cutoffs");
  for (double delta : spec.deltas) {
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  }
  for (const std::string* token : {&spec.a, &spec.b, &spec.c}) {
    if (!set->find(*token)) {
      throw ResolutionError(*token, LookupStatus::kUnknown);
    }
  }

  SweepGrid grid{spec, mode, {}};
  grid.grid.reserve(spec.cutoffs.size());
  for (const Cutoff& cutoff : spec.cutoffs) {
    std::vector<std::optional<std::string>> row(spec.deltas.size());
    std::optional<VocabView> view;
    try {
      view.emplace(set, cutoff, spec.rules);
    } catch (const InvalidArgument&) {
      grid.grid.push_back(std::move(row));
      continue;
    }
    for (std::size_t j = 0; j < spec.deltas.size(); ++j) {
      const AnalogyQuery q{spec.a, spec.b, spec.c,
                           BolukbasiDir{spec.deltas[j]}, mode, *view, 1};
      try {
        row[j] = solve(q).candidates.front().token;
      } catch (const InvalidArgument&) {
        // Constraint removed every candidate; leave the cell empty.
      }
    }
    grid.grid.push_back(std::move(row));
  }
  return grid;
}

RankedList transparency_report(const BiasQuery& query,
                               const EmbeddingSetPtr& set,
                               const Algorithm& algorithm, ConstraintMode mode,
                               const ViewSettings& view, std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const VocabView v(set, view.cutoff, view.rules);
  return solve({query.a, query.b, query.c, algorithm, mode, v, n});
}

}  // namespace embaudit
