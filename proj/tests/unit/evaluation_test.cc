#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "embaudit/errors.h"
#include "embaudit/evaluation.h"
#include "embaudit/synthetic.h"
#include "gen.h"
#include "json.hpp"
#include "reference.h"

using namespace embaudit;

namespace {

AnalogyDataset parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

VocabView full_view(const EmbeddingSetPtr& set) {
  return VocabView(set, Cutoff::all(), {});
}

// Regroups every question of `dataset` into `k` random categories.
AnalogyDataset random_split(const AnalogyDataset& dataset, std::size_t k,
                            gen::Rng& rng) {
  AnalogyDataset out;
  for (std::size_t i = 0; i < k; ++i) out.categories.push_back({"part" + std::to_string(i), {}});
  for (const auto& cat : dataset.categories) {
    for (const auto& q : cat.quadruples) {
      out.categories[rng.index(k)].quadruples.push_back(q);
    }
  }
  std::erase_if(out.categories, [](const AnalogyCategory& c) { return c.quadruples.empty(); });
  return out;
}

}  // namespace

TEST(ParseDataset, SingleCategory) {
  const auto ds = parse_string(": cap\nParis France Tokyo Japan\n");
  ASSERT_EQ(ds.categories.size(), 1u);
  EXPECT_EQ(ds.categories[0].name, "cap");
  ASSERT_EQ(ds.categories[0].quadruples.size(), 1u);
  EXPECT_EQ(ds.categories[0].quadruples[0].d, "Japan");
  EXPECT_EQ(ds.total(), 1u);
}

TEST(ParseDataset, MultipleCategoriesAndBlankLines) {
  const auto ds = parse_string(
      ": one\na b c d\n\ne f g h\r\n: two\ni j k l\n");
  ASSERT_EQ(ds.categories.size(), 2u);
  EXPECT_EQ(ds.categories[0].quadruples.size(), 2u);
  EXPECT_EQ(ds.categories[1].quadruples[0].a, "i");
  EXPECT_EQ(ds.total(), 3u);
}

TEST(ParseDataset, Errors) {
  EXPECT_THROW(parse_string(""), FormatError);
  EXPECT_THROW(parse_string("\n\n"), FormatError);
  EXPECT_THROW(parse_string("a b c d\n"), FormatError);            // no category
  EXPECT_THROW(parse_string(": x\na b c\n"), FormatError);         // 3 tokens
  EXPECT_THROW(parse_string(": x\na b c d e\n"), FormatError);     // 5 tokens
  EXPECT_THROW(parse_string(": x\na b c d\n: x\ne f g h\n"), FormatError);
  EXPECT_THROW(parse_string(": x\n: y\na b c d\n"), FormatError);  // empty x
  EXPECT_THROW(parse_dataset(std::filesystem::path("/nonexistent.txt")), IoError);
}

TEST(Evaluate, PerfectOffsetFixtureScoresOne) {
  const auto fx = synthetic::offset_fixture();
  const auto report = evaluate(full_view(fx.set), fx.dataset, CosAdd{},
                               ConstraintMode::kExcludeInputs);
  EXPECT_EQ(report.micro, 1.0);
  EXPECT_EQ(report.macro, 1.0);
  EXPECT_EQ(report.errors.total(), 0u);
  for (const auto& cat : report.per_category) {
    EXPECT_EQ(cat.evaluated, cat.correct);
    EXPECT_EQ(cat.skipped_oov, 0u);
  }
}

// The fixture's construction is checked against the brute-force oracle: the
// best non-input candidate of every question is its d.
TEST(Evaluate, FixtureArgmaxConfirmedByOracle) {
  const auto fx = synthetic::offset_fixture();
  const std::vector<bool> all(fx.set->size(), true);
  for (const auto& cat : fx.dataset.categories) {
    for (const auto& q : cat.quadruples) {
      const auto ranking = oracle::full_ranking(
          *fx.set, all, *fx.set->find(q.a), *fx.set->find(q.b), *fx.set->find(q.c),
          oracle::Settings{});
      EXPECT_EQ(fx.set->token(ranking[0].index), q.d);
      // Margin well above float noise.
      EXPECT_GT(ranking[0].score - ranking[1].score, 0.1);
    }
  }
}

TEST(Evaluate, SingleCategoryMicroEqualsMacro) {
  const auto set = share(synthetic::random_set(40, 5, 3));
  gen::Rng rng(3);
  AnalogyDataset ds{{{"only", {}}}};
  for (int i = 0; i < 30; ++i) {
    ds.categories[0].quadruples.push_back(
        {set->token(rng.index(40)), set->token(rng.index(40)),
         set->token(rng.index(40)), set->token(rng.index(40))});
  }
  for (const Algorithm& algo : std::vector<Algorithm>{CosAdd{}, CosMul{}, BolukbasiDir{}}) {
    const auto r = evaluate(full_view(set), ds, algo, ConstraintMode::kUnconstrained);
    EXPECT_EQ(r.micro, r.macro);
  }
}

TEST(Evaluate, ConstrainedNeverReturnsInputs) {
  gen::Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = share(synthetic::random_set(30, 4, 50 + trial));
    AnalogyDataset ds{{{"c", {}}}};
    for (int i = 0; i < 40; ++i) {
      ds.categories[0].quadruples.push_back(
          {set->token(rng.index(30)), set->token(rng.index(30)),
           set->token(rng.index(30)), set->token(rng.index(30))});
    }
    for (const Algorithm& algo : std::vector<Algorithm>{CosAdd{}, CosMul{}, BolukbasiDir{}}) {
      const auto r = evaluate(full_view(set), ds, algo, ConstraintMode::kExcludeInputs);
      EXPECT_EQ(r.errors.returned_b, 0u);
      EXPECT_EQ(r.errors.returned_c, 0u);
    }
  }
}

// micro and macro follow from the per-category counts on every random
// regrouping, and micro does not depend on the grouping at all.
TEST(EvaluateProperty, MicroMacroIdentitiesOnRandomSplits) {
  gen::Rng rng(5);
  synthetic::OffsetFixtureParams params;
  params.categories = 4;
  params.shared = 2.0;
  params.spread = 0.6;
  const auto fx = synthetic::offset_fixture(params);
  const auto view = full_view(fx.set);
  const auto whole = evaluate(view, fx.dataset, CosAdd{}, ConstraintMode::kUnconstrained);
  for (int trial = 0; trial < 20; ++trial) {
    const auto split = random_split(fx.dataset, 1 + rng.index(6), rng);
    const auto r = evaluate(view, split, CosAdd{}, ConstraintMode::kUnconstrained);
    std::size_t correct = 0, evaluated = 0;
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& cat : r.per_category) {
      correct += cat.correct;
      evaluated += cat.evaluated;
      if (cat.evaluated > 0) {
        EXPECT_EQ(cat.accuracy, static_cast<double>(cat.correct) / cat.evaluated);
        sum += cat.accuracy;
        ++used;
      }
    }
    EXPECT_DOUBLE_EQ(r.micro, static_cast<double>(correct) / evaluated);
    EXPECT_DOUBLE_EQ(r.macro, sum / used);
    EXPECT_DOUBLE_EQ(r.micro, whole.micro);
    EXPECT_GE(r.micro, 0.0);
    EXPECT_LE(r.macro, 1.0);
    EXPECT_EQ(r.errors.total(), evaluated - correct);
  }
}

// Questions with planted unknown or filtered tokens are skipped and counted
// one for one.
TEST(EvaluateProperty, OovSkipCountsAreExact) {
  gen::Rng rng(6);
  const auto set = share(synthetic::random_set(50, 6, 9));
  const VocabView view(set, Cutoff::top(30), {});
  for (int trial = 0; trial < 20; ++trial) {
    AnalogyDataset ds;
    std::vector<std::size_t> planted;
    const std::size_t category_count = 1 + rng.index(4);
    for (std::size_t c = 0; c < category_count; ++c) {
      AnalogyCategory cat{"cat" + std::to_string(c), {}};
      std::size_t bad = 0;
      const std::size_t n = 1 + rng.index(15);
      for (std::size_t i = 0; i < n; ++i) {
        Quadruple q{set->token(rng.index(30)), set->token(rng.index(30)),
                    set->token(rng.index(30)), set->token(rng.index(30))};
        if (rng.coin()) {
          std::string* slot[4] = {&q.a, &q.b, &q.c, &q.d};
          *slot[rng.index(4)] =
              rng.coin() ? "zz_unknown" : set->token(30 + rng.index(20));
          ++bad;
        }
        cat.quadruples.push_back(q);
      }
      planted.push_back(bad);
      ds.categories.push_back(cat);
    }
    const auto r = evaluate(view, ds, CosAdd{}, ConstraintMode::kExcludeInputs);
    ASSERT_EQ(r.per_category.size(), ds.categories.size());
    for (std::size_t c = 0; c < ds.categories.size(); ++c) {
      EXPECT_EQ(r.per_category[c].skipped_oov, planted[c]);
      EXPECT_EQ(r.per_category[c].evaluated + r.per_category[c].skipped_oov,
                ds.categories[c].quadruples.size());
    }
  }
}

TEST(Evaluate, UnconstrainedErrorsDominatedByReturningB) {
  synthetic::OffsetFixtureParams params;
  params.shared = 3.0;
  params.spread = 0.5;
  params.offset = 0.5;
  params.jitter = 0.7;
  const auto fx = synthetic::offset_fixture(params);
  const auto view = full_view(fx.set);
  const auto free = evaluate(view, fx.dataset, CosAdd{}, ConstraintMode::kUnconstrained);
  const auto constrained =
      evaluate(view, fx.dataset, CosAdd{}, ConstraintMode::kExcludeInputs);
  EXPECT_EQ(constrained.micro, 1.0);
  ASSERT_GT(free.errors.total(), 0u);
  EXPECT_GT(free.errors.returned_b, free.errors.returned_c + free.errors.returned_other);
  EXPECT_LT(free.micro, constrained.micro);

  // Cross-check every answer against the oracle.
  const std::vector<bool> all(fx.set->size(), true);
  oracle::Settings s;
  s.exclude_inputs = false;
  std::size_t returned_b = 0;
  for (const auto& cat : fx.dataset.categories) {
    for (const auto& q : cat.quadruples) {
      const auto ranking = oracle::full_ranking(*fx.set, all, *fx.set->find(q.a),
                                                *fx.set->find(q.b),
                                                *fx.set->find(q.c), s);
      if (fx.set->token(ranking[0].index) == q.b) ++returned_b;
    }
  }
  EXPECT_EQ(returned_b, free.errors.returned_b);
}

TEST(Evaluate, CompareModes) {
  const auto fx = synthetic::offset_fixture();
  const auto rows = compare_modes(full_view(fx.set), fx.dataset,
                                  {CosAdd{}, CosMul{}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].constrained.mode, ConstraintMode::kExcludeInputs);
  EXPECT_EQ(rows[0].unconstrained.mode, ConstraintMode::kUnconstrained);
  EXPECT_TRUE(std::holds_alternative<CosMul>(rows[1].constrained.algorithm));
}

TEST(Evaluate, JsonlRecords) {
  const auto fx = synthetic::offset_fixture();
  const auto report = evaluate(full_view(fx.set), fx.dataset, CosMul{},
                               ConstraintMode::kExcludeInputs);
  std::ostringstream out;
  write_report_jsonl(out, report);
  std::istringstream lines(out.str());
  std::vector<nlohmann::json> records;
  for (std::string line; std::getline(lines, line);) {
    records.push_back(nlohmann::json::parse(line));
  }
  ASSERT_EQ(records.size(), fx.dataset.categories.size() + 1);
  EXPECT_EQ(records[0]["evaluated"], 12);
  EXPECT_EQ(records[0]["accuracy"], 1.0);
  const auto& summary = records.back();
  EXPECT_EQ(summary["micro"], 1.0);
  EXPECT_EQ(summary["algorithm"], "cosmul");
  EXPECT_EQ(summary["mode"], "constrained");
  EXPECT_EQ(summary["epsilon"], 0.001);
}
