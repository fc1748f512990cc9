#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "embaudit/formats.h"
#include "embaudit/synthetic.h"
#include "json.hpp"
#include "run_cli.h"

using namespace embaudit;
using nlohmann::json;
using testing_support::run_cli;

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("embaudit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    save(synthetic::random_set(100, 8, 5), dir_ / "toy.bin", Format::kWord2VecBinary);
    save(synthetic::random_set(100, 8, 5), dir_ / "toy.txt", Format::kWord2VecText);
    save(synthetic::random_set(100, 8, 6), dir_ / "toy2.bin", Format::kWord2VecBinary);
    const auto fx = run_cli("fixture --out " + (dir_ / "fx").string());
    ASSERT_EQ(fx.exit_code, 0) << fx.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string model() { return "--model " + (dir_ / "toy.bin").string(); }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, ForcedIdentityReturnsB) {
  const auto r = run_cli("query " + model() +
                         " --a w3 --b w7 --c w3 --mode unconstrained --algo cosadd --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["candidates"][0]["token"], "w7");
}

TEST_F(Cli, JsonAndTableAgree) {
  const std::string args = "query " + model() +
                           " --a w1 --b w2 --c w3 --mode constrained --algo cosmul --topn 5";
  const auto table = run_cli(args);
  const auto as_json = run_cli(args + " --json");
  ASSERT_EQ(table.exit_code, 0) << table.err;
  ASSERT_EQ(as_json.exit_code, 0);
  const auto j = json::parse(as_json.out);
  ASSERT_EQ(j["candidates"].size(), 5u);
  for (const auto& cand : j["candidates"]) {
    char score[32];
    std::snprintf(score, sizeof score, "%.6f", cand["score"].get<double>());
    const std::string token = cand["token"];
    // Each candidate line of the table holds the same rank, token and score.
    const auto line_start = table.out.find(" " + token + " ");
    ASSERT_NE(line_start, std::string::npos) << token << "\n" << table.out;
    const auto line_end = table.out.find('\n', line_start);
    const std::string line = table.out.substr(line_start, line_end - line_start);
    EXPECT_NE(line.find(score), std::string::npos) << line;
  }
  EXPECT_NE(table.out.find("algo=cosmul"), std::string::npos);
  EXPECT_NE(table.out.find("epsilon=0.001"), std::string::npos);
  EXPECT_NE(table.out.find("mode=constrained"), std::string::npos);
}

TEST_F(Cli, TextFormatGivesSameAnswers) {
  const std::string rest = " --a w1 --b w2 --c w3 --mode constrained --algo cosadd --json";
  auto bin = json::parse(run_cli("query " + model() + rest).out);
  auto txt = json::parse(
      run_cli("query --model " + path("toy.txt") + " --format txt" + rest).out);
  EXPECT_EQ(bin["candidates"], txt["candidates"]);
}

TEST_F(Cli, ExitCodes) {
  auto r = run_cli("query " + model() + " --a w1 --b nope --c w3 --mode constrained --algo cosadd");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("nope"), std::string::npos);
  EXPECT_NE(r.err.find("not in the embedding set"), std::string::npos);

  r = run_cli("query " + model() + " --a w1 --b w2 --c w3 --algo cosadd");
  EXPECT_EQ(r.exit_code, 2);  // mode is required
  r = run_cli("query --model " + path("missing.bin") +
              " --a w1 --b w2 --c w3 --mode constrained --algo cosadd");
  EXPECT_EQ(r.exit_code, 1);
  r = run_cli("query --model " + path("toy.txt") +
              " --a w1 --b w2 --c w3 --mode constrained --algo cosadd");
  EXPECT_EQ(r.exit_code, 1);  // text file read as binary
  r = run_cli("frobnicate");
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(Cli, DeltaWithoutBolukbasiWarns) {
  const auto r = run_cli("query " + model() +
                         " --a w1 --b w2 --c w3 --mode constrained --algo cosadd --delta 0.8");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(Cli, EvalOnFixture) {
  const auto r = run_cli("eval --model " + path("fx/fixture.bin") + " --dataset " +
                         path("fx/fixture-analogies.txt") +
                         " --algo cosadd --mode constrained --jsonl");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line, last;
  while (std::getline(lines, line)) last = line;
  const auto summary = json::parse(last);
  EXPECT_EQ(summary["micro"], 1.0);
  EXPECT_EQ(summary["macro"], 1.0);
}

TEST_F(Cli, SweepDefaultSpecOrientation) {
  write("sweep.json", R"({"mode": "constrained", "queries": [{"a": "w1", "b": "w2", "c": "w3"}]})");
  const auto r = run_cli("sweep " + model() + " --config " + path("sweep.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  // Columns are the thresholds, rows the cutoffs.
  const auto header = r.out.find("0.5");
  ASSERT_NE(header, std::string::npos) << r.out;
  const std::string header_line = r.out.substr(header, r.out.find('\n', header) - header);
  for (const char* d : {"0.8", "0.9", "1.0", "1.1", "1.2", "1.5"}) {
    EXPECT_NE(header_line.find(d), std::string::npos) << header_line;
  }
  for (const char* row : {"\n10,000", "\n25,000", "\n50,000", "\n100,000", "\n250,000",
                          "\n500,000", "\nall"}) {
    EXPECT_NE(r.out.find(row), std::string::npos) << row << "\n" << r.out;
  }
}

TEST_F(Cli, AuditAcrossSets) {
  write("audit.json", R"({"mode": "constrained",
      "queries": [{"a": "w1", "b": "w2", "c": "w3", "reported": "w4"}]})");
  const auto r = run_cli("audit --model " + path("toy.bin") + " --model " + path("toy2.bin") +
                         " --config " + path("audit.json") + " --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["per_set"].size(), 2u);
  EXPECT_LE(j[0]["aggregated_top5"].size(), 5u);
  const auto table = run_cli("audit --model " + path("toy.bin") + " --config " +
                             path("audit.json"));
  EXPECT_EQ(table.exit_code, 0);
  EXPECT_NE(table.out.find("w4"), std::string::npos);
}

TEST_F(Cli, AuditWithoutQueriesIsUsageError) {
  write("empty.json", R"({"mode": "constrained", "queries": []})");
  const auto r = run_cli("audit --model " + path("toy.bin") + " --config " + path("empty.json"));
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(Cli, VocabAndPairs) {
  auto r = run_cli("vocab " + model() + " --token w50 --cutoff 10 --json");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["status"], "filtered");
  r = run_cli("pairs " + model() + " --a w1 --c w2 --limit 3 --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["pairs"].size(), 3u);
}

TEST_F(Cli, RankOfInputIsAbsent) {
  const auto r = run_cli("rank " + model() +
                         " --a w1 --b w2 --c w3 --mode constrained --algo cosadd --term w2 --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["rank"].is_null());
}
