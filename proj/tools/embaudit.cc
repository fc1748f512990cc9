// embaudit: query, evaluate and audit word-embedding analogies with every
// implementation setting spelled out.
//
// Exit codes: 0 success, 1 I/O or file-format error, 2 usage / resolution
// error (unknown or filtered token, bad parameter).

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "embaudit/audit.h"
#include "embaudit/errors.h"
#include "embaudit/evaluation.h"
#include "embaudit/formats.h"
#include "embaudit/service/config.h"
#include "embaudit/service/protocol.h"
#include "embaudit/service/render.h"
#include "embaudit/service/server.h"
#include "embaudit/synthetic.h"

namespace {

using embaudit::service::Params;
using nlohmann::json;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct ModelFlags {
  std::string path;
  std::string format = "bin";
  bool lowercase = false;
  bool no_normalize = false;

  void add_to(CLI::App* app) {
    app->add_option("--model", path, "Embedding file")->required();
    app->add_option("--format", format, "bin | txt | glove")
        ->capture_default_str();
    app->add_flag("--lowercase", lowercase,
                  "Lowercase tokens at load (more frequent token wins)");
    app->add_flag("--no-normalize", no_normalize,
                  "Keep vectors as stored instead of unit-normalizing");
  }

  embaudit::LoadOptions options() const {
    return {embaudit::parse_format(format), !no_normalize, lowercase};
  }
};

std::string model_id(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

std::shared_ptr<embaudit::service::ServerState> load_state(
    const ModelFlags& flags) {
  auto state = std::make_shared<embaudit::service::ServerState>();
  state->model_id = model_id(flags.path);
  state->set = embaudit::share(embaudit::load(flags.path, flags.options()));
  return state;
}

// String flags forwarded as request parameters when given.
struct ParamFlags {
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    values.emplace_back(key, "");
    // `values` does not reallocate after setup: reserve() is called first.
    options.emplace_back(key, app->add_option(flag, values.back().second, help));
  }

  Params collect() const {
    Params params;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].second->count() > 0) {
        params[values[i].first] = values[i].second;
      }
    }
    return params;
  }
};

void add_query_flags(CLI::App* app, ParamFlags& p) {
  p.values.reserve(16);
  p.add(app, "--a", "a", "First term (A)");
  p.add(app, "--b", "b", "Second term (B)");
  p.add(app, "--c", "c", "Third term (C)");
  p.add(app, "--algo", "algo", "cosadd | cosmul | bolukbasi");
  p.add(app, "--mode", "mode", "constrained | unconstrained");
  p.add(app, "--topn", "topn", "Answers to list (default 10)");
  p.add(app, "--delta", "delta", "bolukbasi threshold (default 1.0)");
  p.add(app, "--epsilon", "epsilon", "cosmul epsilon (default 0.001)");
  p.add(app, "--cosmul", "cosmul", "cosmul variant: shifted | raw");
  p.add(app, "--cutoff", "cutoff", "Most frequent words kept (default all)");
  p.add(app, "--rules", "rules",
        "Shape rules: max_len_20,no_punctuation,no_uppercase | all | none");
}

void print_warnings(const json& response) {
  if (!response.contains("warnings")) return;
  for (const auto& w : response["warnings"]) {
    std::cerr << "warning: " << w.get<std::string>() << '\n';
  }
}

void emit(const json& response, bool as_json,
          std::string (*render)(const json&)) {
  print_warnings(response);
  if (as_json) {
    std::cout << response.dump(2) << '\n';
  } else {
    std::cout << render(response);
  }
}

embaudit::Algorithm configured_algorithm(const std::string& name,
                                         CLI::Option* epsilon_opt,
                                         double epsilon, bool raw_cosmul,
                                         CLI::Option* delta_opt, double delta) {
  embaudit::Algorithm algorithm = embaudit::parse_algorithm(name);
  if (auto* m = std::get_if<embaudit::CosMul>(&algorithm)) {
    if (epsilon_opt->count() > 0) m->epsilon = epsilon;
    m->shifted = !raw_cosmul;
  }
  if (auto* b = std::get_if<embaudit::BolukbasiDir>(&algorithm)) {
    if (delta_opt->count() > 0) b->delta = delta;
  }
  return algorithm;
}

embaudit::service::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analogy engine and bias-audit toolkit for word embeddings"};
  app.require_subcommand(1);

  // query / rank
  ModelFlags query_model;
  ParamFlags query_params;
  bool query_json = false;
  auto* query = app.add_subcommand("query", "Rank answers to A:B::C:?");
  query_model.add_to(query);
  add_query_flags(query, query_params);
  query->add_flag("--json", query_json, "Print the JSON response");

  ModelFlags rank_model;
  ParamFlags rank_params;
  bool rank_as_json = false;
  auto* rank = app.add_subcommand(
      "rank", "Position of a term in the full ranking of A:B::C:?");
  rank_model.add_to(rank);
  add_query_flags(rank, rank_params);
  rank_params.add(rank, "--term", "term", "Term to locate");
  rank->add_flag("--json", rank_as_json, "Print the JSON response");

  // pairs
  ModelFlags pairs_model;
  ParamFlags pairs_params;
  bool pairs_as_json = false;
  auto* pairs = app.add_subcommand("pairs", "Rank B:D pairs parallel to A:C");
  pairs_model.add_to(pairs);
  pairs_params.values.reserve(8);
  pairs_params.add(pairs, "--a", "a", "First term (A)");
  pairs_params.add(pairs, "--c", "c", "Other term (C)");
  pairs_params.add(pairs, "--delta", "delta", "Threshold on ||b - d||");
  pairs_params.add(pairs, "--limit", "limit", "Pairs to list (default 10)");
  pairs_params.add(pairs, "--cutoff", "cutoff", "Most frequent words kept");
  pairs_params.add(pairs, "--rules", "rules", "Shape rules");
  pairs->add_flag("--json", pairs_as_json, "Print the JSON response");

  // vocab
  ModelFlags vocab_model;
  ParamFlags vocab_params;
  bool vocab_as_json = false;
  auto* vocab = app.add_subcommand("vocab", "Look up a token in a view");
  vocab_model.add_to(vocab);
  vocab_params.values.reserve(4);
  vocab_params.add(vocab, "--token", "token", "Token to look up");
  vocab_params.add(vocab, "--cutoff", "cutoff", "Most frequent words kept");
  vocab_params.add(vocab, "--rules", "rules", "Shape rules");
  vocab->add_flag("--json", vocab_as_json, "Print the JSON response");

  // eval
  ModelFlags eval_model;
  std::string eval_dataset;
  std::vector<std::string> eval_algos;
  std::string eval_mode;
  std::string eval_cutoff = "all";
  std::string eval_rules;
  double eval_epsilon = 0.001;
  double eval_delta = 1.0;
  bool eval_raw_cosmul = false;
  bool eval_jsonl = false;
  auto* eval = app.add_subcommand(
      "eval", "Micro/macro accuracy on a questions-words analogy file");
  eval_model.add_to(eval);
  eval->add_option("--dataset", eval_dataset, "Analogy test file")->required();
  eval->add_option("--algo", eval_algos,
                   "cosadd | cosmul | bolukbasi (repeatable)")
      ->required();
  eval->add_option("--mode", eval_mode, "constrained | unconstrained | both")
      ->required();
  eval->add_option("--cutoff", eval_cutoff, "Most frequent words kept")
      ->capture_default_str();
  eval->add_option("--rules", eval_rules, "Shape rules");
  auto* eval_epsilon_opt =
      eval->add_option("--epsilon", eval_epsilon, "cosmul epsilon");
  auto* eval_delta_opt =
      eval->add_option("--delta", eval_delta, "bolukbasi threshold");
  eval->add_flag("--raw-cosmul", eval_raw_cosmul,
                 "Use raw cosines inside cosmul");
  eval->add_flag("--jsonl", eval_jsonl, "One JSON record per line");

  // audit
  std::vector<std::string> audit_models;
  std::string audit_format = "bin";
  std::string audit_config;
  bool audit_lowercase = false;
  bool audit_as_json = false;
  auto* audit_cmd = app.add_subcommand(
      "audit", "Rank reported answers across one or more embedding sets");
  audit_cmd->add_option("--model", audit_models, "Embedding file (repeatable)")
      ->required();
  audit_cmd->add_option("--format", audit_format, "bin | txt | glove")
      ->capture_default_str();
  audit_cmd->add_flag("--lowercase", audit_lowercase, "Lowercase at load");
  audit_cmd->add_option("--config", audit_config, "Job config (JSON)")
      ->required();
  audit_cmd->add_flag("--json", audit_as_json, "Print JSON reports");

  // sweep
  ModelFlags sweep_model;
  std::string sweep_config;
  bool sweep_as_json = false;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "bolukbasi answers over a cutoff x delta grid");
  sweep_model.add_to(sweep_cmd);
  sweep_cmd->add_option("--config", sweep_config, "Job config (JSON)")
      ->required();
  sweep_cmd->add_flag("--json", sweep_as_json, "Print JSON grids");

  // serve
  ModelFlags serve_model;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::size_t serve_cutoff_max = 0;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  serve_model.add_to(serve);
  serve->add_option("--host", serve_host)->capture_default_str();
  serve->add_option("--port", serve_port)->capture_default_str();
  serve->add_option("--cutoff-max", serve_cutoff_max,
                    "Reject requests admitting more than this many words");

  // fixture
  std::string fixture_dir;
  auto* fixture = app.add_subcommand(
      "fixture", "Write the synthetic offset fixture (model + analogy file)");
  fixture->add_option("--out", fixture_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*query) {
      const auto state = load_state(query_model);
      emit(embaudit::service::query_json(*state, query_params.collect()),
           query_json, embaudit::service::render_query);
    } else if (*rank) {
      const auto state = load_state(rank_model);
      emit(embaudit::service::rank_json(*state, rank_params.collect()),
           rank_as_json, embaudit::service::render_rank);
    } else if (*pairs) {
      const auto state = load_state(pairs_model);
      emit(embaudit::service::pairs_json(*state, pairs_params.collect()),
           pairs_as_json, embaudit::service::render_pairs);
    } else if (*vocab) {
      const auto state = load_state(vocab_model);
      const json response =
          embaudit::service::vocab_json(*state, vocab_params.collect());
      if (vocab_as_json) {
        std::cout << response.dump(2) << '\n';
      } else {
        std::cout << response["token"].get<std::string>() << ": "
                  << response["status"].get<std::string>();
        if (!response["rank"].is_null()) {
          std::cout << " (rank " << response["rank"].get<std::size_t>() << ")";
        }
        std::cout << '\n';
      }
    } else if (*eval) {
      const auto set =
          embaudit::share(embaudit::load(eval_model.path, eval_model.options()));
      const auto dataset = embaudit::parse_dataset(eval_dataset);
      const embaudit::VocabView view(set, embaudit::Cutoff::parse(eval_cutoff),
                                     embaudit::ShapeRules::parse_csv(eval_rules));
      std::vector<embaudit::Algorithm> algorithms;
      for (const auto& name : eval_algos) {
        algorithms.push_back(configured_algorithm(
            name, eval_epsilon_opt, eval_epsilon, eval_raw_cosmul,
            eval_delta_opt, eval_delta));
      }
      std::vector<embaudit::EvalReport> reports;
      if (eval_mode == "both") {
        const auto rows = embaudit::compare_modes(view, dataset, algorithms);
        for (const auto& row : rows) {
          reports.push_back(row.constrained);
          reports.push_back(row.unconstrained);
        }
        if (!eval_jsonl) {
          std::cout << "model " << model_id(eval_model.path) << "  cutoff="
                    << view.cutoff().str() << "  dataset " << eval_dataset
                    << " (" << dataset.total() << " questions)\n";
          embaudit::print_comparison_table(std::cout, rows);
          std::cout << '\n';
        }
      } else {
        const auto mode = embaudit::parse_mode(eval_mode);
        for (const auto& algorithm : algorithms) {
          reports.push_back(embaudit::evaluate(view, dataset, algorithm, mode));
        }
      }
      for (const auto& report : reports) {
        if (eval_jsonl) {
          embaudit::write_report_jsonl(std::cout, report);
          continue;
        }
        std::cout << "model " << model_id(eval_model.path)
                  << "  algo=" << embaudit::algorithm_name(report.algorithm)
                  << "  mode=" << embaudit::mode_name(report.mode)
                  << "  cutoff=" << view.cutoff().str() << '\n';
        embaudit::print_report_table(std::cout, report);
        std::cout << '\n';
      }
    } else if (*audit_cmd) {
      const auto config = embaudit::service::load_job_config(audit_config);
      std::vector<embaudit::NamedSet> sets;
      const embaudit::LoadOptions options{
          embaudit::parse_format(audit_format), true, audit_lowercase};
      for (const auto& path : audit_models) {
        sets.push_back({model_id(path),
                        embaudit::share(embaudit::load(path, options))});
      }
      std::vector<json> reports;
      for (const auto& q : config.queries) {
        reports.push_back(embaudit::service::audit_report_json(
            embaudit::audit(q, sets, config.algorithm, config.mode,
                            config.view),
            config));
      }
      if (audit_as_json) {
        std::cout << json(reports).dump(2) << '\n';
      } else {
        std::cout << embaudit::service::render_audit(reports);
      }
    } else if (*sweep_cmd) {
      const auto config = embaudit::service::load_job_config(sweep_config);
      const auto state = load_state(sweep_model);
      std::vector<json> grids;
      for (const auto& q : config.queries) {
        grids.push_back(embaudit::service::sweep_json(
            *state, embaudit::service::sweep_body(config, q)));
      }
      if (sweep_as_json) {
        std::cout << json(grids).dump(2) << '\n';
      } else {
        for (const auto& g : grids) {
          std::cout << embaudit::service::render_sweep(g) << '\n';
        }
      }
    } else if (*serve) {
      auto state = load_state(serve_model);
      if (serve_cutoff_max > 0) state->cutoff_max = serve_cutoff_max;
      embaudit::service::Server server(state);
      if (!server.bind(serve_host, serve_port)) {
        std::cerr << "cannot bind " << serve_host << ":" << serve_port << '\n';
        return kExitIo;
      }
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "serving " << state->model_id << " (" << state->set->size()
                << " x " << state->set->dim() << ") on http://" << serve_host
                << ":" << serve_port << '\n';
      server.listen_after_bind();
      g_server = nullptr;
    } else if (*fixture) {
      const auto fx = embaudit::synthetic::offset_fixture();
      const std::filesystem::path dir(fixture_dir);
      std::filesystem::create_directories(dir);
      embaudit::save(*fx.set, dir / "fixture.bin",
                     embaudit::Format::kWord2VecBinary);
      std::ofstream out(dir / "fixture-analogies.txt");
      for (const auto& category : fx.dataset.categories) {
        out << ": " << category.name << '\n';
        for (const auto& q : category.quadruples) {
          out << q.a << ' ' << q.b << ' ' << q.c << ' ' << q.d << '\n';
        }
      }
      if (!out) throw embaudit::IoError("cannot write fixture analogies");
      std::cout << "wrote " << (dir / "fixture.bin").string() << " and "
                << (dir / "fixture-analogies.txt").string() << '\n';
    }
  } catch (const embaudit::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const embaudit::ResolutionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const embaudit::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const embaudit::service::RequestError& e) {
    std::cerr << "error (" << e.reason() << "): " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
