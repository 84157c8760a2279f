#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kwe/commands.hpp"
#include "kwe/error.hpp"

namespace {

// The config file loads before any flag binding so that command-line flags
// always override file values, regardless of argument order.
kwe::RunConfig preload_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      return kwe::RunConfig::from_file(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0)
      return kwe::RunConfig::from_file(arg.substr(9));
  }
  return {};
}

void add_model_flags(CLI::App* cmd, kwe::RunConfig& cfg) {
  cmd->add_option("--variant", cfg.variant, "Model variant")
      ->check(CLI::IsMember({"keywords2vec", "fastkeywords"}));
  cmd->add_option("--dim", cfg.dim, "Embedding dimensionality");
  cmd->add_option("--w", cfg.w, "Context window (w-1 context keywords)");
  cmd->add_option("--ns", cfg.ns, "Negatives per example");
  cmd->add_option("--epochs", cfg.epochs, "Maximum training epochs");
  cmd->add_option("--batch-size", cfg.batch_size,
                  "Examples per scheduling batch (0 = variant default)");
  cmd->add_option("--lr", cfg.lr_initial, "Initial learning rate");
  cmd->add_option("--lr-final", cfg.lr_final, "Final learning rate");
  cmd->add_flag("--early-stopping,!--no-early-stopping", cfg.early_stopping,
                "Stop when validation loss stalls");
  cmd->add_option("--patience", cfg.patience,
                  "Stale epochs tolerated before stopping");
  cmd->add_option("--min-delta", cfg.min_delta,
                  "Minimum validation improvement");
  cmd->add_option("--buckets", cfg.buckets, "Character n-gram hash buckets");
  cmd->add_option("--n-min", cfg.n_min, "Shortest character n-gram");
  cmd->add_option("--n-max", cfg.n_max, "Longest character n-gram");
  cmd->add_option("--max-ngrams", cfg.max_ngrams,
                  "N-gram slots per keyword decomposition");
  cmd->add_option("--max-words", cfg.max_words, "Words kept per keyword");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keyword embeddings: graph-aware training, retrieval and "
               "evaluation"};
  app.require_subcommand(1);

  kwe::RunConfig cfg;
  try {
    cfg = preload_config(argc, argv);
  } catch (const kwe::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value run configuration (flags override file values)")
      ->check(CLI::ExistingFile);

  auto* ingest = app.add_subcommand(
      "ingest", "Normalize a corpus into canonical JSONL and report stats");
  ingest->add_option("--in,--corpus", cfg.corpus_path, "Input JSONL corpus");
  ingest->add_option("--out", cfg.out_path, "Canonical corpus output path");
  ingest->add_option("--min-count", cfg.min_count,
                     "Minimum keyword document frequency");

  auto* graph = app.add_subcommand(
      "graph", "Report co-occurrence connected-component structure");
  graph->add_option("--corpus", cfg.corpus_path, "Corpus JSONL");
  graph->add_option("--out", cfg.out_path, "Component labeling TSV output");
  graph->add_option("--min-count", cfg.min_count,
                    "Minimum keyword document frequency");

  auto* train = app.add_subcommand("train", "Train an embedding model");
  train->add_option("--corpus", cfg.corpus_path, "Corpus JSONL");
  train->add_option("--model", cfg.model_path, "Model output path");
  train->add_option("--min-count", cfg.min_count,
                    "Minimum keyword document frequency");
  train->add_option("--seed", cfg.seed, "Run seed");
  train->add_option("--test-fraction", cfg.test_fraction,
                    "Held-out document fraction");
  train->add_option("--train-scope", cfg.train_scope,
                    "Documents used for training examples")
      ->check(CLI::IsMember({"all_docs", "train_split"}));
  train->add_option("--negative-mode", cfg.negative_mode,
                    "Negative sampling mode")
      ->check(CLI::IsMember({"component", "uniform"}));
  train->add_flag("--strict", cfg.strict,
                  "Sequential updates; bit-reproducible for a fixed seed");
  train->add_option("--threads", cfg.threads,
                    "Worker threads (0 = KWS_THREADS env, then hardware)");
  train->add_option("--combination-cap", cfg.combination_cap,
                    "Max context subsets per target keyword");
  train->add_option("--validation-fraction", cfg.validation_fraction,
                    "Training pairs held out for validation loss");
  add_model_flags(train, cfg);

  auto* eval = app.add_subcommand(
      "eval", "Evaluate a model or compare per-query reports");
  std::string task;
  std::string mode = "test";
  std::vector<std::string> stats_reports;
  eval->add_option("--model", cfg.model_path, "Trained model file");
  eval->add_option("--corpus", cfg.corpus_path, "Corpus JSONL");
  eval->add_option("--task", task, "Evaluation task")
      ->check(CLI::IsMember({"map20", "mrr100"}));
  eval->add_option("--mode", mode, "Candidate universe")
      ->check(CLI::IsMember({"all", "test"}));
  eval->add_option("--report", cfg.report_path, "Per-query report JSON output");
  eval->add_option("--stats", stats_reports,
                   "Compare two or more per-query reports instead");
  eval->add_option("--n-docs", cfg.n_docs,
                   "Documents sampled for the masked-keyword task");
  eval->add_option("--seed", cfg.seed, "Run seed");
  eval->add_option("--test-fraction", cfg.test_fraction,
                   "Held-out document fraction");
  eval->add_option("--permutations", cfg.permutations,
                   "Permutation draws for --stats");
  eval->add_option("--alpha", cfg.alpha, "Significance level for --stats");

  auto* nn = app.add_subcommand("nn", "Nearest neighbours of a keyword");
  std::string keyword;
  std::uint32_t k = 10;
  nn->add_option("--model", cfg.model_path, "Trained model file");
  nn->add_option("keyword", keyword, "Query keyword (quoted phrase)");
  nn->add_option("--k", k, "Neighbours to return");

  auto* stats = app.add_subcommand(
      "stats", "Significance tests across per-query reports");
  std::vector<std::string> report_paths;
  std::vector<std::string> names;
  stats->add_option("reports", report_paths, "Two or more report JSON files");
  stats->add_option("--names", names, "System names (one per report)");
  stats->add_option("--permutations", cfg.permutations, "Permutation draws");
  stats->add_option("--alpha", cfg.alpha, "Significance level");
  stats->add_option("--seed", cfg.seed, "Run seed");
  stats->add_option("--report", cfg.report_path, "Report output path");

  // --config may appear after the subcommand name; let it reach the root app.
  for (auto* sub : {ingest, graph, train, eval, nn, stats}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      kwe::cmd_ingest(cfg, std::cout);
    } else if (*graph) {
      kwe::cmd_graph(cfg, std::cout);
    } else if (*train) {
      kwe::cmd_train(cfg, std::cout);
    } else if (*eval) {
      kwe::cmd_eval(cfg, task, mode, stats_reports, std::cout);
    } else if (*nn) {
      kwe::cmd_nn(cfg, keyword, k, std::cout);
    } else if (*stats) {
      kwe::cmd_stats(cfg, report_paths, names, std::cout);
    }
  } catch (const kwe::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const kwe::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kwe::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
