#include "kwe/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kwe/error.hpp"
#include "kwe/eval.hpp"
#include "kwe/graph.hpp"
#include "kwe/index.hpp"
#include "kwe/model_io.hpp"
#include "kwe/stats.hpp"
#include "kwe/trainer.hpp"

namespace kwe {
namespace {

void require_path(const std::string& value, const char* what) {
  if (value.empty())
    throw UsageError(std::string(what) + " path is required");
}

std::ofstream open_output(const std::string& path, const char* what) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw DataError(std::string(what) + ": cannot write '" + path + "'");
  return out;
}

// Every file-producing run leaves a key=value sidecar so it can be replayed.
void write_sidecar(const RunConfig& cfg, const std::string& artifact_path) {
  cfg.write(artifact_path + ".config");
}

IndexMode parse_index_mode(const std::string& mode) {
  if (mode == "all" || mode == "all_items") return IndexMode::all_items;
  if (mode == "test" || mode == "test_items") return IndexMode::test_items;
  throw UsageError("eval: mode must be all or test, got '" + mode + "'");
}

std::string report_name(const std::string& path,
                        const std::vector<std::string>& taken) {
  std::string stem = std::filesystem::path(path).stem().string();
  if (stem.empty()) stem = path;
  std::string name = stem;
  int suffix = 2;
  while (std::find(taken.begin(), taken.end(), name) != taken.end())
    name = stem + "#" + std::to_string(suffix++);
  return name;
}

void print_report_summary(const EvalReport& report, std::ostream& out) {
  out << report.task << " " << report.mode << ": " << std::setprecision(6)
      << std::fixed << report.aggregate << " over " << report.per_query.size()
      << " queries";
  if (report.skipped > 0) out << " (" << report.skipped << " skipped)";
  out << "\n";
  for (const auto& [reason, count] : report.skip_reasons) {
    if (reason == "sample_capped_to_eligible_documents")
      out << "warning: requested sample exceeds eligible documents; capped\n";
    else
      out << "note: " << reason << ": " << count << "\n";
  }
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

}  // namespace

Split training_split(const Corpus& corpus, const RunConfig& cfg) {
  if (cfg.train_scope == "all_docs") {
    Split split;
    split.seed = cfg.seed;
    split.train_docs.resize(corpus.docs.size());
    std::iota(split.train_docs.begin(), split.train_docs.end(), 0u);
    return split;
  }
  return evaluation_split(corpus, cfg);
}

Split evaluation_split(const Corpus& corpus, const RunConfig& cfg) {
  return split_corpus(corpus, cfg.test_fraction,
                      derive_seed(cfg.seed, kSaltSplit));
}

void cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.corpus_path, "ingest: input corpus");
  require_path(cfg.out_path, "ingest: output");
  const Corpus corpus = parse_jsonl(cfg.corpus_path);
  const Vocab vocab = build_vocab(corpus, cfg.min_count);

  {
    auto file = open_output(cfg.out_path, "ingest");
    write_corpus_jsonl(corpus, file);
  }
  {
    auto file = open_output(cfg.out_path + ".vocab.tsv", "ingest");
    write_vocab_tsv(vocab, file);
  }
  write_sidecar(cfg, cfg.out_path);

  std::size_t keyword_mentions = 0;
  for (const auto& doc : corpus.docs) keyword_mentions += doc.keywords.size();
  out << corpus.docs.size() << " documents\n";
  out << vocab.keyword_count() << " keywords (min_count=" << cfg.min_count
      << ")\n";
  out << vocab.word_count() << " words\n";
  out << keyword_mentions << " keyword mentions\n";
  out << corpus.dropped_empty_keywords << " empty keywords dropped\n";
}

void cmd_graph(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.corpus_path, "graph: corpus");
  const Corpus corpus = parse_jsonl(cfg.corpus_path);
  const Vocab vocab = build_vocab(corpus, cfg.min_count);
  const CooccurrenceGraph graph = build_graph(corpus, vocab);
  const std::vector<std::uint32_t> labels = connected_components(graph);
  const ComponentStats stats = component_stats(labels);

  out << vocab.keyword_count() << " keywords\n";
  out << stats.component_count << " components\n";
  out << "largest component: " << stats.largest_size << " keywords ("
      << std::setprecision(4) << std::fixed << stats.largest_fraction
      << " of vocabulary)\n";
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
  out << "singletons: " << stats.singleton_count << "\n";
  out << "size histogram (size\tcomponents):\n";
  for (const auto& [size, count] : stats.size_histogram)
    out << "  " << size << "\t" << count << "\n";

  if (!cfg.out_path.empty()) {
    auto file = open_output(cfg.out_path, "graph");
    write_labeling_tsv(labels, vocab, file);
    write_sidecar(cfg, cfg.out_path);
    out << "labeling written to " << cfg.out_path << "\n";
  }
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.corpus_path, "train: corpus");
  require_path(cfg.model_path, "train: model output");
  const ModelConfig model_cfg = cfg.model_config();

  const Corpus corpus = parse_jsonl(cfg.corpus_path);
  Vocab vocab = build_vocab(corpus, cfg.min_count);
  const CooccurrenceGraph graph = build_graph(corpus, vocab);
  std::vector<std::uint32_t> labels = connected_components(graph);
  const ComponentStats stats = component_stats(labels);
  const NegativeSampler sampler(graph, std::move(labels),
                                cfg.parse_negative_mode());
  const Split split = training_split(corpus, cfg);

  out << "variant: " << variant_name(model_cfg.variant) << "\n";
  out << "documents: " << corpus.docs.size() << " (" << split.train_docs.size()
      << " train)\n";
  out << "keywords: " << vocab.keyword_count() << ", components: "
      << stats.component_count << "\n";
  out << "negative mode: " << cfg.negative_mode << ", threads: "
      << (cfg.strict ? 1u : cfg.resolved_threads())
      << (cfg.strict ? " (strict)" : "") << "\n";

  TrainResult result = train(corpus, split, std::move(vocab), sampler,
                             model_cfg, cfg.train_options());

  save_model(result.model, cfg.model_path);
  {
    auto file = open_output(cfg.model_path + ".log", "train");
    write_training_log(result.log, file);
  }
  write_sidecar(cfg, cfg.model_path);

  out << "pairs per epoch: " << result.train_examples_per_epoch
      << " train, " << result.validation_examples << " validation\n";
  out << "epochs run: " << result.log.size();
  if (result.best_epoch > 0) out << ", best epoch: " << result.best_epoch;
  out << "\n";
  if (!result.log.empty()) {
    const EpochLog& last = result.log.back();
    out << std::setprecision(6) << "final train loss: " << last.train_loss
        << ", val loss: " << last.val_loss << "\n";
  }
  out << "model written to " << cfg.model_path << "\n";
}

void cmd_eval(const RunConfig& cfg, const std::string& task,
              const std::string& mode,
              const std::vector<std::string>& stats_reports,
              std::ostream& out) {
  if (!stats_reports.empty()) {
    if (stats_reports.size() < 2)
      throw UsageError("eval --stats needs at least two report files");
    cmd_stats(cfg, stats_reports, {}, out);
    return;
  }

  require_path(cfg.model_path, "eval: model");
  require_path(cfg.corpus_path, "eval: corpus");
  if (task.empty())
    throw UsageError("eval: task is required (map20 or mrr100)");

  const Model<float> model = load_model(cfg.model_path);
  const Corpus corpus = parse_jsonl(cfg.corpus_path);
  const Split split = evaluation_split(corpus, cfg);
  const IndexMode index_mode = parse_index_mode(mode);

  EvalReport report;
  if (task == "map20") {
    report = task1_map(model, corpus, split, index_mode);
  } else if (task == "mrr100") {
    report = task2_mrr(model, corpus, split, index_mode, cfg.n_docs, cfg.seed);
  } else {
    throw UsageError("eval: task must be map20 or mrr100, got '" + task + "'");
  }

  if (!cfg.report_path.empty()) {
    write_report_json(report, cfg.report_path);
    write_sidecar(cfg, cfg.report_path);
    print_report_summary(report, out);
    out << "report written to " << cfg.report_path << "\n";
  } else {
    write_report_json(report, out);
  }
}

void cmd_nn(const RunConfig& cfg, const std::string& keyword, std::uint32_t k,
            std::ostream& out) {
  require_path(cfg.model_path, "nn: model");
  if (keyword.empty()) throw UsageError("nn: keyword is required");
  if (k == 0) throw UsageError("nn: k must be positive");

  const Model<float> model = load_model(cfg.model_path);
  const SimilarityIndex index = SimilarityIndex::build(
      model, all_item_ids(model.vocab()), IndexMode::all_items);

  const std::string normalized = normalize_keyword(keyword);
  const std::vector<float> query = model.embed_text(keyword);
  std::vector<std::uint32_t> exclude;
  if (auto id = model.vocab().keyword_id(normalized)) exclude.push_back(*id);

  const std::vector<Neighbor> neighbors =
      index.nearest(std::span<const float>(query), k, exclude);

  out << "nearest neighbours of \"" << normalized << "\"";
  if (exclude.empty()) out << " (not in vocabulary; subword embedding)";
  out << ":\n";
  std::size_t rank = 1;
  for (const Neighbor& n : neighbors) {
    out << std::setw(3) << rank++ << "  " << std::setprecision(4) << std::fixed
        << n.score << "  " << model.vocab().keywords[n.keyword] << "\n";
  }
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

void cmd_stats(const RunConfig& cfg,
               const std::vector<std::string>& report_paths,
               std::vector<std::string> names, std::ostream& out) {
  if (report_paths.size() < 2)
    throw UsageError("stats: need at least two report files");
  if (!names.empty() && names.size() != report_paths.size())
    throw UsageError("stats: names count must match report count");

  std::vector<EvalReport> reports;
  reports.reserve(report_paths.size());
  for (const std::string& path : report_paths)
    reports.push_back(read_report_json(path));

  if (names.empty()) {
    for (const std::string& path : report_paths)
      names.push_back(report_name(path, names));
  }

  const ScoreMatrix matrix = score_matrix_from_reports(reports, names);
  std::ostringstream body;
  write_significance_report(matrix, cfg.permutations, cfg.seed, cfg.alpha,
                            body);
  out << body.str();
  if (!cfg.report_path.empty()) {
    auto file = open_output(cfg.report_path, "stats");
    file << body.str();
    write_sidecar(cfg, cfg.report_path);
    out << "report written to " << cfg.report_path << "\n";
  }
}

}  // namespace kwe
