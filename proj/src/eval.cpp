#include "kwe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "kwe/error.hpp"
#include "kwe/rng.hpp"

namespace kwe {

double average_precision(std::span<const std::uint32_t> ranking,
                         std::span<const std::uint32_t> relevant,
                         std::size_t cutoff) {
  if (cutoff < 1) throw UsageError("average_precision: cutoff must be >= 1");
  if (relevant.empty())
    throw DataError("average_precision: empty relevant set");

  const auto is_relevant = [&](std::uint32_t id) {
    return std::find(relevant.begin(), relevant.end(), id) != relevant.end();
  };

  double sum = 0.0;
  std::size_t hits = 0;
  const std::size_t depth = std::min(cutoff, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (!is_relevant(ranking[i])) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(relevant.size(), cutoff));
}

namespace {

// Vocabulary-resolved keyword ids of a document, document order.
std::vector<std::uint32_t> doc_keyword_ids(const Document& doc,
                                           const Vocab& vocab) {
  std::vector<std::uint32_t> ids;
  ids.reserve(doc.keywords.size());
  for (const auto& kw : doc.keywords)
    if (auto id = vocab.keyword_id(kw)) ids.push_back(*id);
  return ids;
}

void finalize(EvalReport& report) {
  if (report.per_query.empty())
    throw DataError("evaluation produced no queries (task " + report.task +
                    ", mode " + report.mode + ")");
  double sum = 0.0;
  for (const auto& [id, score] : report.per_query) sum += score;
  report.aggregate = sum / static_cast<double>(report.per_query.size());
}

}  // namespace

EvalReport task1_map(const Model<float>& model, const Corpus& corpus,
                     const Split& split, IndexMode mode, std::size_t cutoff) {
  const auto& vocab = model.vocab();
  auto universe = mode == IndexMode::all_items
                      ? all_item_ids(vocab)
                      : test_item_ids(corpus, split, vocab);
  const auto index = SimilarityIndex::build(model, std::move(universe), mode);

  EvalReport report;
  report.task = "map" + std::to_string(cutoff);
  report.mode = std::string(index_mode_name(mode));
  if (index.zero_norm_excluded() > 0)
    report.skip_reasons["keywords_with_zero_embedding_excluded_from_index"] +=
        index.zero_norm_excluded();

  for (const auto doc_index : split.test_docs) {
    const auto& doc = corpus.docs[doc_index];
    auto ids = doc_keyword_ids(doc, vocab);
    std::sort(ids.begin(), ids.end());
    for (const auto query : ids) {
      std::vector<std::uint32_t> relevant;
      for (const auto other : ids)
        if (other != query && index.contains(other)) relevant.push_back(other);
      if (relevant.empty()) {
        ++report.skipped;
        ++report.skip_reasons["no_relevant_keywords_in_index"];
        continue;
      }
      const auto embedding = model.keyword_input_embedding(query);
      std::vector<Neighbor> neighbors;
      try {
        const std::uint32_t exclude[] = {query};
        neighbors = index.nearest(std::span<const float>(embedding), cutoff,
                                  exclude);
      } catch (const NumericError&) {
        ++report.skipped;
        ++report.skip_reasons["query_embedding_zero"];
        continue;
      }
      std::vector<std::uint32_t> ranking;
      ranking.reserve(neighbors.size());
      for (const auto& n : neighbors) ranking.push_back(n.keyword);
      const double ap = average_precision(ranking, relevant, cutoff);
      report.per_query.emplace_back(doc.id + "\t" + vocab.keywords[query], ap);
    }
  }
  finalize(report);
  return report;
}

EvalReport task2_mrr(const Model<float>& model, const Corpus& corpus,
                     const Split& split, IndexMode mode, std::uint32_t n_docs,
                     std::uint64_t seed, std::size_t cutoff) {
  if (n_docs < 1) throw UsageError("task2: n_docs must be >= 1");
  const auto& vocab = model.vocab();
  auto universe = mode == IndexMode::all_items
                      ? all_item_ids(vocab)
                      : test_item_ids(corpus, split, vocab);
  const auto index = SimilarityIndex::build(model, std::move(universe), mode);

  EvalReport report;
  report.task = "mrr" + std::to_string(cutoff);
  report.mode = std::string(index_mode_name(mode));
  if (index.zero_norm_excluded() > 0)
    report.skip_reasons["keywords_with_zero_embedding_excluded_from_index"] +=
        index.zero_norm_excluded();

  std::vector<std::uint32_t> eligible;
  for (const auto doc_index : split.test_docs) {
    const auto ids = doc_keyword_ids(corpus.docs[doc_index], vocab);
    if (ids.size() >= 2) {
      eligible.push_back(doc_index);
    } else {
      ++report.skipped;
      ++report.skip_reasons["document_has_fewer_than_two_keywords"];
    }
  }
  if (eligible.empty())
    throw DataError("task2: no test documents with at least two keywords");

  if (n_docs < eligible.size()) {
    Rng rng(derive_seed(seed, kSaltTask2Sample));
    rng.shuffle(eligible);
    eligible.resize(n_docs);
    std::sort(eligible.begin(), eligible.end());
  } else if (n_docs > eligible.size()) {
    report.skip_reasons["sample_capped_to_eligible_documents"] = 1;
  }

  const std::uint32_t dim = model.dim();
  for (const auto doc_index : eligible) {
    const auto& doc = corpus.docs[doc_index];
    const auto ids = doc_keyword_ids(doc, vocab);

    Rng mask_rng(derive_seed(seed, kSaltTask2Mask, doc_index));
    const auto masked_pos = static_cast<std::size_t>(mask_rng.below(ids.size()));
    const std::uint32_t masked = ids[masked_pos];
    std::vector<std::uint32_t> queries;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (i != masked_pos) queries.push_back(ids[i]);

    // Sum of unit query vectors: dotting candidates against it equals the
    // sum of per-query cosines.
    std::vector<double> fused(dim, 0.0);
    std::size_t used = 0;
    for (const auto q : queries) {
      const auto embedding = model.keyword_input_embedding(q);
      double norm_sq = 0.0;
      for (const auto v : embedding) norm_sq += static_cast<double>(v) * v;
      if (norm_sq == 0.0) {
        ++report.skip_reasons["query_embedding_zero"];
        continue;
      }
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (std::uint32_t d = 0; d < dim; ++d)
        fused[d] += static_cast<double>(embedding[d]) * inv;
      ++used;
    }
    if (used == 0) {
      ++report.skipped;
      ++report.skip_reasons["all_query_embeddings_zero"];
      continue;
    }

    double rr = 0.0;
    if (!index.contains(masked)) {
      ++report.skip_reasons["masked_keyword_absent_from_index"];
    } else {
      std::vector<Neighbor> neighbors;
      try {
        neighbors = index.nearest(std::span<const double>(fused), cutoff,
                                  queries);
      } catch (const NumericError&) {
        ++report.skipped;
        ++report.skip_reasons["fused_query_zero"];
        continue;
      }
      for (std::size_t rank = 0; rank < neighbors.size(); ++rank) {
        if (neighbors[rank].keyword == masked) {
          rr = 1.0 / static_cast<double>(rank + 1);
          break;
        }
      }
    }
    report.per_query.emplace_back(doc.id, rr);
  }
  finalize(report);
  return report;
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  nlohmann::json j;
  j["task"] = report.task;
  j["mode"] = report.mode;
  j["aggregate"] = report.aggregate;
  j["skipped"] = report.skipped;
  j["skip_reasons"] = report.skip_reasons;
  auto& arr = j["per_query"] = nlohmann::json::array();
  for (const auto& [id, score] : report.per_query)
    arr.push_back({{"id", id}, {"score", score}});
  out << j.dump(2) << '\n';
}

void write_report_json(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open report file for writing: " + path);
  write_report_json(report, out);
}

EvalReport read_report_json(std::istream& in, const std::string& name) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(name + ": malformed report JSON: " + e.what());
  }
  EvalReport report;
  try {
    report.task = j.at("task").get<std::string>();
    report.mode = j.at("mode").get<std::string>();
    report.aggregate = j.at("aggregate").get<double>();
    report.skipped = j.at("skipped").get<std::uint64_t>();
    if (j.contains("skip_reasons"))
      report.skip_reasons =
          j["skip_reasons"].get<std::map<std::string, std::uint64_t>>();
    for (const auto& entry : j.at("per_query"))
      report.per_query.emplace_back(entry.at("id").get<std::string>(),
                                    entry.at("score").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(name + ": report JSON missing fields: " + e.what());
  }
  return report;
}

EvalReport read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report file: " + path);
  return read_report_json(in, path);
}

}  // namespace kwe
