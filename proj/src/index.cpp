#include "kwe/index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kwe/error.hpp"

namespace kwe {

std::string_view index_mode_name(IndexMode mode) {
  return mode == IndexMode::all_items ? "all_items" : "test_items";
}

SimilarityIndex SimilarityIndex::build(const Model<float>& model,
                                       std::vector<std::uint32_t> keyword_ids,
                                       IndexMode mode) {
  if (keyword_ids.empty()) throw DataError("index: empty keyword set");
  std::sort(keyword_ids.begin(), keyword_ids.end());
  keyword_ids.erase(std::unique(keyword_ids.begin(), keyword_ids.end()),
                    keyword_ids.end());

  SimilarityIndex index;
  index.mode_ = mode;
  const std::uint32_t dim = model.dim();
  Matrix<float> rows(keyword_ids.size(), dim);
  std::size_t kept = 0;
  for (const auto id : keyword_ids) {
    const auto embedding = model.keyword_input_embedding(id);
    double norm_sq = 0.0;
    for (const auto v : embedding) norm_sq += static_cast<double>(v) * v;
    if (norm_sq == 0.0) {
      ++index.zero_norm_excluded_;
      continue;
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    auto row = rows.row(kept);
    for (std::uint32_t d = 0; d < dim; ++d)
      row[d] = static_cast<float>(static_cast<double>(embedding[d]) * inv_norm);
    index.ids_.push_back(id);
    ++kept;
  }
  if (kept == 0) throw DataError("index: all keywords had zero embeddings");

  index.rows_ = Matrix<float>(kept, dim);
  std::copy(rows.data(), rows.data() + kept * dim, index.rows_.data());
  return index;
}

bool SimilarityIndex::contains(std::uint32_t keyword) const {
  return std::binary_search(ids_.begin(), ids_.end(), keyword);
}

namespace {

std::vector<double> normalized_query(std::span<const double> query) {
  double norm_sq = 0.0;
  for (const auto v : query) norm_sq += v * v;
  if (norm_sq == 0.0 || !std::isfinite(norm_sq))
    throw NumericError("index: query vector is zero or non-finite");
  const double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> out(query.size());
  for (std::size_t d = 0; d < query.size(); ++d) out[d] = query[d] * inv;
  return out;
}

}  // namespace

std::vector<Neighbor> SimilarityIndex::rank(
    const std::vector<double>& query, std::size_t k,
    std::span<const std::uint32_t> exclude) const {
  if (k < 1) throw UsageError("index: k must be >= 1");
  if (query.size() != rows_.cols())
    throw UsageError("index: query dimension mismatch");

  const auto excluded = [&](std::uint32_t id) {
    return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
  };

  std::vector<Neighbor> candidates;
  candidates.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const std::uint32_t id = ids_[i];
    if (excluded(id)) continue;
    const auto row = rows_.row(i);
    double dot = 0.0;
    for (std::size_t d = 0; d < query.size(); ++d)
      dot += query[d] * static_cast<double>(row[d]);
    candidates.push_back({id, dot});
  }

  const std::size_t top = std::min(k, candidates.size());
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.keyword < b.keyword;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + top,
                    candidates.end(), better);
  candidates.resize(top);
  return candidates;
}

std::vector<Neighbor> SimilarityIndex::nearest(
    std::span<const float> query, std::size_t k,
    std::span<const std::uint32_t> exclude) const {
  std::vector<double> q(query.size());
  for (std::size_t d = 0; d < query.size(); ++d)
    q[d] = static_cast<double>(query[d]);
  return rank(normalized_query(q), k, exclude);
}

std::vector<Neighbor> SimilarityIndex::nearest(
    std::span<const double> query, std::size_t k,
    std::span<const std::uint32_t> exclude) const {
  return rank(normalized_query(query), k, exclude);
}

std::vector<std::uint32_t> all_item_ids(const Vocab& vocab) {
  std::vector<std::uint32_t> ids(vocab.keyword_count());
  for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return ids;
}

std::vector<std::uint32_t> test_item_ids(const Corpus& corpus,
                                         const Split& split,
                                         const Vocab& vocab) {
  std::set<std::uint32_t> ids;
  for (const auto doc_index : split.test_docs) {
    if (doc_index >= corpus.docs.size())
      throw DataError("test_item_ids: doc index out of range");
    for (const auto& kw : corpus.docs[doc_index].keywords)
      if (auto id = vocab.keyword_id(kw)) ids.insert(*id);
  }
  if (ids.empty()) throw DataError("test_item_ids: no test keywords in vocab");
  return {ids.begin(), ids.end()};
}

}  // namespace kwe
