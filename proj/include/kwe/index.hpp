#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kwe/model.hpp"

namespace kwe {

enum class IndexMode {
  all_items,   // every vocabulary keyword
  test_items,  // only keywords annotated on test-split documents
};

std::string_view index_mode_name(IndexMode mode);

struct Neighbor {
  std::uint32_t keyword = 0;
  double score = 0.0;  // cosine similarity
};

// Exact brute-force cosine ranking over a fixed keyword universe. Rows are
// unit-normalized once at build time; queries are normalized per call, so
// scores are true cosines. No approximation anywhere.
class SimilarityIndex {
 public:
  static SimilarityIndex build(const Model<float>& model,
                               std::vector<std::uint32_t> keyword_ids,
                               IndexMode mode);

  // Top-k by descending cosine; ties broken by ascending keyword id.
  // `exclude` ids never appear in results. Query must be non-zero.
  std::vector<Neighbor> nearest(std::span<const float> query, std::size_t k,
                                std::span<const std::uint32_t> exclude = {}) const;
  std::vector<Neighbor> nearest(std::span<const double> query, std::size_t k,
                                std::span<const std::uint32_t> exclude = {}) const;

  const std::vector<std::uint32_t>& ids() const { return ids_; }
  bool contains(std::uint32_t keyword) const;
  IndexMode mode() const { return mode_; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(rows_.cols()); }
  std::size_t size() const { return ids_.size(); }
  std::uint32_t zero_norm_excluded() const { return zero_norm_excluded_; }

 private:
  std::vector<Neighbor> rank(const std::vector<double>& query, std::size_t k,
                             std::span<const std::uint32_t> exclude) const;

  Matrix<float> rows_;              // unit rows, parallel to ids_
  std::vector<std::uint32_t> ids_;  // ascending keyword ids
  IndexMode mode_ = IndexMode::all_items;
  std::uint32_t zero_norm_excluded_ = 0;
};

// Keyword universes for the two indexing modes.
std::vector<std::uint32_t> all_item_ids(const Vocab& vocab);
std::vector<std::uint32_t> test_item_ids(const Corpus& corpus,
                                         const Split& split,
                                         const Vocab& vocab);

}  // namespace kwe
