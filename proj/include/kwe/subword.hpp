#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kwe/corpus.hpp"

namespace kwe {

std::uint64_t fnv1a64(std::string_view bytes);

// Character n-grams of one word: every contiguous codepoint substring of
// length n_min..n_max, except the whole word (that is a separate unit).
// Ordered by start position, then length ascending.
std::vector<std::string> char_ngrams(std::string_view word, std::uint32_t n_min,
                                     std::uint32_t n_max);

// FNV-1a 64-bit over UTF-8 bytes, reduced modulo B. Platform-independent.
std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t buckets);

struct SubwordConfig {
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 6;
  std::uint32_t max_ngrams = 20;  // cap on n-gram slots per keyword
  std::uint32_t max_words = 11;   // cap on words per keyword
  std::uint64_t ngram_buckets = 2'000'000;

  // Fixed decomposition length: n-grams + word units + whole-keyword unit.
  std::uint32_t total_slots() const { return max_ngrams + max_words + 1; }
};

// Single id space for all input units:
//   [0, B)                     n-gram buckets
//   [B, B+|words|)             word-sequence units
//   [B+|words|, B+|w|+|kw|)    keyword-sequence units
//   B+|words|+|keywords|       fill unit (zero weight, zero row)
struct UnitSpace {
  std::uint64_t ngram_buckets = 0;
  std::uint32_t word_count = 0;
  std::uint32_t keyword_count = 0;

  std::uint64_t rows() const {
    return ngram_buckets + word_count + keyword_count + 1;
  }
  std::uint64_t word_unit(std::uint32_t word_id) const {
    return ngram_buckets + word_id;
  }
  std::uint64_t keyword_unit(std::uint32_t keyword_id) const {
    return ngram_buckets + word_count + keyword_id;
  }
  std::uint64_t fill_unit() const {
    return ngram_buckets + word_count + keyword_count;
  }
};

UnitSpace make_unit_space(const Vocab& vocab, const SubwordConfig& cfg);

// Fixed-length decomposition. Non-fill slots come first (weight 1), fill
// slots pad the tail (weight 0), so weight_sum() == non_fill.
struct UnitDecomposition {
  std::vector<std::uint64_t> slots;
  std::vector<float> weights;
  std::uint32_t non_fill = 0;

  float weight_sum() const { return static_cast<float>(non_fill); }
};

// Keywords longer than max_words are truncated to their first max_words
// words before any unit is produced. OOV words contribute n-grams only;
// OOV keywords get no keyword-sequence unit.
UnitDecomposition decompose(std::string_view keyword, const Vocab& vocab,
                            const UnitSpace& space, const SubwordConfig& cfg);

// Precomputed table indexed by keyword id; built once, read-only afterwards.
std::vector<UnitDecomposition> decompose_all(const Vocab& vocab,
                                             const UnitSpace& space,
                                             const SubwordConfig& cfg);

}  // namespace kwe
