#include "kwe/subword.hpp"

#include <algorithm>

#include "kwe/error.hpp"

namespace kwe {

namespace {

// Byte offsets of codepoint starts, plus one-past-the-end. N-grams are
// taken over codepoints so multibyte characters are never split.
std::vector<std::size_t> codepoint_starts(std::string_view s) {
  std::vector<std::size_t> starts;
  starts.reserve(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xc0) != 0x80) starts.push_back(i);
  }
  starts.push_back(s.size());
  return starts;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::string> char_ngrams(std::string_view word, std::uint32_t n_min,
                                     std::uint32_t n_max) {
  if (n_min < 1 || n_min > n_max)
    throw UsageError("char_ngrams: need 1 <= n_min <= n_max");
  std::vector<std::string> grams;
  if (word.empty()) return grams;

  const auto starts = codepoint_starts(word);
  const std::size_t len = starts.size() - 1;  // codepoint count
  if (len < 2) return grams;                  // whole word is excluded

  // Substrings of length n == len would equal the whole word; skip them.
  const std::size_t top = std::min<std::size_t>(n_max, len - 1);
  for (std::size_t s = 0; s < len; ++s)
    for (std::size_t n = n_min; n <= top && s + n <= len; ++n)
      grams.emplace_back(word.substr(starts[s], starts[s + n] - starts[s]));
  return grams;
}

std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t buckets) {
  if (buckets < 1) throw UsageError("hash_ngram: buckets must be >= 1");
  return fnv1a64(ngram) % buckets;
}

UnitSpace make_unit_space(const Vocab& vocab, const SubwordConfig& cfg) {
  if (cfg.ngram_buckets < 1)
    throw UsageError("unit space: ngram_buckets must be >= 1");
  UnitSpace space;
  space.ngram_buckets = cfg.ngram_buckets;
  space.word_count = vocab.word_count();
  space.keyword_count = vocab.keyword_count();
  return space;
}

UnitDecomposition decompose(std::string_view keyword, const Vocab& vocab,
                            const UnitSpace& space, const SubwordConfig& cfg) {
  if (keyword.empty()) throw DataError("decompose: empty keyword");

  auto words = keyword_words(keyword);
  if (words.empty()) throw DataError("decompose: keyword has no words");
  if (words.size() > cfg.max_words) words.resize(cfg.max_words);

  UnitDecomposition dec;
  const std::uint32_t total = cfg.total_slots();
  dec.slots.reserve(total);

  for (const auto& word : words) {
    if (dec.slots.size() >= cfg.max_ngrams) break;
    for (const auto& gram : char_ngrams(word, cfg.n_min, cfg.n_max)) {
      if (dec.slots.size() >= cfg.max_ngrams) break;
      dec.slots.push_back(hash_ngram(gram, space.ngram_buckets));
    }
  }
  for (const auto& word : words) {
    if (auto id = vocab.word_id(word)) dec.slots.push_back(space.word_unit(*id));
  }
  if (auto id = vocab.keyword_id(keyword))
    dec.slots.push_back(space.keyword_unit(*id));

  dec.non_fill = static_cast<std::uint32_t>(dec.slots.size());
  if (dec.non_fill == 0)
    throw DataError("decompose: no units for keyword '" + std::string(keyword) +
                    "'");
  dec.slots.resize(total, space.fill_unit());
  dec.weights.assign(total, 0.0f);
  std::fill(dec.weights.begin(), dec.weights.begin() + dec.non_fill, 1.0f);
  return dec;
}

std::vector<UnitDecomposition> decompose_all(const Vocab& vocab,
                                             const UnitSpace& space,
                                             const SubwordConfig& cfg) {
  std::vector<UnitDecomposition> table;
  table.reserve(vocab.keyword_count());
  for (const auto& kw : vocab.keywords)
    table.push_back(decompose(kw, vocab, space, cfg));
  return table;
}

}  // namespace kwe
