#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kwe {

/// One keyword-annotated document. Keywords are normalized, deduplicated,
/// and kept in first-seen order.
struct Document {
  std::string id;
  std::vector<std::string> keywords;
};

struct Corpus {
  std::vector<Document> docs;
  /// Keywords that normalized to the empty string and were dropped at parse.
  std::size_t dropped_empty_keywords = 0;
};

/// Dense-id vocabularies over keywords and the words inside them.
/// Ids are assigned in first-seen corpus order, so vocabularies are
/// reproducible byte-for-byte from the same corpus.
struct Vocab {
  std::vector<std::string> keywords;  // keyword id -> string
  std::vector<std::string> words;     // word id -> string
  std::vector<std::uint32_t> keyword_df;
  std::unordered_map<std::string, std::uint32_t> keyword_ids;
  std::unordered_map<std::string, std::uint32_t> word_ids;

  std::uint32_t keyword_count() const {
    return static_cast<std::uint32_t>(keywords.size());
  }
  std::uint32_t word_count() const {
    return static_cast<std::uint32_t>(words.size());
  }

  std::optional<std::uint32_t> keyword_id(std::string_view kw) const;
  std::optional<std::uint32_t> word_id(std::string_view w) const;

  /// Rebuilds the lookup maps from the id -> string vectors.
  void rebuild_maps();
};

/// Disjoint train/test partition of document indices (ascending order).
struct Split {
  std::vector<std::uint32_t> train_docs;
  std::vector<std::uint32_t> test_docs;
  std::uint64_t seed = 0;
};

/// Lowercases (simple case mapping over Latin, Greek and Cyrillic ranges;
/// other codepoints pass through), collapses whitespace runs to a single
/// space, and strips leading/trailing whitespace. Returns "" for
/// all-whitespace input; callers drop such keywords.
std::string normalize_keyword(std::string_view raw);

/// Splits a normalized keyword on single spaces.
std::vector<std::string> keyword_words(std::string_view keyword);

/// Parses JSONL with one object per line: {"id": str, "keywords": [str,...]}.
/// Extra fields (title, abstract, ...) are ignored. Throws DataError with the
/// offending line number on malformed rows, and on duplicate document ids.
Corpus parse_jsonl(const std::string& path);
Corpus parse_jsonl(std::istream& in, const std::string& source_name);

/// Writes the canonical normalized JSONL form.
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);

/// Keeps keywords whose document frequency is >= min_count (default 1 keeps
/// everything). Word ids cover every word of every kept keyword.
Vocab build_vocab(const Corpus& corpus, std::uint32_t min_count = 1);

/// Seeded shuffle then partition. Deterministic for fixed
/// (corpus, test_fraction, seed); both sides are always non-empty.
Split split_corpus(const Corpus& corpus, double test_fraction,
                   std::uint64_t seed);

/// One "id<TAB>keyword" line per entry, ids ascending.
void write_vocab_tsv(const Vocab& vocab, std::ostream& out);

}  // namespace kwe
