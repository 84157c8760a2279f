#include "kwe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "kwe/error.hpp"
#include "kwe/rng.hpp"

namespace kwe {

namespace {

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20:
    case 0x85: case 0xa0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

// Simple one-to-one lowercase mapping for the scripts that show up in
// scientific keyword data. Unmapped codepoints pass through unchanged.
std::uint32_t lower_cp(std::uint32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20;  // Latin-1
  if (cp >= 0x100 && cp <= 0x137) {                              // Latin Ext-A
    if (cp == 0x130) return 0x69;  // dotted capital I -> i
    return cp | 1;
  }
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14a && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xff;  // Y with diaeresis
  if (cp >= 0x179 && cp <= 0x17e) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3ab && cp != 0x3a2) return cp + 0x20;  // Greek
  if (cp >= 0x410 && cp <= 0x42f) return cp + 0x20;                 // Cyrillic
  if (cp >= 0x400 && cp <= 0x40f) return cp + 0x50;
  return cp;
}

// Decodes one UTF-8 codepoint starting at `i`; on malformed input the single
// byte is passed through as a Latin-1 codepoint so normalization stays total.
std::uint32_t decode_cp(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  std::uint32_t cp = b0;
  if (b0 >= 0xf0) {
    len = 4;
    cp = b0 & 0x07u;
  } else if (b0 >= 0xe0) {
    len = 3;
    cp = b0 & 0x0fu;
  } else if (b0 >= 0xc0) {
    len = 2;
    cp = b0 & 0x1fu;
  }
  if (len == 1) {
    ++i;
    return cp;
  }
  if (i + len > s.size()) {
    ++i;
    return b0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xc0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3fu);
  }
  i += len;
  return cp;
}

void encode_cp(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

}  // namespace

std::string normalize_keyword(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::uint32_t cp = decode_cp(raw, i);
    if (is_space_cp(cp)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    encode_cp(lower_cp(cp), out);
  }
  return out;
}

std::vector<std::string> keyword_words(std::string_view keyword) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= keyword.size()) {
    const std::size_t pos = keyword.find(' ', start);
    if (pos == std::string_view::npos) {
      if (start < keyword.size()) words.emplace_back(keyword.substr(start));
      break;
    }
    if (pos > start) words.emplace_back(keyword.substr(start, pos - start));
    start = pos + 1;
  }
  return words;
}

std::optional<std::uint32_t> Vocab::keyword_id(std::string_view kw) const {
  auto it = keyword_ids.find(std::string(kw));
  if (it == keyword_ids.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Vocab::word_id(std::string_view w) const {
  auto it = word_ids.find(std::string(w));
  if (it == word_ids.end()) return std::nullopt;
  return it->second;
}

void Vocab::rebuild_maps() {
  keyword_ids.clear();
  word_ids.clear();
  for (std::uint32_t i = 0; i < keywords.size(); ++i) keyword_ids[keywords[i]] = i;
  for (std::uint32_t i = 0; i < words.size(); ++i) word_ids[words[i]] = i;
}

Corpus parse_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return parse_jsonl(in, path);
}

Corpus parse_jsonl(std::istream& in, const std::string& source_name) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> seen_ids;
  std::set<std::string> duplicate_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": malformed JSON: " + e.what());
    }
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (!obj.is_object()) throw DataError(where + ": line is not a JSON object");
    if (!obj.contains("id") || !obj["id"].is_string())
      throw DataError(where + ": missing string field 'id'");
    if (!obj.contains("keywords") || !obj["keywords"].is_array())
      throw DataError(where + ": missing array field 'keywords'");

    Document doc;
    doc.id = obj["id"].get<std::string>();
    std::unordered_set<std::string> dedupe;
    for (const auto& item : obj["keywords"]) {
      if (!item.is_string())
        throw DataError(where + ": 'keywords' entries must be strings");
      std::string kw = normalize_keyword(item.get<std::string>());
      if (kw.empty()) {
        ++corpus.dropped_empty_keywords;
        continue;
      }
      if (dedupe.insert(kw).second) doc.keywords.push_back(std::move(kw));
    }
    if (doc.keywords.empty())
      throw DataError(where + ": document '" + doc.id +
                      "' has no keywords after normalization");
    auto [it, inserted] = seen_ids.emplace(doc.id, line_no);
    if (!inserted) duplicate_ids.insert(doc.id);
    corpus.docs.push_back(std::move(doc));
  }
  if (!duplicate_ids.empty()) {
    std::string list;
    for (const auto& id : duplicate_ids) {
      if (!list.empty()) list += ", ";
      list += id;
    }
    throw DataError(source_name + ": duplicate document ids: " + list);
  }
  if (corpus.docs.empty()) throw DataError(source_name + ": no documents");
  return corpus;
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.docs) {
    nlohmann::json obj;
    obj["id"] = doc.id;
    obj["keywords"] = doc.keywords;
    out << obj.dump() << '\n';
  }
}

Vocab build_vocab(const Corpus& corpus, std::uint32_t min_count) {
  if (corpus.docs.empty()) throw DataError("build_vocab: empty corpus");
  if (min_count < 1) throw UsageError("build_vocab: min_count must be >= 1");

  std::vector<std::string> first_seen;
  std::unordered_map<std::string, std::uint32_t> df;
  for (const auto& doc : corpus.docs) {
    for (const auto& kw : doc.keywords) {
      auto [it, inserted] = df.emplace(kw, 1u);
      if (inserted)
        first_seen.push_back(kw);
      else
        ++it->second;
    }
  }

  Vocab vocab;
  for (auto& kw : first_seen) {
    const std::uint32_t count = df[kw];
    if (count < min_count) continue;
    vocab.keyword_ids.emplace(kw, vocab.keyword_count());
    vocab.keyword_df.push_back(count);
    vocab.keywords.push_back(std::move(kw));
  }
  for (const auto& kw : vocab.keywords) {
    for (const auto& word : keyword_words(kw)) {
      if (vocab.word_ids.emplace(word, vocab.word_count()).second)
        vocab.words.push_back(word);
    }
  }
  return vocab;
}

Split split_corpus(const Corpus& corpus, double test_fraction,
                   std::uint64_t seed) {
  if (corpus.docs.size() < 2)
    throw DataError("split_corpus: need at least 2 documents");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw UsageError("split_corpus: test_fraction must be in (0, 1)");

  const std::size_t n = corpus.docs.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(order);

  auto test_count = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * test_fraction));
  test_count = std::clamp<std::size_t>(test_count, 1, n - 1);

  Split split;
  split.seed = seed;
  split.test_docs.assign(order.begin(), order.begin() + test_count);
  split.train_docs.assign(order.begin() + test_count, order.end());
  std::sort(split.test_docs.begin(), split.test_docs.end());
  std::sort(split.train_docs.begin(), split.train_docs.end());
  return split;
}

void write_vocab_tsv(const Vocab& vocab, std::ostream& out) {
  for (std::uint32_t i = 0; i < vocab.keyword_count(); ++i)
    out << i << '\t' << vocab.keywords[i] << '\n';
}

}  // namespace kwe
