#include "kwe/synthetic.hpp"

#include <array>
#include <unordered_set>
#include <utility>

#include "kwe/error.hpp"
#include "kwe/rng.hpp"

namespace kwe {

namespace {

constexpr std::array<char, 21> kConsonants = {
    'b', 'c', 'd', 'f', 'g', 'h', 'j', 'k', 'l', 'm', 'n',
    'p', 'q', 'r', 's', 't', 'v', 'w', 'x', 'y', 'z'};
constexpr std::array<char, 5> kVowels = {'a', 'e', 'i', 'o', 'u'};

constexpr std::uint64_t kSaltSynth = 0x73796e74;  // stream salt for generation

// Theme words are three letters: shorter than the smallest character n-gram,
// so a unique keyword decomposes into exactly two word units plus its own
// keyword unit and the co-occurrence signal is not diluted across dozens of
// subword slots.
std::string make_theme_word(Rng& rng) {
  std::string word;
  word.reserve(3);
  word += kConsonants[rng.below(kConsonants.size())];
  word += kVowels[rng.below(kVowels.size())];
  word += kConsonants[rng.below(kConsonants.size())];
  return word;
}

// Held-out words are long enough to produce character n-grams, so unseen
// strings still decompose into subword units.
std::string make_long_word(std::uint32_t syllables, Rng& rng) {
  std::string word;
  word.reserve(2 * syllables);
  for (std::uint32_t i = 0; i < syllables; ++i) {
    word += kConsonants[rng.below(kConsonants.size())];
    word += kVowels[rng.below(kVowels.size())];
  }
  return word;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.docs < 1 || spec.fields < 1 || spec.hubs_per_field < 1)
    throw UsageError("synthetic corpus: docs, fields and hubs must be >= 1");
  if (spec.hubs_per_doc > spec.hubs_per_field)
    throw UsageError("synthetic corpus: hubs_per_doc exceeds hubs_per_field");
  if (spec.min_unique > spec.max_unique)
    throw UsageError("synthetic corpus: min_unique exceeds max_unique");
  if (spec.theme_words < 2)
    throw UsageError("synthetic corpus: theme_words must be >= 2");
  if (spec.word_pool < spec.fields * (spec.theme_words + 1))
    throw UsageError(
        "synthetic corpus: word_pool too small for fields * theme_words");

  Rng rng(derive_seed(spec.seed, kSaltSynth));

  // Distinct three-letter words, sliced evenly across fields so word overlap
  // never crosses field boundaries.
  std::unordered_set<std::string> word_set;
  std::vector<std::string> pool;
  pool.reserve(spec.word_pool);
  int stall = 0;
  while (pool.size() < spec.word_pool) {
    std::string word = make_theme_word(rng);
    if (word_set.insert(word).second) {
      pool.push_back(std::move(word));
      stall = 0;
    } else if (++stall > 100000) {
      throw UsageError("synthetic corpus: word_pool exceeds distinct words");
    }
  }
  const std::uint32_t slice = spec.word_pool / spec.fields;

  // Hubs are single three-letter words too. Their word unit appears in no
  // other keyword, so a hub's embedding is learnable purely from
  // co-occurrence, like a keyword-level vector.
  std::unordered_set<std::string> used;
  std::vector<std::vector<std::string>> hubs(spec.fields);
  for (std::uint32_t f = 0; f < spec.fields; ++f) {
    hubs[f].reserve(spec.hubs_per_field);
    while (hubs[f].size() < spec.hubs_per_field) {
      std::string word = make_theme_word(rng);
      if (!word_set.insert(word).second) continue;
      used.insert(word);
      hubs[f].push_back(std::move(word));
    }
  }

  SyntheticCorpus result;
  result.corpus.docs.reserve(spec.docs);
  std::vector<std::uint32_t> docs_in_field(spec.fields, 0);
  for (std::uint32_t i = 0; i < spec.docs; ++i) {
    const std::uint32_t field = i % spec.fields;
    Document doc;
    doc.id = "d" + std::to_string(i);

    // Consecutive hub pairs walk a ring, so every hub of a field ends up in
    // one connected component no matter how many documents there are.
    const std::uint32_t start = docs_in_field[field]++ % spec.hubs_per_field;
    for (std::uint32_t h = 0; h < spec.hubs_per_doc; ++h)
      doc.keywords.push_back(hubs[field][(start + h) % spec.hubs_per_field]);

    // The first `bridge_docs` documents also carry one hub of the next
    // field. That chains the fields together, so the whole vocabulary forms
    // a single giant component (the shape real keyword corpora have) while
    // cross-field co-occurrence stays negligible.
    if (spec.fields > 1 && i < spec.bridge_docs && spec.hubs_per_doc > 0)
      doc.keywords.push_back(hubs[(field + 1) % spec.fields][0]);

    // The document theme: a few words from the field slice. Unique keywords
    // are word pairs from the theme, so keywords of the same document share
    // words far more often than keywords of different documents.
    std::vector<std::uint32_t> theme;
    theme.reserve(spec.theme_words);
    while (theme.size() < spec.theme_words) {
      const std::uint32_t w =
          field * slice + static_cast<std::uint32_t>(rng.below(slice));
      bool dup = false;
      for (std::uint32_t t : theme) dup = dup || t == w;
      if (!dup) theme.push_back(w);
    }

    const std::uint32_t unique =
        spec.min_unique +
        static_cast<std::uint32_t>(
            rng.below(spec.max_unique - spec.min_unique + std::uint64_t{1}));
    std::uint32_t made = 0;
    int tries = 0;
    while (made < unique) {
      if (++tries > 1000) {
        // The theme's pair space is exhausted by earlier documents; widen it.
        if (theme.size() >= slice)
          throw NumericError("synthetic corpus: keyword space exhausted");
        const std::uint32_t w =
            field * slice + static_cast<std::uint32_t>(rng.below(slice));
        bool dup = false;
        for (std::uint32_t t : theme) dup = dup || t == w;
        if (dup) continue;
        theme.push_back(w);
        tries = 0;
        continue;
      }
      const std::uint32_t a =
          theme[static_cast<std::uint32_t>(rng.below(theme.size()))];
      const std::uint32_t b =
          theme[static_cast<std::uint32_t>(rng.below(theme.size()))];
      if (a == b) continue;
      std::string keyword = pool[a] + ' ' + pool[b];
      if (!used.insert(keyword).second) continue;
      doc.keywords.push_back(std::move(keyword));
      ++made;
    }
    result.corpus.docs.push_back(std::move(doc));
  }

  // Held-out strings are word pairs built from long words outside every
  // pool, so they reach the model purely through character n-grams.
  result.held_out.reserve(spec.held_out);
  std::uint32_t made = 0;
  while (made < spec.held_out) {
    std::string a = make_long_word(4, rng);
    if (!word_set.insert(a).second) continue;
    std::string b = make_long_word(4, rng);
    if (!word_set.insert(b).second) continue;
    std::string keyword = a + ' ' + b;
    if (!used.insert(keyword).second) continue;
    result.held_out.push_back(std::move(keyword));
    ++made;
  }
  return result;
}

}  // namespace kwe
