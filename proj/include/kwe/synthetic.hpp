#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwe/corpus.hpp"

namespace kwe {

// Deterministic keyword-annotated corpus with the shape of a scientific
// abstract collection: a few thousand documents, most keywords annotated on
// exactly one document, and a small set of recurring "hub" keywords per
// topical field. Every document carries `hubs_per_doc` hubs of its field
// (chained so each field is internally connected) plus several unique
// two-word keywords. Each document draws a small word theme from its
// field's slice of the pool and builds its unique keywords from that theme,
// so keywords of one document share words the way real keyword phrases
// share technical terms, while cross-document word overlap stays rare.
// A handful of bridge documents link neighbouring fields, so the
// co-occurrence graph has the giant-component structure of real corpora;
// set bridge_docs=0 for fully disjoint fields.
struct SyntheticSpec {
  std::uint32_t docs = 2000;
  std::uint32_t fields = 8;
  std::uint32_t hubs_per_field = 40;
  std::uint32_t hubs_per_doc = 2;
  std::uint32_t bridge_docs = 8;  // documents that also cite the next field
  std::uint32_t min_unique = 4;    // unique keywords per document
  std::uint32_t max_unique = 6;
  std::uint32_t word_pool = 1600;  // distinct theme words, sliced per field
  std::uint32_t theme_words = 4;   // words a document's keywords draw from
  std::uint32_t held_out = 20;    // extra never-used keyword strings
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  Corpus corpus;
  // Keyword strings in corpus style that appear in no document; used to
  // exercise the out-of-vocabulary paths.
  std::vector<std::string> held_out;
};

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace kwe
