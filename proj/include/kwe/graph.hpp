#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "kwe/corpus.hpp"

namespace kwe {

// Undirected co-occurrence graph over keyword ids: an edge connects two
// keywords iff they appear together in at least one document.
struct CooccurrenceGraph {
  // adjacency[k] holds the sorted, deduplicated neighbour ids of keyword k.
  std::vector<std::vector<std::uint32_t>> adjacency;
  // Keyword occurrences dropped because the keyword is not in the vocab.
  std::uint64_t skipped_keywords = 0;

  std::uint32_t keyword_count() const {
    return static_cast<std::uint32_t>(adjacency.size());
  }
  bool co_occur(std::uint32_t a, std::uint32_t b) const;
};

CooccurrenceGraph build_graph(const Corpus& corpus, const Vocab& vocab);

// Corpus restricted to a document subset (ascending indices into corpus.docs).
CooccurrenceGraph build_graph(const Corpus& corpus, const Vocab& vocab,
                              const std::vector<std::uint32_t>& doc_indices);

// labels[k] = id of the smallest keyword in k's connected component.
// Isolated keywords form singleton components labelled by themselves.
std::vector<std::uint32_t> connected_components(const CooccurrenceGraph& graph);

struct ComponentStats {
  std::uint32_t component_count = 0;
  std::uint32_t largest_size = 0;
  std::uint32_t singleton_count = 0;
  double largest_fraction = 0.0;
  // component size -> number of components of that size
  std::map<std::uint32_t, std::uint32_t> size_histogram;
};

ComponentStats component_stats(const std::vector<std::uint32_t>& labels);

// One `keyword_id \t component_label` line per keyword.
void write_labeling_tsv(const std::vector<std::uint32_t>& labels,
                        const Vocab& vocab, std::ostream& out);

}  // namespace kwe
