#include "kwe/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "kwe/error.hpp"

namespace kwe {

namespace {

// Union-find with union by size and path compression.
class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

CooccurrenceGraph build_graph_impl(const Corpus& corpus, const Vocab& vocab,
                                   const std::vector<std::uint32_t>* subset) {
  CooccurrenceGraph graph;
  graph.adjacency.resize(vocab.keyword_count());

  auto add_doc = [&](const Document& doc) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.keywords.size());
    for (const auto& kw : doc.keywords) {
      if (auto id = vocab.keyword_id(kw))
        ids.push_back(*id);
      else
        ++graph.skipped_keywords;
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        graph.adjacency[ids[i]].push_back(ids[j]);
        graph.adjacency[ids[j]].push_back(ids[i]);
      }
  };

  if (subset) {
    for (const auto idx : *subset) {
      if (idx >= corpus.docs.size())
        throw DataError("build_graph: document index out of range");
      add_doc(corpus.docs[idx]);
    }
  } else {
    for (const auto& doc : corpus.docs) add_doc(doc);
  }

  for (auto& neighbours : graph.adjacency) {
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()),
                     neighbours.end());
  }
  return graph;
}

}  // namespace

bool CooccurrenceGraph::co_occur(std::uint32_t a, std::uint32_t b) const {
  if (a >= adjacency.size() || b >= adjacency.size()) return false;
  const auto& na = adjacency[a];
  return std::binary_search(na.begin(), na.end(), b);
}

CooccurrenceGraph build_graph(const Corpus& corpus, const Vocab& vocab) {
  return build_graph_impl(corpus, vocab, nullptr);
}

CooccurrenceGraph build_graph(const Corpus& corpus, const Vocab& vocab,
                              const std::vector<std::uint32_t>& doc_indices) {
  return build_graph_impl(corpus, vocab, &doc_indices);
}

std::vector<std::uint32_t> connected_components(
    const CooccurrenceGraph& graph) {
  const std::uint32_t n = graph.keyword_count();
  DisjointSets sets(n);
  for (std::uint32_t k = 0; k < n; ++k)
    for (const auto neighbour : graph.adjacency[k]) sets.unite(k, neighbour);

  // Labels are the smallest member id of each component, which is stable
  // across union orders.
  std::vector<std::uint32_t> labels(n);
  std::unordered_map<std::uint32_t, std::uint32_t> smallest;
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t root = sets.find(k);
    auto [it, inserted] = smallest.emplace(root, k);
    if (!inserted && k < it->second) it->second = k;
  }
  for (std::uint32_t k = 0; k < n; ++k) labels[k] = smallest[sets.find(k)];
  return labels;
}

ComponentStats component_stats(const std::vector<std::uint32_t>& labels) {
  if (labels.empty()) throw DataError("component_stats: empty labeling");
  std::unordered_map<std::uint32_t, std::uint32_t> sizes;
  for (const auto label : labels) ++sizes[label];
  ComponentStats stats;
  stats.component_count = static_cast<std::uint32_t>(sizes.size());
  for (const auto& [label, size] : sizes) {
    stats.largest_size = std::max(stats.largest_size, size);
    if (size == 1) ++stats.singleton_count;
    ++stats.size_histogram[size];
  }
  stats.largest_fraction =
      static_cast<double>(stats.largest_size) / static_cast<double>(labels.size());
  return stats;
}

void write_labeling_tsv(const std::vector<std::uint32_t>& labels,
                        const Vocab& vocab, std::ostream& out) {
  if (labels.size() != vocab.keyword_count())
    throw DataError("write_labeling_tsv: label count does not match vocab");
  for (std::uint32_t k = 0; k < labels.size(); ++k)
    out << k << '\t' << vocab.keywords[k] << '\t' << labels[k] << '\n';
}

}  // namespace kwe
