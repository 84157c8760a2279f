#include <queue>
#include <sstream>

#include "doctest.h"
#include "kwe/error.hpp"
#include "kwe/graph.hpp"
#include "kwe/rng.hpp"

using namespace kwe;

namespace {

Corpus corpus_of(std::vector<std::vector<std::string>> docs) {
  Corpus c;
  for (std::size_t i = 0; i < docs.size(); ++i)
    c.docs.push_back({"d" + std::to_string(i), std::move(docs[i])});
  return c;
}

// Independent component labeling: breadth-first search, label = smallest
// member id, no union-find involved.
std::vector<std::uint32_t> bfs_components(const CooccurrenceGraph& g) {
  const std::uint32_t n = g.keyword_count();
  std::vector<std::uint32_t> label(n, n);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    std::vector<std::uint32_t> members;
    std::queue<std::uint32_t> q;
    q.push(s);
    label[s] = s;
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop();
      members.push_back(u);
      for (std::uint32_t v : g.adjacency[u]) {
        if (label[v] == n) {
          label[v] = s;
          q.push(v);
        }
      }
    }
    std::uint32_t smallest = members[0];
    for (std::uint32_t m : members) smallest = std::min(smallest, m);
    for (std::uint32_t m : members) label[m] = smallest;
  }
  return label;
}

}  // namespace

TEST_CASE("disjoint documents produce one component each") {
  const Corpus c = corpus_of({{"a", "b"}, {"c", "d"}, {"e", "f"}});
  const Vocab v = build_vocab(c);
  const auto g = build_graph(c, v);
  const auto labels = connected_components(g);
  const auto stats = component_stats(labels);
  CHECK(stats.component_count == 3);
  CHECK(stats.largest_size == 2);
  CHECK(stats.singleton_count == 0);
}

TEST_CASE("a shared keyword merges components") {
  const Corpus c = corpus_of({{"a", "b"}, {"b", "c"}, {"x", "y"}});
  const Vocab v = build_vocab(c);
  const auto labels = connected_components(build_graph(c, v));
  // a,b,c share a component labelled by the smallest member id.
  const auto id = [&](const char* k) { return *v.keyword_id(k); };
  CHECK(labels[id("a")] == labels[id("b")]);
  CHECK(labels[id("b")] == labels[id("c")]);
  CHECK(labels[id("a")] == std::min({id("a"), id("b"), id("c")}));
  CHECK(labels[id("x")] == labels[id("y")]);
  CHECK(labels[id("a")] != labels[id("x")]);
  CHECK(component_stats(labels).component_count == 2);
}

TEST_CASE("one-document corpus forms a single component") {
  const Corpus c = corpus_of({{"a", "b", "c"}});
  const Vocab v = build_vocab(c);
  const auto stats = component_stats(connected_components(build_graph(c, v)));
  CHECK(stats.component_count == 1);
  CHECK(stats.largest_fraction == doctest::Approx(1.0));
}

TEST_CASE("adjacency is sorted, deduplicated and symmetric") {
  const Corpus c = corpus_of({{"b", "a", "c"}, {"a", "c"}});
  const Vocab v = build_vocab(c);
  const auto g = build_graph(c, v);
  for (std::uint32_t k = 0; k < g.keyword_count(); ++k) {
    const auto& adj = g.adjacency[k];
    CHECK(std::is_sorted(adj.begin(), adj.end()));
    CHECK(std::adjacent_find(adj.begin(), adj.end()) == adj.end());
    for (std::uint32_t n : adj) {
      CHECK(n != k);
      CHECK(g.co_occur(n, k));
    }
  }
  CHECK(g.co_occur(*v.keyword_id("a"), *v.keyword_id("c")));
  CHECK(g.skipped_keywords == 0);
}

TEST_CASE("keywords filtered from the vocab are skipped and counted") {
  const Corpus c = corpus_of({{"common", "rare"}, {"common", "other"}});
  const Vocab v = build_vocab(c, 2);  // keeps only "common"
  const auto g = build_graph(c, v);
  CHECK(g.keyword_count() == 1);
  CHECK(g.skipped_keywords == 2);
  const auto stats = component_stats(connected_components(g));
  CHECK(stats.component_count == 1);
  CHECK(stats.singleton_count == 1);
}

TEST_CASE("document-subset graphs isolate unused keywords") {
  const Corpus c = corpus_of({{"a", "b"}, {"c", "d"}});
  const Vocab v = build_vocab(c);
  const auto g = build_graph(c, v, {0});
  const auto labels = connected_components(g);
  const auto stats = component_stats(labels);
  CHECK(stats.component_count == 3);  // {a,b} plus two singletons
  CHECK(stats.singleton_count == 2);
  CHECK(labels[*v.keyword_id("c")] == *v.keyword_id("c"));
}

TEST_CASE("component stats cover histogram and coverage fraction") {
  const Corpus c = corpus_of({{"a", "b", "c"}, {"d", "e"}, {"f", "g"}});
  const Vocab v = build_vocab(c);
  const auto stats = component_stats(connected_components(build_graph(c, v)));
  CHECK(stats.component_count == 3);
  CHECK(stats.largest_size == 3);
  CHECK(stats.largest_fraction == doctest::Approx(3.0 / 7.0));
  REQUIRE(stats.size_histogram.size() == 2);
  CHECK(stats.size_histogram.at(2) == 2);
  CHECK(stats.size_histogram.at(3) == 1);
}

TEST_CASE("component stats reject an empty labeling") {
  CHECK_THROWS_AS(component_stats({}), DataError);
}

TEST_CASE("union-find labels match breadth-first search on random graphs") {
  Rng rng(99);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::vector<std::string>> docs;
    const std::size_t n_docs = 2 + rng.below(8);
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::vector<std::string> kws;
      const std::size_t n_kws = 1 + rng.below(5);
      for (std::size_t k = 0; k < n_kws; ++k)
        kws.push_back("k" + std::to_string(rng.below(12)));
      docs.push_back(std::move(kws));
    }
    Corpus c;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      Document doc{"d" + std::to_string(i), {}};
      for (auto& kw : docs[i])
        if (std::find(doc.keywords.begin(), doc.keywords.end(), kw) ==
            doc.keywords.end())
          doc.keywords.push_back(kw);
      c.docs.push_back(std::move(doc));
    }
    const Vocab v = build_vocab(c);
    const auto g = build_graph(c, v);
    CHECK(connected_components(g) == bfs_components(g));
  }
}

TEST_CASE("labeling tsv lists id, keyword and component label") {
  const Corpus c = corpus_of({{"a", "b"}, {"z"}});
  const Vocab v = build_vocab(c);
  std::ostringstream out;
  write_labeling_tsv(connected_components(build_graph(c, v)), v, out);
  CHECK(out.str() == "0\ta\t0\n1\tb\t0\n2\tz\t2\n");
}
