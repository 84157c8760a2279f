#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kwe/index.hpp"

namespace kwe {

struct EvalReport {
  std::string task;  // "map20" or "mrr100"
  std::string mode;  // "all_items" or "test_items"
  std::vector<std::pair<std::string, double>> per_query;  // (query id, score)
  double aggregate = 0.0;  // mean of per-query scores
  std::uint64_t skipped = 0;
  std::map<std::string, std::uint64_t> skip_reasons;
};

// AP@cutoff = (sum of precision@i over relevant ranks i <= cutoff)
//             / min(|relevant|, cutoff).
// A perfect ranking scores 1.0 even when |relevant| exceeds the cutoff.
double average_precision(std::span<const std::uint32_t> ranking,
                         std::span<const std::uint32_t> relevant,
                         std::size_t cutoff);

// Document-keyword identification: every (test document, keyword) pair is a
// query; the document's other keywords in the index are relevant; the query
// keyword itself is excluded from candidates. Query ids are
// "<doc id>\t<keyword>".
EvalReport task1_map(const Model<float>& model, const Corpus& corpus,
                     const Split& split, IndexMode mode,
                     std::size_t cutoff = 20);

// Masked-keyword discovery over `n_docs` sampled test documents: one seeded
// masked keyword per document, candidates scored by the sum of cosines to
// the non-masked keywords (which are excluded from candidates), reciprocal
// rank zero beyond the cutoff. Query ids are document ids.
EvalReport task2_mrr(const Model<float>& model, const Corpus& corpus,
                     const Split& split, IndexMode mode, std::uint32_t n_docs,
                     std::uint64_t seed, std::size_t cutoff = 100);

void write_report_json(const EvalReport& report, std::ostream& out);
void write_report_json(const EvalReport& report, const std::string& path);
EvalReport read_report_json(std::istream& in, const std::string& name);
EvalReport read_report_json(const std::string& path);

}  // namespace kwe
