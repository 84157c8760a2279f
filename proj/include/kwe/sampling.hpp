#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kwe/corpus.hpp"
#include "kwe/graph.hpp"
#include "kwe/rng.hpp"

namespace kwe {

// One CBOW training example: predict `target` from the mean of `context`
// (w-1 keywords from the same document), against `negatives` (ns keywords).
// `fallback_negatives` marks examples whose negatives came from the
// never-co-occurring pool instead of a foreign graph component.
struct TrainingExample {
  std::uint32_t target = 0;
  std::vector<std::uint32_t> context;
  std::vector<std::uint32_t> negatives;
  bool fallback_negatives = false;
};

struct PositivePair {
  std::uint32_t target = 0;
  std::vector<std::uint32_t> context;
};

// C(n, k) clamped at `cap` so huge documents cannot overflow.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap);

// All (target, context) pairs of one document: for each keyword as target,
// every (w-1)-subset of the remaining keywords, subsets in lexicographic
// order over ascending ids. Documents with fewer than w keywords yield none.
std::vector<PositivePair> positive_samples(
    std::span<const std::uint32_t> doc_keywords, std::uint32_t w);

std::vector<PositivePair> positive_samples(const Document& doc,
                                           const Vocab& vocab, std::uint32_t w);

// Same, but each target contributes at most `cap` subsets; when the full
// count exceeds the cap, `cap` distinct subsets are sampled uniformly and
// listed in lexicographic order.
std::vector<PositivePair> positive_samples_capped(
    std::span<const std::uint32_t> doc_keywords, std::uint32_t w,
    std::uint64_t cap, Rng& rng);

enum class NegativeMode {
  component,  // negatives from foreign connected components
  uniform,    // ablation baseline: any keyword except the target
};

struct NegativeDraw {
  std::vector<std::uint32_t> ids;
  bool fallback = false;
};

// Uniform draws over the eligible pool, distinct within one example.
// Component mode falls back to the never-co-occurring pool when the
// target's component leaves fewer than ns candidates (single giant
// component); rejection sampling there is capped at 1000 tries.
class NegativeSampler {
 public:
  NegativeSampler(const CooccurrenceGraph& graph,
                  std::vector<std::uint32_t> labels,
                  NegativeMode mode = NegativeMode::component);

  NegativeDraw draw(std::uint32_t target, std::uint32_t ns, Rng& rng) const;

  NegativeMode mode() const { return mode_; }
  std::uint32_t component_of(std::uint32_t keyword) const {
    return labels_[keyword];
  }

 private:
  const CooccurrenceGraph* graph_;
  std::vector<std::uint32_t> labels_;
  NegativeMode mode_;
  std::vector<std::uint32_t> by_component_;  // ids grouped by component
  std::vector<std::uint32_t> range_lo_;      // per id: component range start
  std::vector<std::uint32_t> range_hi_;      // per id: component range end
};

struct SamplingConfig {
  std::uint32_t w = 3;
  std::uint32_t ns = 4;
  std::uint64_t combination_cap = 10'000;
  NegativeMode negative_mode = NegativeMode::component;
  bool validation_holdout = false;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
};

// Deterministic example streams over the train documents. The canonical
// pair list is built once; each epoch reshuffles it with an epoch-indexed
// seed and draws fresh negatives. Validation pairs (when held out) keep
// negatives frozen across epochs so the loss is comparable.
class ExampleGenerator {
 public:
  ExampleGenerator(const Corpus& corpus, const Split& split, const Vocab& vocab,
                   const NegativeSampler& sampler, SamplingConfig cfg);

  std::size_t pair_count() const { return targets_.size(); }
  std::size_t train_pair_count() const { return train_positions_.size(); }
  std::size_t validation_pair_count() const {
    return validation_positions_.size();
  }
  std::uint64_t skipped_oov_keywords() const { return skipped_oov_; }
  const SamplingConfig& config() const { return cfg_; }

  std::vector<TrainingExample> epoch_examples(std::uint32_t epoch) const;
  const std::vector<TrainingExample>& validation_examples() const {
    return validation_;
  }

 private:
  PositivePair pair_at(std::size_t position) const;

  SamplingConfig cfg_;
  const NegativeSampler* sampler_;
  std::vector<std::uint32_t> targets_;         // canonical pair list,
  std::vector<std::uint32_t> contexts_;        // contexts flattened (w-1 each)
  std::vector<std::size_t> train_positions_;   // ascending canonical indices
  std::vector<std::size_t> validation_positions_;
  std::vector<TrainingExample> validation_;    // frozen negatives
  std::uint64_t skipped_oov_ = 0;
};

// Debug dump: `target<TAB>ctx1,ctx2<TAB>neg1,...` per example.
void write_examples_tsv(std::span<const TrainingExample> examples,
                        std::ostream& out);

}  // namespace kwe
