#include "kwe/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "kwe/error.hpp"

namespace kwe {

namespace {

constexpr std::uint32_t kFallbackTryCap = 1000;

// Enumerates (w-1)-subsets of `pool` (ascending ids) in lexicographic order.
void enumerate_subsets(const std::vector<std::uint32_t>& pool, std::uint32_t r,
                       std::uint32_t target,
                       std::vector<PositivePair>& out) {
  const std::size_t m = pool.size();
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0u);
  while (true) {
    PositivePair pair;
    pair.target = target;
    pair.context.reserve(r);
    for (const auto i : idx) pair.context.push_back(pool[i]);
    out.push_back(std::move(pair));

    std::size_t k = r;
    while (k > 0 && idx[k - 1] == m - r + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Uniform r-subset of `pool` as a sorted id vector (partial Fisher-Yates).
std::vector<std::uint32_t> random_subset(std::vector<std::uint32_t>& scratch,
                                         std::uint32_t r, Rng& rng) {
  const std::size_t m = scratch.size();
  for (std::uint32_t i = 0; i < r; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(scratch[i], scratch[j]);
  }
  std::vector<std::uint32_t> subset(scratch.begin(), scratch.begin() + r);
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;  // exact: prefix products divisible
    if (result > cap) return cap;
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<PositivePair> positive_samples(
    std::span<const std::uint32_t> doc_keywords, std::uint32_t w) {
  if (w < 2) throw UsageError("positive_samples: w must be >= 2");
  std::vector<PositivePair> pairs;
  const std::uint32_t r = w - 1;
  if (doc_keywords.size() < w) return pairs;

  for (const auto target : doc_keywords) {
    std::vector<std::uint32_t> pool;
    pool.reserve(doc_keywords.size() - 1);
    for (const auto id : doc_keywords)
      if (id != target) pool.push_back(id);
    std::sort(pool.begin(), pool.end());
    enumerate_subsets(pool, r, target, pairs);
  }
  return pairs;
}

std::vector<PositivePair> positive_samples(const Document& doc,
                                           const Vocab& vocab,
                                           std::uint32_t w) {
  std::vector<std::uint32_t> ids;
  ids.reserve(doc.keywords.size());
  for (const auto& kw : doc.keywords)
    if (auto id = vocab.keyword_id(kw)) ids.push_back(*id);
  return positive_samples(ids, w);
}

std::vector<PositivePair> positive_samples_capped(
    std::span<const std::uint32_t> doc_keywords, std::uint32_t w,
    std::uint64_t cap, Rng& rng) {
  if (w < 2) throw UsageError("positive_samples: w must be >= 2");
  if (cap < 1) throw UsageError("positive_samples: cap must be >= 1");
  std::vector<PositivePair> pairs;
  const std::uint32_t r = w - 1;
  if (doc_keywords.size() < w) return pairs;

  const std::uint64_t per_target =
      binomial_capped(doc_keywords.size() - 1, r, cap + 1);
  for (const auto target : doc_keywords) {
    std::vector<std::uint32_t> pool;
    pool.reserve(doc_keywords.size() - 1);
    for (const auto id : doc_keywords)
      if (id != target) pool.push_back(id);
    std::sort(pool.begin(), pool.end());

    if (per_target <= cap) {
      enumerate_subsets(pool, r, target, pairs);
      continue;
    }
    // Sample `cap` distinct subsets, then list them lexicographically so the
    // stream order does not depend on draw order.
    std::set<std::vector<std::uint32_t>> chosen;
    while (chosen.size() < cap) chosen.insert(random_subset(pool, r, rng));
    for (const auto& subset : chosen) {
      PositivePair pair;
      pair.target = target;
      pair.context = subset;
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

NegativeSampler::NegativeSampler(const CooccurrenceGraph& graph,
                                 std::vector<std::uint32_t> labels,
                                 NegativeMode mode)
    : graph_(&graph), labels_(std::move(labels)), mode_(mode) {
  const auto n = static_cast<std::uint32_t>(labels_.size());
  if (n == 0) throw DataError("negative sampler: empty labeling");
  if (graph.keyword_count() != n)
    throw DataError("negative sampler: graph/labeling size mismatch");

  by_component_.resize(n);
  std::iota(by_component_.begin(), by_component_.end(), 0u);
  std::sort(by_component_.begin(), by_component_.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return std::tie(labels_[a], a) < std::tie(labels_[b], b);
            });
  range_lo_.resize(n);
  range_hi_.resize(n);
  std::size_t lo = 0;
  while (lo < n) {
    std::size_t hi = lo;
    while (hi < n && labels_[by_component_[hi]] == labels_[by_component_[lo]])
      ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      range_lo_[by_component_[i]] = static_cast<std::uint32_t>(lo);
      range_hi_[by_component_[i]] = static_cast<std::uint32_t>(hi);
    }
    lo = hi;
  }
}

NegativeDraw NegativeSampler::draw(std::uint32_t target, std::uint32_t ns,
                                   Rng& rng) const {
  if (ns < 1) throw UsageError("negative sampler: ns must be >= 1");
  const auto n = static_cast<std::uint32_t>(labels_.size());
  if (target >= n) throw DataError("negative sampler: target out of range");

  NegativeDraw draw;
  draw.ids.reserve(ns);
  auto already_drawn = [&](std::uint32_t id) {
    return std::find(draw.ids.begin(), draw.ids.end(), id) != draw.ids.end();
  };

  if (mode_ == NegativeMode::uniform) {
    if (n - 1 < ns)
      throw DataError("negative sampler: vocabulary too small for ns");
    while (draw.ids.size() < ns) {
      const auto id = static_cast<std::uint32_t>(rng.below(n));
      if (id == target || already_drawn(id)) continue;
      draw.ids.push_back(id);
    }
    return draw;
  }

  const std::uint32_t lo = range_lo_[target];
  const std::uint32_t hi = range_hi_[target];
  const std::uint32_t outside = n - (hi - lo);
  if (outside >= ns) {
    // Uniform over the two id ranges flanking the target's component.
    while (draw.ids.size() < ns) {
      auto j = static_cast<std::uint32_t>(rng.below(outside));
      if (j >= lo) j += hi - lo;
      const std::uint32_t id = by_component_[j];
      if (already_drawn(id)) continue;
      draw.ids.push_back(id);
    }
    return draw;
  }

  // Fallback: the component covers nearly the whole vocabulary. Negatives
  // come from keywords that never co-occur with the target.
  draw.fallback = true;
  std::uint32_t tries = 0;
  while (draw.ids.size() < ns) {
    if (++tries > kFallbackTryCap)
      throw DataError(
          "negative sampler: cannot find non-co-occurring negatives for "
          "keyword id " +
          std::to_string(target));
    const auto id = static_cast<std::uint32_t>(rng.below(n));
    if (id == target || already_drawn(id) || graph_->co_occur(target, id))
      continue;
    draw.ids.push_back(id);
  }
  return draw;
}

ExampleGenerator::ExampleGenerator(const Corpus& corpus, const Split& split,
                                   const Vocab& vocab,
                                   const NegativeSampler& sampler,
                                   SamplingConfig cfg)
    : cfg_(cfg), sampler_(&sampler) {
  if (cfg_.w < 2) throw UsageError("example generator: w must be >= 2");
  if (cfg_.ns < 1) throw UsageError("example generator: ns must be >= 1");
  if (cfg_.validation_fraction < 0.0 || cfg_.validation_fraction >= 1.0)
    throw UsageError("example generator: validation_fraction must be in [0,1)");

  Rng combo_rng(derive_seed(cfg_.seed, kSaltComboGuard));
  for (const auto doc_index : split.train_docs) {
    if (doc_index >= corpus.docs.size())
      throw DataError("example generator: train doc index out of range");
    const auto& doc = corpus.docs[doc_index];
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.keywords.size());
    for (const auto& kw : doc.keywords) {
      if (auto id = vocab.keyword_id(kw))
        ids.push_back(*id);
      else
        ++skipped_oov_;
    }
    auto pairs =
        positive_samples_capped(ids, cfg_.w, cfg_.combination_cap, combo_rng);
    for (auto& pair : pairs) {
      targets_.push_back(pair.target);
      contexts_.insert(contexts_.end(), pair.context.begin(),
                       pair.context.end());
    }
  }
  if (targets_.empty())
    throw DataError("example generator: no training examples (all documents "
                    "have fewer than w keywords)");

  const std::size_t pairs = targets_.size();
  std::size_t val_count = 0;
  if (cfg_.validation_holdout && pairs >= 2) {
    const auto want = static_cast<std::size_t>(
        std::llround(static_cast<double>(pairs) * cfg_.validation_fraction));
    val_count = std::clamp<std::size_t>(want, 1, pairs - 1);
  }

  std::vector<std::size_t> order(pairs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (val_count > 0) {
    Rng val_rng(derive_seed(cfg_.seed, kSaltValidation));
    val_rng.shuffle(order);
  }
  validation_positions_.assign(order.begin(), order.begin() + val_count);
  train_positions_.assign(order.begin() + val_count, order.end());
  std::sort(validation_positions_.begin(), validation_positions_.end());
  std::sort(train_positions_.begin(), train_positions_.end());

  Rng neg_rng(derive_seed(cfg_.seed, kSaltValNegatives));
  validation_.reserve(val_count);
  for (const auto pos : validation_positions_) {
    auto pair = pair_at(pos);
    auto negs = sampler_->draw(pair.target, cfg_.ns, neg_rng);
    TrainingExample ex;
    ex.target = pair.target;
    ex.context = std::move(pair.context);
    ex.negatives = std::move(negs.ids);
    ex.fallback_negatives = negs.fallback;
    validation_.push_back(std::move(ex));
  }
}

PositivePair ExampleGenerator::pair_at(std::size_t position) const {
  const std::uint32_t r = cfg_.w - 1;
  PositivePair pair;
  pair.target = targets_[position];
  const auto* base = contexts_.data() + position * r;
  pair.context.assign(base, base + r);
  return pair;
}

std::vector<TrainingExample> ExampleGenerator::epoch_examples(
    std::uint32_t epoch) const {
  Rng rng(derive_seed(cfg_.seed, kSaltEpoch, epoch));
  auto order = train_positions_;
  rng.shuffle(order);

  std::vector<TrainingExample> examples;
  examples.reserve(order.size());
  for (const auto pos : order) {
    auto pair = pair_at(pos);
    auto negs = sampler_->draw(pair.target, cfg_.ns, rng);
    TrainingExample ex;
    ex.target = pair.target;
    ex.context = std::move(pair.context);
    ex.negatives = std::move(negs.ids);
    ex.fallback_negatives = negs.fallback;
    examples.push_back(std::move(ex));
  }
  return examples;
}

void write_examples_tsv(std::span<const TrainingExample> examples,
                        std::ostream& out) {
  auto write_list = [&](const std::vector<std::uint32_t>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i > 0) out << ',';
      out << ids[i];
    }
  };
  for (const auto& ex : examples) {
    out << ex.target << '\t';
    write_list(ex.context);
    out << '\t';
    write_list(ex.negatives);
    out << '\n';
  }
}

}  // namespace kwe
