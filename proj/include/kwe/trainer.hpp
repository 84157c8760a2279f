#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "kwe/model.hpp"
#include "kwe/sampling.hpp"

namespace kwe {

struct EpochLog {
  std::uint32_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
};

struct TrainOptions {
  bool strict = true;  // sequential updates, bit-reproducible results
  std::uint32_t threads = 1;
  std::uint64_t combination_cap = 10'000;
  double validation_fraction = 0.1;
};

struct TrainResult {
  Model<float> model;
  std::vector<EpochLog> log;
  std::uint32_t best_epoch = 0;  // epoch restored by early stopping
  std::size_t train_examples_per_epoch = 0;
  std::size_t validation_examples = 0;
};

// Tracks the best validation loss; an epoch improves when it beats the best
// by more than min_delta. `stop` fires after `patience` epochs without
// improvement.
class EarlyStopper {
 public:
  EarlyStopper(std::uint32_t patience, double min_delta)
      : patience_(patience), min_delta_(min_delta) {}

  struct Verdict {
    bool improved = false;
    bool stop = false;
  };

  Verdict feed(double val_loss);
  double best() const { return best_; }

 private:
  std::uint32_t patience_;
  double min_delta_;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint32_t stale_epochs_ = 0;
};

// Full training loop: epoch streams from the generator, linear learning-rate
// decay across the planned example budget, optional early stopping on a 10%
// held-out example split with best-checkpoint restore.
TrainResult train(const Corpus& corpus, const Split& split, Vocab vocab,
                  const NegativeSampler& sampler, const ModelConfig& config,
                  const TrainOptions& options = {});

// One `epoch<TAB>train_loss<TAB>val_loss<TAB>lr` line per epoch.
void write_training_log(std::span<const EpochLog> log, std::ostream& out);

}  // namespace kwe
