#include "kwe/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "kwe/error.hpp"

namespace kwe {

EarlyStopper::Verdict EarlyStopper::feed(double val_loss) {
  Verdict verdict;
  if (best_ - val_loss > min_delta_) {
    best_ = val_loss;
    stale_epochs_ = 0;
    verdict.improved = true;
  } else {
    ++stale_epochs_;
  }
  verdict.stop = stale_epochs_ >= patience_;
  return verdict;
}

TrainResult train(const Corpus& corpus, const Split& split, Vocab vocab,
                  const NegativeSampler& sampler, const ModelConfig& config,
                  const TrainOptions& options) {
  config.validate();

  SamplingConfig sampling;
  sampling.w = config.w;
  sampling.ns = config.ns;
  sampling.combination_cap = options.combination_cap;
  sampling.negative_mode = sampler.mode();
  sampling.validation_holdout = config.early_stopping.enabled;
  sampling.validation_fraction = options.validation_fraction;
  sampling.seed = config.seed;
  ExampleGenerator generator(corpus, split, vocab, sampler, sampling);

  TrainResult result{Model<float>(config, std::move(vocab)),
                     {},
                     0,
                     generator.train_pair_count(),
                     generator.validation_pair_count()};
  auto& model = result.model;
  if (config.epochs == 0) return result;

  const double planned = static_cast<double>(config.epochs) *
                         static_cast<double>(generator.train_pair_count());
  const auto lr_at = [&](std::size_t examples_seen) {
    const double frac = std::min(1.0, static_cast<double>(examples_seen) / planned);
    return std::max(config.lr_final,
                    config.lr_initial + (config.lr_final - config.lr_initial) * frac);
  };

  const auto& validation = generator.validation_examples();
  const auto validation_loss = [&]() {
    double sum = 0.0;
    for (const auto& example : validation) sum += model.example_loss(example);
    return sum / static_cast<double>(validation.size());
  };

  EarlyStopper stopper(config.early_stopping.patience,
                       config.early_stopping.min_delta);
  Matrix<float> best_input, best_output;
  bool have_checkpoint = false;

  std::size_t examples_seen = 0;
  double current_lr = config.lr_initial;
  for (std::uint32_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto examples = generator.epoch_examples(epoch - 1);
    double loss_sum = 0.0;
    for (std::size_t lo = 0; lo < examples.size(); lo += config.batch_size) {
      const std::size_t hi =
          std::min(examples.size(), lo + std::size_t{config.batch_size});
      current_lr = lr_at(examples_seen);
      const std::span<const TrainingExample> batch{examples.data() + lo,
                                                   hi - lo};
      const double batch_loss =
          options.strict ? model.train_step(batch, current_lr)
                         : model.train_step(batch, current_lr, options.threads);
      loss_sum += batch_loss * static_cast<double>(batch.size());
      examples_seen += batch.size();
    }
    const double train_loss = loss_sum / static_cast<double>(examples.size());
    const double val_loss =
        validation.empty() ? train_loss : validation_loss();
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
      throw NumericError("training diverged at epoch " + std::to_string(epoch));
    result.log.push_back({epoch, train_loss, val_loss, current_lr});

    if (config.early_stopping.enabled) {
      const auto verdict = stopper.feed(val_loss);
      if (verdict.improved) {
        best_input = model.input_matrix();
        best_output = model.output_matrix();
        have_checkpoint = true;
        result.best_epoch = epoch;
      }
      if (verdict.stop) break;
    }
  }

  if (config.early_stopping.enabled && have_checkpoint) {
    model.input_matrix() = std::move(best_input);
    model.output_matrix() = std::move(best_output);
  }
  if (!model.all_finite())
    throw NumericError("trained model contains non-finite values");
  return result;
}

void write_training_log(std::span<const EpochLog> log, std::ostream& out) {
  std::ostringstream line;
  line.precision(12);
  for (const auto& entry : log) {
    line.str("");
    line << entry.epoch << '\t' << entry.train_loss << '\t' << entry.val_loss
         << '\t' << entry.lr << '\n';
    out << line.str();
  }
}

}  // namespace kwe
