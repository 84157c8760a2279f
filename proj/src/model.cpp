#include "kwe/model.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kwe/rng.hpp"

namespace kwe {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// softplus(x) = log(1 + e^x), stable at both tails.
// -log sigmoid(s) == softplus(-s).
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

std::string_view variant_name(Variant variant) {
  return variant == Variant::keywords2vec ? "keywords2vec" : "fastkeywords";
}

Variant parse_variant(std::string_view name) {
  if (name == "keywords2vec") return Variant::keywords2vec;
  if (name == "fastkeywords") return Variant::fastkeywords;
  throw UsageError("unknown variant '" + std::string(name) +
                   "' (expected keywords2vec or fastkeywords)");
}

void ModelConfig::validate() const {
  if (dim < 1) throw UsageError("model config: dim must be >= 1");
  if (w < 2) throw UsageError("model config: w must be >= 2");
  if (ns < 1) throw UsageError("model config: ns must be >= 1");
  if (!(lr_initial > 0.0)) throw UsageError("model config: lr_initial must be > 0");
  if (!(lr_final > 0.0) || lr_final > lr_initial)
    throw UsageError("model config: need 0 < lr_final <= lr_initial");
  if (batch_size < 1) throw UsageError("model config: batch_size must be >= 1");
  if (variant == Variant::fastkeywords) {
    if (subword.n_min < 1 || subword.n_min > subword.n_max)
      throw UsageError("model config: need 1 <= n_min <= n_max");
    if (subword.max_ngrams < 1 || subword.max_words < 1)
      throw UsageError("model config: subword caps must be >= 1");
    if (subword.ngram_buckets < 1)
      throw UsageError("model config: ngram_buckets must be >= 1");
  }
}

ModelConfig default_config(Variant variant) {
  ModelConfig cfg;
  cfg.variant = variant;
  cfg.batch_size = variant == Variant::fastkeywords ? (1u << 15) : (1u << 17);
  return cfg;
}

template <typename Scalar>
Model<Scalar>::Model(ModelConfig cfg, Vocab vocab)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {
  cfg_.validate();
  if (cfg_.variant == Variant::fastkeywords) {
    space_ = make_unit_space(vocab_, cfg_.subword);
    table_ = decompose_all(vocab_, space_, cfg_.subword);
  }
  init_matrices();
}

template <typename Scalar>
Model<Scalar>::Model(ModelConfig cfg, Vocab vocab,
                     std::vector<UnitDecomposition> table)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)), table_(std::move(table)) {
  cfg_.validate();
  if (cfg_.variant != Variant::fastkeywords)
    throw UsageError("decomposition table only applies to fastkeywords");
  if (table_.size() != vocab_.keyword_count())
    throw DataError("decomposition table size does not match vocab");
  space_ = make_unit_space(vocab_, cfg_.subword);
  init_matrices();
}

template <typename Scalar>
Model<Scalar> Model<Scalar>::from_parts(ModelConfig cfg, Vocab vocab,
                                        Matrix<Scalar> input,
                                        Matrix<Scalar> output) {
  cfg.validate();
  Model model(std::move(cfg), std::move(vocab), PartsTag{});
  const std::size_t want_input_rows =
      model.cfg_.variant == Variant::fastkeywords
          ? static_cast<std::size_t>(model.space_.rows())
          : model.vocab_.keyword_count();
  if (input.rows() != want_input_rows || input.cols() != model.cfg_.dim)
    throw DataError("input matrix shape does not match config and vocab");
  if (output.rows() != model.vocab_.keyword_count() ||
      output.cols() != model.cfg_.dim)
    throw DataError("output matrix shape does not match config and vocab");
  model.input_ = std::move(input);
  model.output_ = std::move(output);
  return model;
}

template <typename Scalar>
Model<Scalar>::Model(ModelConfig cfg, Vocab vocab, PartsTag)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {
  if (cfg_.variant == Variant::fastkeywords) {
    space_ = make_unit_space(vocab_, cfg_.subword);
    table_ = decompose_all(vocab_, space_, cfg_.subword);
  }
}

template <typename Scalar>
void Model<Scalar>::init_matrices() {
  const std::size_t input_rows =
      cfg_.variant == Variant::fastkeywords
          ? static_cast<std::size_t>(space_.rows())
          : vocab_.keyword_count();
  if (input_rows == 0) throw DataError("model: empty vocabulary");
  input_ = Matrix<Scalar>(input_rows, cfg_.dim);
  output_ = Matrix<Scalar>(vocab_.keyword_count(), cfg_.dim);

  Rng rng(derive_seed(cfg_.seed, kSaltInit));
  const double scale = 1.0 / static_cast<double>(cfg_.dim);
  Scalar* data = input_.data();
  for (std::size_t i = 0; i < input_.size(); ++i)
    data[i] = static_cast<Scalar>((rng.unit() - 0.5) * scale);
  if (cfg_.variant == Variant::fastkeywords) {
    auto fill_row = input_.row(space_.fill_unit());
    std::fill(fill_row.begin(), fill_row.end(), Scalar{0});
  }
}

template <typename Scalar>
typename Model<Scalar>::Scratch Model<Scalar>::make_scratch() const {
  Scratch s;
  s.h.resize(cfg_.dim);
  s.grad_h.resize(cfg_.dim);
  s.tmp.resize(cfg_.dim);
  s.scores.resize(std::size_t{cfg_.ns} + 1);
  return s;
}

template <typename Scalar>
void Model<Scalar>::compose_keyword(std::uint32_t id, std::span<double> tmp,
                                    std::span<double> acc) const {
  const std::uint32_t dim = cfg_.dim;
  if (cfg_.variant == Variant::keywords2vec) {
    if (id >= input_.rows())
      throw DataError("model: keyword id out of range");
    const auto row = input_.row(id);
    for (std::uint32_t d = 0; d < dim; ++d)
      acc[d] += static_cast<double>(row[d]);
    return;
  }
  if (id >= table_.size()) throw DataError("model: keyword id out of range");
  const auto& dec = table_[id];
  if (dec.non_fill == 0)
    throw DataError("model: keyword id " + std::to_string(id) +
                    " has no input units");
  std::fill(tmp.begin(), tmp.end(), 0.0);
  for (std::uint32_t i = 0; i < dec.non_fill; ++i) {
    const auto row = input_.row(dec.slots[i]);
    const double weight = dec.weights[i];
    for (std::uint32_t d = 0; d < dim; ++d)
      tmp[d] += weight * static_cast<double>(row[d]);
  }
  const double wsum = dec.weight_sum();
  for (std::uint32_t d = 0; d < dim; ++d) acc[d] += tmp[d] / wsum;
}

template <typename Scalar>
void Model<Scalar>::apply_input_gradient(std::uint32_t id, double coef,
                                         std::span<const double> grad,
                                         double lr) {
  const std::uint32_t dim = cfg_.dim;
  if (cfg_.variant == Variant::keywords2vec) {
    auto row = input_.row(id);
    for (std::uint32_t d = 0; d < dim; ++d)
      row[d] = static_cast<Scalar>(static_cast<double>(row[d]) -
                                   lr * coef * grad[d]);
    return;
  }
  const auto& dec = table_[id];
  const double wsum = dec.weight_sum();
  for (std::uint32_t i = 0; i < dec.non_fill; ++i) {
    auto row = input_.row(dec.slots[i]);
    const double c = coef * dec.weights[i] / wsum;
    for (std::uint32_t d = 0; d < dim; ++d)
      row[d] = static_cast<Scalar>(static_cast<double>(row[d]) -
                                   lr * c * grad[d]);
  }
}

template <typename Scalar>
std::vector<Scalar> Model<Scalar>::keyword_input_embedding(
    std::uint32_t keyword_id) const {
  if (keyword_id >= vocab_.keyword_count())
    throw DataError("model: keyword id out of range");
  std::vector<double> acc(cfg_.dim, 0.0), tmp(cfg_.dim);
  compose_keyword(keyword_id, tmp, acc);
  std::vector<Scalar> out(cfg_.dim);
  for (std::uint32_t d = 0; d < cfg_.dim; ++d)
    out[d] = static_cast<Scalar>(acc[d]);
  return out;
}

template <typename Scalar>
std::vector<Scalar> Model<Scalar>::embed_text(
    std::string_view raw_keyword) const {
  const std::string keyword = normalize_keyword(raw_keyword);
  if (keyword.empty()) throw DataError("model: empty keyword");
  if (auto id = vocab_.keyword_id(keyword))
    return keyword_input_embedding(*id);
  if (cfg_.variant == Variant::keywords2vec)
    throw DataError("keyword '" + keyword +
                    "' is not in the vocabulary and this model variant has "
                    "no subword units to embed unseen keywords");

  const auto dec = decompose(keyword, vocab_, space_, cfg_.subword);
  std::vector<double> acc(cfg_.dim, 0.0);
  for (std::uint32_t i = 0; i < dec.non_fill; ++i) {
    const auto row = input_.row(dec.slots[i]);
    const double weight = dec.weights[i];
    for (std::uint32_t d = 0; d < cfg_.dim; ++d)
      acc[d] += weight * static_cast<double>(row[d]);
  }
  const double wsum = dec.weight_sum();
  std::vector<Scalar> out(cfg_.dim);
  for (std::uint32_t d = 0; d < cfg_.dim; ++d)
    out[d] = static_cast<Scalar>(acc[d] / wsum);
  return out;
}

template <typename Scalar>
std::vector<Scalar> Model<Scalar>::context_embedding(
    std::span<const std::uint32_t> context) const {
  if (context.empty()) throw UsageError("model: empty context");
  std::vector<double> acc(cfg_.dim, 0.0), tmp(cfg_.dim);
  for (const auto id : context) compose_keyword(id, tmp, acc);
  const double inv = 1.0 / static_cast<double>(context.size());
  std::vector<Scalar> out(cfg_.dim);
  for (std::uint32_t d = 0; d < cfg_.dim; ++d)
    out[d] = static_cast<Scalar>(acc[d] * inv);
  return out;
}

// Computes h and the per-row scores; returns the example loss.
template <typename Scalar>
double Model<Scalar>::forward(const TrainingExample& example,
                              Scratch& scratch) const {
  if (example.context.empty()) throw UsageError("model: empty context");
  if (example.target >= output_.rows())
    throw DataError("model: target id out of range");
  const std::uint32_t dim = cfg_.dim;

  std::fill(scratch.h.begin(), scratch.h.end(), 0.0);
  for (const auto id : example.context)
    compose_keyword(id, scratch.tmp, scratch.h);
  const double inv = 1.0 / static_cast<double>(example.context.size());
  for (std::uint32_t d = 0; d < dim; ++d) scratch.h[d] *= inv;

  scratch.scores.resize(example.negatives.size() + 1);
  double loss = 0.0;
  for (std::size_t i = 0; i < scratch.scores.size(); ++i) {
    const std::uint32_t row_id =
        i == 0 ? example.target : example.negatives[i - 1];
    if (row_id >= output_.rows())
      throw DataError("model: negative id out of range");
    const auto row = output_.row(row_id);
    double s = 0.0;
    for (std::uint32_t d = 0; d < dim; ++d)
      s += scratch.h[d] * static_cast<double>(row[d]);
    if (!std::isfinite(s))
      throw NumericError("model: non-finite score for target " +
                         std::to_string(example.target));
    scratch.scores[i] = s;
    loss += i == 0 ? softplus(-s) : softplus(s);
  }
  return loss;
}

template <typename Scalar>
double Model<Scalar>::example_loss(const TrainingExample& example) const {
  Scratch scratch = make_scratch();
  return forward(example, scratch);
}

template <typename Scalar>
double Model<Scalar>::train_one(const TrainingExample& example, double lr,
                                Scratch& scratch) {
  const double loss = forward(example, scratch);
  const std::uint32_t dim = cfg_.dim;

  // All gradients are taken at the pre-update parameters: grad_h accumulates
  // from the old output rows before any row is written.
  std::fill(scratch.grad_h.begin(), scratch.grad_h.end(), 0.0);
  for (std::size_t i = 0; i < scratch.scores.size(); ++i) {
    const std::uint32_t row_id =
        i == 0 ? example.target : example.negatives[i - 1];
    const double label = i == 0 ? 1.0 : 0.0;
    const double g = sigmoid(scratch.scores[i]) - label;  // dL/ds
    if (!std::isfinite(g))
      throw NumericError("model: non-finite gradient for target " +
                         std::to_string(example.target));
    scratch.scores[i] = g;
    const auto row = output_.row(row_id);
    for (std::uint32_t d = 0; d < dim; ++d)
      scratch.grad_h[d] += g * static_cast<double>(row[d]);
  }
  for (std::size_t i = 0; i < scratch.scores.size(); ++i) {
    const std::uint32_t row_id =
        i == 0 ? example.target : example.negatives[i - 1];
    const double g = scratch.scores[i];
    auto row = output_.row(row_id);
    for (std::uint32_t d = 0; d < dim; ++d)
      row[d] = static_cast<Scalar>(static_cast<double>(row[d]) -
                                   lr * g * scratch.h[d]);
  }
  const double inv = 1.0 / static_cast<double>(example.context.size());
  for (const auto id : example.context)
    apply_input_gradient(id, inv, scratch.grad_h, lr);
  return loss;
}

template <typename Scalar>
double Model<Scalar>::train_step(std::span<const TrainingExample> batch,
                                 double lr) {
  if (lr < 0.0) throw UsageError("model: negative learning rate");
  if (batch.empty()) return 0.0;
  Scratch scratch = make_scratch();
  double total = 0.0;
  for (const auto& example : batch) total += train_one(example, lr, scratch);
  return total / static_cast<double>(batch.size());
}

template <typename Scalar>
double Model<Scalar>::train_step(std::span<const TrainingExample> batch,
                                 double lr, std::uint32_t threads) {
  if (threads <= 1 || batch.size() < 2) return train_step(batch, lr);
  if (lr < 0.0) throw UsageError("model: negative learning rate");
  const std::uint32_t workers =
      std::min<std::uint32_t>(threads, static_cast<std::uint32_t>(batch.size()));
  std::vector<double> partial(workers, 0.0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (batch.size() + workers - 1) / workers;
  for (std::uint32_t t = 0; t < workers; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(batch.size(), lo + chunk);
    pool.emplace_back([this, batch, lr, lo, hi, t, &partial] {
      Scratch scratch = make_scratch();
      double sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        sum += train_one(batch[i], lr, scratch);
      partial[t] = sum;
    });
  }
  for (auto& th : pool) th.join();
  double total = 0.0;
  for (const auto p : partial) total += p;
  return total / static_cast<double>(batch.size());
}

template <typename Scalar>
bool Model<Scalar>::all_finite() const {
  const auto check = [](const Matrix<Scalar>& m) {
    const Scalar* p = m.data();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!std::isfinite(static_cast<double>(p[i]))) return false;
    return true;
  };
  return check(input_) && check(output_);
}

template class Model<float>;
template class Model<double>;

}  // namespace kwe
