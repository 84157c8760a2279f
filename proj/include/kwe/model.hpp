#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwe/corpus.hpp"
#include "kwe/error.hpp"
#include "kwe/matrix.hpp"
#include "kwe/sampling.hpp"
#include "kwe/subword.hpp"

namespace kwe {

enum class Variant : std::uint8_t {
  keywords2vec = 0,  // one input row per keyword token
  fastkeywords = 1,  // input rows over n-gram buckets + word + keyword units
};

std::string_view variant_name(Variant variant);
Variant parse_variant(std::string_view name);

struct EarlyStoppingConfig {
  bool enabled = true;
  std::uint32_t patience = 3;
  double min_delta = 1e-4;
};

struct ModelConfig {
  Variant variant = Variant::fastkeywords;
  std::uint32_t dim = 300;
  std::uint32_t w = 3;    // context window: w-1 context keywords per example
  std::uint32_t ns = 4;   // negatives per example
  SubwordConfig subword;  // fastkeywords only
  double lr_initial = 0.05;
  double lr_final = 1e-4;
  std::uint32_t epochs = 20;
  std::uint32_t batch_size = 1u << 15;
  EarlyStoppingConfig early_stopping;
  std::uint64_t seed = 1;

  void validate() const;
};

// Per-variant defaults; only batch size differs between variants.
ModelConfig default_config(Variant variant);

// Exact cosine with double accumulation regardless of storage type.
template <typename T>
double cosine_similarity(std::span<const T> a, std::span<const T> b);

// CBOW embedding model with negative sampling. `Scalar` is the storage type
// of the two embedding tables; all dot products and gradient math accumulate
// in double. The float instantiation is the production model, the double one
// exists so gradient checks run at full precision.
template <typename Scalar>
class Model {
 public:
  // Random init: input rows uniform in [-0.5/dim, +0.5/dim] from the config
  // seed, output rows zero, fill row pinned to zero.
  Model(ModelConfig cfg, Vocab vocab);

  // Same, but with an injected decomposition table (fastkeywords only).
  Model(ModelConfig cfg, Vocab vocab, std::vector<UnitDecomposition> table);

  // Wraps existing matrices (deserialization, synthetic test models).
  static Model from_parts(ModelConfig cfg, Vocab vocab, Matrix<Scalar> input,
                          Matrix<Scalar> output);

  const ModelConfig& config() const { return cfg_; }
  const Vocab& vocab() const { return vocab_; }
  const UnitSpace& unit_space() const { return space_; }
  const std::vector<UnitDecomposition>& decompositions() const {
    return table_;
  }
  std::uint32_t dim() const { return cfg_.dim; }

  Matrix<Scalar>& input_matrix() { return input_; }
  const Matrix<Scalar>& input_matrix() const { return input_; }
  Matrix<Scalar>& output_matrix() { return output_; }
  const Matrix<Scalar>& output_matrix() const { return output_; }

  // Input-side embedding of an in-vocab keyword: the keyword's input row
  // (keywords2vec) or the weighted mean of its non-fill unit rows
  // (fastkeywords).
  std::vector<Scalar> keyword_input_embedding(std::uint32_t keyword_id) const;

  // Embedding of arbitrary text (normalized first). OOV text works under
  // fastkeywords via the subword path; keywords2vec throws DataError.
  std::vector<Scalar> embed_text(std::string_view raw_keyword) const;

  // Arithmetic mean of the context keywords' input embeddings.
  std::vector<Scalar> context_embedding(
      std::span<const std::uint32_t> context) const;

  // Negative-sampling logistic loss of one example (pre-update, finite,
  // non-negative).
  double example_loss(const TrainingExample& example) const;

  // One SGD pass over the batch, examples in order, exact analytic
  // gradients. Returns the mean pre-update loss.
  double train_step(std::span<const TrainingExample> batch, double lr);

  // Hogwild variant: contiguous shards updated concurrently without locks.
  // Loss bookkeeping is deterministic; matrix contents are not.
  double train_step(std::span<const TrainingExample> batch, double lr,
                    std::uint32_t threads);

  bool all_finite() const;

 private:
  struct Scratch {
    std::vector<double> h;       // context embedding
    std::vector<double> grad_h;  // dL/dh
    std::vector<double> tmp;     // per-keyword unit sum
    std::vector<double> scores;  // target + negatives
  };
  struct PartsTag {};

  Model(ModelConfig cfg, Vocab vocab, PartsTag);
  void init_matrices();
  Scratch make_scratch() const;
  // Adds keyword `id`'s input embedding into acc (no scaling).
  void compose_keyword(std::uint32_t id, std::span<double> tmp,
                       std::span<double> acc) const;
  // Distributes grad into the keyword's input rows with the chain-rule
  // coefficient `coef` (1/|context| times the unit weight over weight sum).
  void apply_input_gradient(std::uint32_t id, double coef,
                            std::span<const double> grad, double lr);
  double forward(const TrainingExample& example, Scratch& scratch) const;
  double train_one(const TrainingExample& example, double lr,
                   Scratch& scratch);

  ModelConfig cfg_;
  Vocab vocab_;
  UnitSpace space_;
  std::vector<UnitDecomposition> table_;
  Matrix<Scalar> input_;
  Matrix<Scalar> output_;
};

extern template class Model<float>;
extern template class Model<double>;

template <typename T>
double cosine_similarity(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size())
    throw UsageError("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]);
    const double y = static_cast<double>(b[i]);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0)
    throw NumericError("cosine_similarity: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace kwe
