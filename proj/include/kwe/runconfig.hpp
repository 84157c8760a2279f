#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "kwe/model.hpp"
#include "kwe/sampling.hpp"
#include "kwe/trainer.hpp"

namespace kwe {

// Flat key=value run configuration. Every command resolves its configuration
// (file values overridden by command-line flags) and writes the result next
// to its outputs, so any run can be reproduced from that artifact alone.
struct RunConfig {
  // model
  std::string variant = "fastkeywords";
  std::uint32_t dim = 300;
  std::uint32_t w = 3;
  std::uint32_t ns = 4;
  std::uint32_t n_min = 3;
  std::uint32_t n_max = 6;
  std::uint32_t max_ngrams = 20;
  std::uint32_t max_words = 11;
  std::uint64_t buckets = 2'000'000;
  double lr_initial = 0.05;
  double lr_final = 1e-4;
  std::uint32_t epochs = 20;
  std::uint32_t batch_size = 0;  // 0 picks the variant default
  bool early_stopping = true;
  std::uint32_t patience = 3;
  double min_delta = 1e-4;
  std::uint64_t seed = 1;

  // data
  std::uint32_t min_count = 1;
  double test_fraction = 0.2;
  std::string train_scope = "all_docs";  // or "train_split"
  std::uint64_t combination_cap = 10'000;
  double validation_fraction = 0.1;
  std::string negative_mode = "component";  // or "uniform"

  // execution
  bool strict = false;
  std::uint32_t threads = 0;  // 0 = KWS_THREADS env, then hardware count
  std::uint32_t n_docs = 50;  // masked-keyword task sample size
  std::uint64_t permutations = 100'000;
  double alpha = 0.05;

  // paths
  std::string corpus_path;
  std::string model_path;
  std::string report_path;
  std::string out_path;

  static RunConfig from_file(const std::string& path);
  // Applies one key=value assignment; unknown keys raise UsageError.
  void set(const std::string& key, const std::string& value);

  std::string serialize() const;
  void write(const std::string& path) const;

  ModelConfig model_config() const;
  NegativeMode parse_negative_mode() const;
  TrainOptions train_options() const;
  // threads resolved against KWS_THREADS and hardware; strict forces 1.
  std::uint32_t resolved_threads() const;
};

}  // namespace kwe
