#include "kwe/runconfig.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "kwe/error.hpp"

namespace kwe {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw UsageError("config: bad integer for '" + key + "': '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw UsageError("config: bad number for '" + key + "': '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw UsageError("config: bad boolean for '" + key + "': '" + value + "'");
}

std::string bool_name(bool v) { return v ? "true" : "false"; }

std::string double_repr(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "variant") {
    parse_variant(value);  // validates
    variant = value;
  } else if (key == "dim") {
    dim = parse_int<std::uint32_t>(key, value);
  } else if (key == "w") {
    w = parse_int<std::uint32_t>(key, value);
  } else if (key == "ns") {
    ns = parse_int<std::uint32_t>(key, value);
  } else if (key == "n_min") {
    n_min = parse_int<std::uint32_t>(key, value);
  } else if (key == "n_max") {
    n_max = parse_int<std::uint32_t>(key, value);
  } else if (key == "max_ngrams") {
    max_ngrams = parse_int<std::uint32_t>(key, value);
  } else if (key == "max_words") {
    max_words = parse_int<std::uint32_t>(key, value);
  } else if (key == "buckets") {
    buckets = parse_int<std::uint64_t>(key, value);
  } else if (key == "lr_initial") {
    lr_initial = parse_double(key, value);
  } else if (key == "lr_final") {
    lr_final = parse_double(key, value);
  } else if (key == "epochs") {
    epochs = parse_int<std::uint32_t>(key, value);
  } else if (key == "batch_size") {
    batch_size = parse_int<std::uint32_t>(key, value);
  } else if (key == "early_stopping") {
    early_stopping = parse_bool(key, value);
  } else if (key == "patience") {
    patience = parse_int<std::uint32_t>(key, value);
  } else if (key == "min_delta") {
    min_delta = parse_double(key, value);
  } else if (key == "seed") {
    seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "min_count") {
    min_count = parse_int<std::uint32_t>(key, value);
  } else if (key == "test_fraction") {
    test_fraction = parse_double(key, value);
  } else if (key == "train_scope") {
    if (value != "all_docs" && value != "train_split")
      throw UsageError("config: train_scope must be all_docs or train_split, "
                       "got '" +
                       value + "'");
    train_scope = value;
  } else if (key == "combination_cap") {
    combination_cap = parse_int<std::uint64_t>(key, value);
  } else if (key == "validation_fraction") {
    validation_fraction = parse_double(key, value);
  } else if (key == "negative_mode") {
    if (value != "component" && value != "uniform")
      throw UsageError(
          "config: negative_mode must be component or uniform, got '" + value +
          "'");
    negative_mode = value;
  } else if (key == "strict") {
    strict = parse_bool(key, value);
  } else if (key == "threads") {
    threads = parse_int<std::uint32_t>(key, value);
  } else if (key == "n_docs") {
    n_docs = parse_int<std::uint32_t>(key, value);
  } else if (key == "permutations") {
    permutations = parse_int<std::uint64_t>(key, value);
  } else if (key == "alpha") {
    alpha = parse_double(key, value);
  } else if (key == "corpus") {
    corpus_path = value;
  } else if (key == "model") {
    model_path = value;
  } else if (key == "report") {
    report_path = value;
  } else if (key == "out") {
    out_path = value;
  } else {
    throw UsageError("config: unknown key '" + key + "'");
  }
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": expected key=value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(line_no) + ": empty key");
    try {
      cfg.set(key, value);
    } catch (const UsageError& e) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "variant=" << variant << '\n';
  os << "dim=" << dim << '\n';
  os << "w=" << w << '\n';
  os << "ns=" << ns << '\n';
  os << "n_min=" << n_min << '\n';
  os << "n_max=" << n_max << '\n';
  os << "max_ngrams=" << max_ngrams << '\n';
  os << "max_words=" << max_words << '\n';
  os << "buckets=" << buckets << '\n';
  os << "lr_initial=" << double_repr(lr_initial) << '\n';
  os << "lr_final=" << double_repr(lr_final) << '\n';
  os << "epochs=" << epochs << '\n';
  os << "batch_size=" << batch_size << '\n';
  os << "early_stopping=" << bool_name(early_stopping) << '\n';
  os << "patience=" << patience << '\n';
  os << "min_delta=" << double_repr(min_delta) << '\n';
  os << "seed=" << seed << '\n';
  os << "min_count=" << min_count << '\n';
  os << "test_fraction=" << double_repr(test_fraction) << '\n';
  os << "train_scope=" << train_scope << '\n';
  os << "combination_cap=" << combination_cap << '\n';
  os << "validation_fraction=" << double_repr(validation_fraction) << '\n';
  os << "negative_mode=" << negative_mode << '\n';
  os << "strict=" << bool_name(strict) << '\n';
  os << "threads=" << threads << '\n';
  os << "n_docs=" << n_docs << '\n';
  os << "permutations=" << permutations << '\n';
  os << "alpha=" << double_repr(alpha) << '\n';
  if (!corpus_path.empty()) os << "corpus=" << corpus_path << '\n';
  if (!model_path.empty()) os << "model=" << model_path << '\n';
  if (!report_path.empty()) os << "report=" << report_path << '\n';
  if (!out_path.empty()) os << "out=" << out_path << '\n';
  return os.str();
}

void RunConfig::write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("config: cannot write '" + path + "'");
  out << serialize();
  if (!out) throw DataError("config: write failed for '" + path + "'");
}

ModelConfig RunConfig::model_config() const {
  ModelConfig cfg = default_config(parse_variant(variant));
  cfg.dim = dim;
  cfg.w = w;
  cfg.ns = ns;
  cfg.subword.n_min = n_min;
  cfg.subword.n_max = n_max;
  cfg.subword.max_ngrams = max_ngrams;
  cfg.subword.max_words = max_words;
  cfg.subword.ngram_buckets = buckets;
  cfg.lr_initial = lr_initial;
  cfg.lr_final = lr_final;
  cfg.epochs = epochs;
  if (batch_size != 0) cfg.batch_size = batch_size;
  cfg.early_stopping.enabled = early_stopping;
  cfg.early_stopping.patience = patience;
  cfg.early_stopping.min_delta = min_delta;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

NegativeMode RunConfig::parse_negative_mode() const {
  return negative_mode == "uniform" ? NegativeMode::uniform
                                    : NegativeMode::component;
}

TrainOptions RunConfig::train_options() const {
  TrainOptions opts;
  opts.strict = strict;
  opts.threads = resolved_threads();
  opts.combination_cap = combination_cap;
  opts.validation_fraction = validation_fraction;
  return opts;
}

std::uint32_t RunConfig::resolved_threads() const {
  if (strict) return 1;
  if (threads != 0) return threads;
  if (const char* env = std::getenv("KWS_THREADS")) {
    const std::string value(env);
    if (!value.empty()) {
      std::uint32_t n = 0;
      const char* first = value.data();
      const char* last = first + value.size();
      auto [ptr, ec] = std::from_chars(first, last, n);
      if (ec != std::errc() || ptr != last || n == 0)
        throw UsageError("KWS_THREADS must be a positive integer, got '" +
                         value + "'");
      return n;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace kwe
