#include "kwe/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "kwe/error.hpp"

namespace kwe {

namespace {

constexpr char kMagic[4] = {'K', 'W', 'E', '1'};

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T byteswap_int(T value) {
  T out;
  auto* src = reinterpret_cast<const unsigned char*>(&value);
  auto* dst = reinterpret_cast<unsigned char*>(&out);
  for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
  return out;
}

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big)
    return byteswap_int(value);
  else
    return value;
}

class Writer {
 public:
  Writer(std::ostream& out, const std::string& name) : out_(out), name_(name) {}

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out_) throw DataError("cannot write model file: " + name_);
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    v = to_little(v);
    bytes(&v, 4);
  }
  void u64(std::uint64_t v) {
    v = to_little(v);
    bytes(&v, 8);
  }
  void str(const std::string& s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max())
      throw DataError("model file: string too long");
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void f32_row(std::span<const float> row) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(row.data(), row.size() * 4);
    } else {
      for (const float v : row) {
        const auto bits = to_little(std::bit_cast<std::uint32_t>(v));
        bytes(&bits, 4);
      }
    }
  }

 private:
  std::ostream& out_;
  std::string name_;
};

class Reader {
 public:
  Reader(std::istream& in, const std::string& name) : in_(in), name_(name) {}

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw DataError("truncated model file: " + name_);
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return to_little(v);
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, 8);
    return to_little(v);
  }
  std::string str() {
    const std::uint32_t len = u32();
    std::string s(len, '\0');
    if (len > 0) bytes(s.data(), len);
    return s;
  }
  void f32_rows(Matrix<float>& m) {
    bytes(m.data(), m.size() * 4);
    if constexpr (std::endian::native == std::endian::big) {
      float* p = m.data();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto bits = byteswap_int(std::bit_cast<std::uint32_t>(p[i]));
        p[i] = std::bit_cast<float>(bits);
      }
    }
  }
  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

 private:
  std::istream& in_;
  std::string name_;
};

}  // namespace

void save_model(const Model<float>& model, std::ostream& out,
                const std::string& name) {
  if (!model.all_finite())
    throw NumericError("model contains non-finite values; refusing to save " +
                       name);
  Writer w(out, name);
  w.bytes(kMagic, 4);
  w.u32(kModelFormatVersion);

  const auto& cfg = model.config();
  if (cfg.subword.n_min > 255 || cfg.subword.n_max > 255)
    throw DataError("model file: n-gram lengths must fit in one byte");
  w.u8(static_cast<std::uint8_t>(cfg.variant));
  w.u32(cfg.dim);
  w.u32(cfg.w);
  w.u32(cfg.ns);
  w.u64(cfg.subword.ngram_buckets);
  w.u32(cfg.subword.max_words);
  w.u8(static_cast<std::uint8_t>(cfg.subword.n_min));
  w.u8(static_cast<std::uint8_t>(cfg.subword.n_max));
  w.u32(cfg.subword.max_ngrams);

  const auto& vocab = model.vocab();
  w.u32(vocab.keyword_count());
  for (const auto& kw : vocab.keywords) w.str(kw);
  w.u32(vocab.word_count());
  for (const auto& word : vocab.words) w.str(word);

  for (std::size_t i = 0; i < model.input_matrix().rows(); ++i)
    w.f32_row(model.input_matrix().row(i));
  for (std::size_t i = 0; i < model.output_matrix().rows(); ++i)
    w.f32_row(model.output_matrix().row(i));
}

void save_model(const Model<float>& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open model file for writing: " + path);
  save_model(model, out, path);
  out.flush();
  if (!out) throw DataError("cannot write model file: " + path);
}

Model<float> load_model(std::istream& in, const std::string& name) {
  Reader r(in, name);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("not a KWE1 model file (bad magic): " + name);
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    throw DataError("unsupported model file version " +
                    std::to_string(version) + ": " + name);

  const std::uint8_t variant_byte = r.u8();
  if (variant_byte > 1)
    throw DataError("model file has unknown variant byte: " + name);
  ModelConfig cfg = default_config(static_cast<Variant>(variant_byte));
  cfg.dim = r.u32();
  cfg.w = r.u32();
  cfg.ns = r.u32();
  cfg.subword.ngram_buckets = r.u64();
  cfg.subword.max_words = r.u32();
  cfg.subword.n_min = r.u8();
  cfg.subword.n_max = r.u8();
  cfg.subword.max_ngrams = r.u32();

  Vocab vocab;
  const std::uint32_t kw_count = r.u32();
  vocab.keywords.reserve(kw_count);
  for (std::uint32_t i = 0; i < kw_count; ++i) vocab.keywords.push_back(r.str());
  const std::uint32_t word_count = r.u32();
  vocab.words.reserve(word_count);
  for (std::uint32_t i = 0; i < word_count; ++i) vocab.words.push_back(r.str());
  vocab.rebuild_maps();

  const std::size_t input_rows =
      cfg.variant == Variant::fastkeywords
          ? static_cast<std::size_t>(cfg.subword.ngram_buckets) + word_count +
                kw_count + 1
          : kw_count;
  Matrix<float> input(input_rows, cfg.dim);
  Matrix<float> output(kw_count, cfg.dim);
  r.f32_rows(input);
  r.f32_rows(output);
  if (!r.at_eof())
    throw DataError("trailing bytes after model payload: " + name);

  return Model<float>::from_parts(std::move(cfg), std::move(vocab),
                                  std::move(input), std::move(output));
}

Model<float> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  return load_model(in, path);
}

}  // namespace kwe
