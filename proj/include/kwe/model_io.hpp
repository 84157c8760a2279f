#pragma once

#include <iosfwd>
#include <string>

#include "kwe/model.hpp"

namespace kwe {

// KWE1 binary model file, little-endian throughout:
//   magic "KWE1", u32 version,
//   config block: variant u8, dim u32, w u32, ns u32, B u64, W_max u32,
//                 n_min u8, n_max u8, max_ngrams u32,
//   vocab: u32 count + length-prefixed UTF-8 keywords, then words likewise,
//   matrices: row-major f32, input then output.
// A reloaded model reproduces query results bit-for-bit.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const Model<float>& model, std::ostream& out,
                const std::string& name);
void save_model(const Model<float>& model, const std::string& path);

Model<float> load_model(std::istream& in, const std::string& name);
Model<float> load_model(const std::string& path);

}  // namespace kwe
