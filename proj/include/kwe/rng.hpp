#pragma once

#include <cstdint>
#include <vector>

namespace kwe {

/// SplitMix64 step. Advances `state` and returns the next value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

/// Folds salts into a base seed so that subsystems (init, split, epochs,
/// permutation draws, ...) consume independent deterministic streams.
template <class... Salts>
std::uint64_t derive_seed(std::uint64_t base, Salts... salts) {
  std::uint64_t h = mix64(base);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(salts)))), ...);
  return h;
}

// Stream salts. Every random decision in the toolkit funnels through
// derive_seed(run_seed, salt, ...) with one of these.
inline constexpr std::uint64_t kSaltInit = 0x01;
inline constexpr std::uint64_t kSaltSplit = 0x02;
inline constexpr std::uint64_t kSaltEpoch = 0x03;
inline constexpr std::uint64_t kSaltComboGuard = 0x04;
inline constexpr std::uint64_t kSaltValidation = 0x05;
inline constexpr std::uint64_t kSaltValNegatives = 0x06;
inline constexpr std::uint64_t kSaltTask2Sample = 0x07;
inline constexpr std::uint64_t kSaltTask2Mask = 0x08;
inline constexpr std::uint64_t kSaltPermDraw = 0x09;
inline constexpr std::uint64_t kSaltTukeyDraw = 0x0a;

/// xoshiro256** with splitmix64 seeding. Self-contained so that streams are
/// bit-identical across platforms and standard-library versions (the
/// std::uniform_* distributions make no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, n). Lemire multiply-shift with rejection,
  /// so the result is exactly uniform. Requires n >= 1.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace kwe
