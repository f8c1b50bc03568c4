#pragma once

#include <cstdint>
#include <random>

namespace kval {

/// All randomness in the library comes from std::mt19937_64 seeded through
/// std::seed_seq{seed_lo, seed_hi, stream}. Normal variates use
/// std::normal_distribution, so bit-for-bit reproducibility holds within one
/// standard-library implementation.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

/// Independent streams used by one synthetic replicate.
enum class Stream : std::uint32_t {
  Truth = 1,
  Placement = 2,
  TrainNoise = 3,
  TestNoise = 4,
  Training = 5,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  return make_rng(seed, static_cast<std::uint32_t>(stream));
}

}  // namespace kval
