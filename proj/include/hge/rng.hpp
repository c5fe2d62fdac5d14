// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hge {

// Deterministic random stream. All variate extraction is done from raw
// 64-bit draws so that sequences are bit-identical across platforms and
// standard-library versions (std::uniform_real_distribution et al. are
// implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Unbiased uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; second variate cached.
  double next_normal();

private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Derives an independent stream seed from a base seed and a path of
// integers (fold index, split index, purpose tag, ...). Mixing follows
// splitmix64 so nearby paths decorrelate.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Stable tags for seed derivation paths.
namespace seed_tag {
inline constexpr std::uint64_t subsample = 0x5u;
inline constexpr std::uint64_t eval_negatives = 0x6u;
inline constexpr std::uint64_t train_negatives = 0x7u;
inline constexpr std::uint64_t dropout = 0x8u;
inline constexpr std::uint64_t init = 0x9u;
}  // namespace seed_tag

}  // namespace hge
