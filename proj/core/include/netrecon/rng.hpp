#pragma once

#include <cstdint>

namespace netrecon {

// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed for stream `index` of `master`.
/// Used for per-trial seeds: trial k of a run with master seed m gets
/// derive_seed(m, k).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based random word: a pure function of (key, a, b, c).
/// The game uses it so a node's draw at a given round does not depend on
/// how many draws other nodes consumed, which keeps perturbed re-runs
/// aligned with the base run.
constexpr std::uint64_t counter_random(std::uint64_t key, std::uint64_t a, std::uint64_t b,
                                       std::uint64_t c) noexcept {
  std::uint64_t h = mix64(key ^ 0xd1b54a32d192ed03ULL);
  h = mix64(h ^ a);
  h = mix64(h ^ (b * 0xaef17502108ef2d9ULL));
  h = mix64(h ^ (c * 0x9e6c63d0676a9a99ULL));
  return h;
}

/// Maps a 64-bit word to a double in [0, 1) using the top 53 bits.
constexpr double unit_double(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) from a 64-bit word (Lemire's multiply-shift;
/// the bias is below 2^-64 * bound and ignored).
constexpr std::uint64_t bounded(std::uint64_t word, std::uint64_t bound) noexcept {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(word) * bound) >> 64);
}

/// Small sequential generator (splitmix64 stream) for graph generation and
/// harness-level sampling. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return unit_double((*this)()); }
  std::uint64_t below(std::uint64_t bound) noexcept { return bounded((*this)(), bound); }

 private:
  std::uint64_t state_;
};

}  // namespace netrecon
