#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace brwbrw {

// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
// counter and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// A reproducible random stream identifier. Streams with distinct `stream`
// values under the same `seed` are disjoint counter ranges of the same
// Philox key, so replicas are independent without any jump-ahead.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

// SplitMix64 finalizer; used for seed derivation and hashing.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-splitting rule: the child seed for a named purpose is
// splitmix64(seed ^ fnv1a64(label)). Every sub-seed in the project is
// produced this way from the single top-level seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

// Counter-mode generator over one (seed, stream) pair. Satisfies
// std::uniform_random_bit_generator. The position within the stream is
// part of the value, so copies continue identically.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream() = default;
  explicit RandomStream(RandomSeed id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (buffered_ == 0) refill();
    return buffer_[--buffered_];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as the argument of log().
  double uniform_open_zero() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard exponential variate.
  double exponential() noexcept;

  RandomSeed id() const noexcept { return id_; }
  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  void refill() noexcept;

  RandomSeed id_{};
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace brwbrw
