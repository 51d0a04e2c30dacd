#include "brwbrw/rng.hpp"

#include <cmath>

namespace brwbrw {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ h);
}

RandomStream::RandomStream(RandomSeed id) noexcept : id_(id) {}

void RandomStream::refill() noexcept {
  const PhiloxCounter counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(id_.stream),
                              static_cast<std::uint32_t>(id_.stream >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(id_.seed), static_cast<std::uint32_t>(id_.seed >> 32)};
  const PhiloxCounter out = philox4x32_10(counter, key);
  ++block_;
  // Served back to front by operator(), so buffer_[1] comes out first.
  buffer_[1] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[0] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
}

double RandomStream::exponential() noexcept { return -std::log(uniform_open_zero()); }

}  // namespace brwbrw
