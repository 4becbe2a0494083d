#pragma once

// Seed derivation and the few random primitives the generators need. Every
// stream is a std::mt19937_64 seeded from a derived 64-bit key, so results do
// not depend on the standard library's distribution implementations.

#include <cstdint>
#include <random>
#include <string_view>

namespace shift {

using Rng = std::mt19937_64;

__extension__ using Uint128 = unsigned __int128;

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Keyed mix of (master, domain, a, b). Distinct domains give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view domain,
                                    std::uint64_t a = 0,
                                    std::uint64_t b = 0) noexcept {
  std::uint64_t h = splitmix64(master ^ splitmix64(fnv1a64(domain)));
  h = splitmix64(h ^ splitmix64(a + 0x632BE59BD9B4E019ull));
  return splitmix64(h ^ splitmix64(b + 0x8CB92BA72F3D8DD7ull));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound), bound > 0 (Lemire's multiply-and-reject).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  Uint128 m = static_cast<Uint128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<Uint128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace shift
