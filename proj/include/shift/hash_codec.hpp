#pragma once

// Non-interactive b-bit encoding by per-datapoint uniform hashing.
//
// Datapoint j of cluster t is sent as Y = h_{t,j}(X), where h_{t,j} maps
// [d] -> [2^b]. Encoder and decoder share randomness through the master seed:
// h_{t,j}(k) is a keyed counter-based function of (master_seed, t, j, k), so no
// hash description is stored or transmitted. The server recovers, for every
// symbol k, the fraction of datapoints whose message agrees with h_{t,j}(k);
// its expectation is ((2^b - 1) p_k + 1) / 2^b.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "shift/core_model.hpp"

namespace shift {

inline constexpr unsigned kMaxBits = 20;

struct HashKey {
  std::uint64_t master_seed = 0;
  std::uint32_t cluster_id = 0;
  std::uint32_t datapoint_index = 0;
};

struct EncodedMessage {
  std::uint32_t datapoint_index = 0;
  std::uint32_t symbol = 0;

  friend bool operator==(const EncodedMessage&,
                         const EncodedMessage&) = default;
};

namespace detail {

constexpr std::uint32_t fmix32(std::uint32_t h) noexcept {
  h ^= h >> 16;
  h *= 0x85EBCA6Bu;
  h ^= h >> 13;
  h *= 0xC2B2AE35u;
  h ^= h >> 16;
  return h;
}

}  // namespace detail

// 64-bit key word selecting the hash function h_{t,j}. Datapoints of one
// cluster read consecutive outputs of a splitmix64 stream rooted at (seed, t).
std::uint64_t hash_key_word(const HashKey& key) noexcept;

// h_{t,j}(k) for the function selected by key_word, in [0, 2^bits).
constexpr std::uint32_t hash_symbol(std::uint64_t key_word, std::uint32_t k,
                                    unsigned bits) noexcept {
  const auto lo = static_cast<std::uint32_t>(key_word);
  const auto hi = static_cast<std::uint32_t>(key_word >> 32);
  std::uint32_t x = detail::fmix32(lo ^ (k * 0x9E3779B9u));
  x = (x ^ hi) * 0x9E3779B1u;
  return x >> (32 - bits);
}

EncodedMessage encode(std::uint32_t datapoint, const HashKey& key,
                      unsigned bits, std::size_t dim);

// Encodes datapoints[j] with key (master_seed, cluster_id, j).
std::vector<EncodedMessage> encode_cluster(
    std::span<const std::uint32_t> datapoints, std::uint32_t cluster_id,
    std::uint64_t master_seed, unsigned bits, std::size_t dim);

struct DecodeOptions {
  unsigned threads = 1;
};

// Recomputes h_{t,j}(k) for every message and every k, counting agreements.
// Counting is integer-exact, so the result does not depend on `threads`.
HashedEstimate decode_cluster(std::span<const EncodedMessage> messages,
                              std::uint32_t cluster_id,
                              std::uint64_t master_seed, unsigned bits,
                              std::size_t dim, DecodeOptions options = {});

// b = ((2^b - 1) p + 1) / 2^b, entry-wise.
EstimateVector hashed_mean(const Distribution& p, unsigned bits);

double debias_entry(double value, unsigned bits) noexcept;

// Proj_[0,1]((2^b v - 1) / (2^b - 1)), entry-wise.
EstimateVector debias(const EstimateVector& v, unsigned bits);

// Binary message dump: 16-byte header ("SHFT", u16 version, u8 bits, 9 zero
// bytes) followed by little-endian (u32 datapoint_index, u32 symbol) records.
inline constexpr std::uint16_t kMessageDumpVersion = 1;

struct MessageDump {
  std::uint16_t version = kMessageDumpVersion;
  unsigned bits = 0;
  std::vector<EncodedMessage> messages;
};

void write_messages(std::ostream& out, std::span<const EncodedMessage> messages,
                    unsigned bits);
MessageDump read_messages(std::istream& in);

}  // namespace shift
