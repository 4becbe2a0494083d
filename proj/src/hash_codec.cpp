#include "shift/hash_codec.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>

#include "shift/parallel.hpp"
#include "shift/random.hpp"

namespace shift {

namespace {

void check_bits(unsigned bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw Error(ErrorCode::kInvalidArgument,
                "bits must lie in [1, 20], got " + std::to_string(bits),
                bits);
  }
}

std::uint64_t cluster_stream_root(std::uint64_t master_seed,
                                  std::uint32_t cluster_id) noexcept {
  return splitmix64(splitmix64(master_seed) ^
                    splitmix64(cluster_id ^ 0xC2B2AE3D27D4EB4Full));
}

// Adds one message's agreements to counts[0..dim). Kept free of branches so
// the inner loop vectorizes.
void accumulate(std::uint64_t key_word, std::uint32_t symbol, unsigned bits,
                std::uint32_t* __restrict counts, std::uint32_t dim) {
  for (std::uint32_t k = 0; k < dim; ++k) {
    counts[k] += hash_symbol(key_word, k, bits) == symbol;
  }
}

void put_u16(std::ostream& out, std::uint16_t v) {
  const char bytes[2] = {static_cast<char>(v & 0xFF),
                         static_cast<char>(v >> 8)};
  out.write(bytes, 2);
}

void put_u32(char* dst, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) dst[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(const unsigned char* src) {
  return static_cast<std::uint32_t>(src[0]) |
         static_cast<std::uint32_t>(src[1]) << 8 |
         static_cast<std::uint32_t>(src[2]) << 16 |
         static_cast<std::uint32_t>(src[3]) << 24;
}

}  // namespace

std::uint64_t hash_key_word(const HashKey& key) noexcept {
  const std::uint64_t root =
      cluster_stream_root(key.master_seed, key.cluster_id);
  return splitmix64(root + 0x9E3779B97F4A7C15ull * key.datapoint_index);
}

EncodedMessage encode(std::uint32_t datapoint, const HashKey& key,
                      unsigned bits, std::size_t dim) {
  check_bits(bits);
  if (datapoint >= dim) {
    throw Error(ErrorCode::kSymbolOutOfRange,
                "datapoint " + std::to_string(datapoint) +
                    " outside [0, " + std::to_string(dim) + ")",
                datapoint);
  }
  return {key.datapoint_index, hash_symbol(hash_key_word(key), datapoint, bits)};
}

std::vector<EncodedMessage> encode_cluster(
    std::span<const std::uint32_t> datapoints, std::uint32_t cluster_id,
    std::uint64_t master_seed, unsigned bits, std::size_t dim) {
  check_bits(bits);
  std::vector<EncodedMessage> out;
  out.reserve(datapoints.size());
  for (std::size_t j = 0; j < datapoints.size(); ++j) {
    out.push_back(encode(datapoints[j],
                         {master_seed, cluster_id, static_cast<std::uint32_t>(j)},
                         bits, dim));
  }
  return out;
}

HashedEstimate decode_cluster(std::span<const EncodedMessage> messages,
                              std::uint32_t cluster_id,
                              std::uint64_t master_seed, unsigned bits,
                              std::size_t dim, DecodeOptions options) {
  check_bits(bits);
  if (dim < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "decode needs d >= 2",
                static_cast<double>(dim));
  }
  if (messages.empty()) {
    throw Error(ErrorCode::kEmptyCluster,
                "cluster " + std::to_string(cluster_id) + " has no messages");
  }
  const std::uint32_t alphabet = 1u << bits;
  for (const auto& m : messages) {
    if (m.symbol >= alphabet) {
      throw Error(ErrorCode::kSymbolOutOfRange,
                  "symbol " + std::to_string(m.symbol) + " needs more than " +
                      std::to_string(bits) + " bits",
                  m.symbol);
    }
  }

  const auto d = static_cast<std::uint32_t>(dim);
  const std::uint64_t root = cluster_stream_root(master_seed, cluster_id);
  // Each worker counts a contiguous block of messages; the integer partial
  // counts are summed afterwards.
  const std::size_t blocks =
      std::clamp<std::size_t>(options.threads, 1, messages.size());
  std::vector<std::vector<std::uint32_t>> partial(
      blocks, std::vector<std::uint32_t>(d, 0));
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    const std::size_t begin = messages.size() * b / blocks;
    const std::size_t end = messages.size() * (b + 1) / blocks;
    std::uint32_t* counts = partial[b].data();
    for (std::size_t j = begin; j < end; ++j) {
      const EncodedMessage& m = messages[j];
      const std::uint64_t key_word =
          splitmix64(root + 0x9E3779B97F4A7C15ull * m.datapoint_index);
      accumulate(key_word, m.symbol, bits, counts, d);
    }
  });
  std::vector<std::uint32_t> counts = std::move(partial[0]);
  for (std::size_t b = 1; b < blocks; ++b) {
    for (std::uint32_t k = 0; k < d; ++k) counts[k] += partial[b][k];
  }
  return HashedEstimate::from_counts(std::move(counts),
                                     static_cast<std::uint32_t>(messages.size()),
                                     bits, cluster_id, master_seed);
}

EstimateVector hashed_mean(const Distribution& p, unsigned bits) {
  check_bits(bits);
  const double scale = static_cast<double>(1u << bits);
  std::vector<double> out(p.dim());
  for (std::size_t k = 0; k < p.dim(); ++k) {
    out[k] = ((scale - 1.0) * p[k] + 1.0) / scale;
  }
  return EstimateVector(std::move(out));
}

double debias_entry(double value, unsigned bits) noexcept {
  const double scale = static_cast<double>(1u << bits);
  return std::clamp((scale * value - 1.0) / (scale - 1.0), 0.0, 1.0);
}

EstimateVector debias(const EstimateVector& v, unsigned bits) {
  check_bits(bits);
  std::vector<double> out(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) out[k] = debias_entry(v[k], bits);
  return EstimateVector(std::move(out));
}

void write_messages(std::ostream& out, std::span<const EncodedMessage> messages,
                    unsigned bits) {
  check_bits(bits);
  out.write("SHFT", 4);
  put_u16(out, kMessageDumpVersion);
  out.put(static_cast<char>(bits));
  const std::array<char, 9> reserved{};
  out.write(reserved.data(), reserved.size());
  std::array<char, 8> record{};
  for (const auto& m : messages) {
    put_u32(record.data(), m.datapoint_index);
    put_u32(record.data() + 4, m.symbol);
    out.write(record.data(), record.size());
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write message dump");
}

MessageDump read_messages(std::istream& in) {
  std::array<unsigned char, 16> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size()) ||
      std::memcmp(header.data(), "SHFT", 4) != 0) {
    throw Error(ErrorCode::kIo, "not a message dump (bad magic)");
  }
  MessageDump dump;
  dump.version = static_cast<std::uint16_t>(header[4] | header[5] << 8);
  if (dump.version != kMessageDumpVersion) {
    throw Error(ErrorCode::kIo,
                "unsupported message dump version " +
                    std::to_string(dump.version));
  }
  dump.bits = header[6];
  check_bits(dump.bits);
  std::array<unsigned char, 8> record{};
  while (in.read(reinterpret_cast<char*>(record.data()), record.size())) {
    EncodedMessage m{get_u32(record.data()), get_u32(record.data() + 4)};
    if (m.symbol >= (1u << dump.bits)) {
      throw Error(ErrorCode::kSymbolOutOfRange,
                  "record symbol exceeds the declared bit width", m.symbol);
    }
    dump.messages.push_back(m);
  }
  if (in.gcount() != 0) {
    throw Error(ErrorCode::kIo, "truncated record at end of message dump");
  }
  return dump;
}

}  // namespace shift
