#pragma once

// Letter k-gram ground truth from a text corpus: one plain-text file per
// cluster, normalized to the 26 lowercase letters.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "shift/core_model.hpp"

namespace shift {

inline constexpr std::size_t kAlphabetSize = 26;
inline constexpr int kMaxGramLength = 4;

struct NamedText {
  std::string name;
  std::string text;
};

struct Corpus {
  std::vector<NamedText> clusters;
};

// Reads every *.txt in `dir` (sorted by file name); cluster name = file stem.
Corpus load_corpus(const std::filesystem::path& dir);

// Lowercases ASCII letters and drops every other byte.
std::string normalize_text(std::string_view raw);

// Base-26 code of a lowercase gram, first letter most significant.
std::uint64_t kgram_index(std::string_view gram);

std::uint64_t kgram_dimension(int k);

enum class WindowPolicy {
  kConcatenate,      // windows may span stripped characters
  kBreakAtStripped,  // windows stay inside runs of letters in the raw text
};

struct KGramDistribution {
  int k = 0;
  std::uint64_t dim = 0;
  std::vector<std::uint64_t> counts;
  Distribution dist;
};

// Sliding-window counts over an already normalized letter sequence.
KGramDistribution empirical_kgram_distribution(std::string_view letters, int k);

// Counts over raw text under the given window policy.
KGramDistribution kgram_distribution_from_raw(std::string_view raw, int k,
                                              WindowPolicy policy);

std::vector<std::uint32_t> resample_cluster(const KGramDistribution& truth,
                                            std::size_t n, std::uint64_t seed);

}  // namespace shift
