#include "shift/ngram_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "shift/synthetic_gen.hpp"

namespace shift {

namespace {

bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

void check_gram_length(int k) {
  if (k < 1 || k > kMaxGramLength) {
    throw Error(ErrorCode::kInvalidArgument,
                "gram length must lie in [1, 4], got " + std::to_string(k), k);
  }
}

KGramDistribution from_counts(int k, std::vector<std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) {
    throw Error(ErrorCode::kTextTooShort,
                "text has no complete " + std::to_string(k) + "-gram");
  }
  std::vector<double> probs(counts.size());
  const double denom = static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / denom;
  }
  const auto dim = counts.size();
  return {k, dim, std::move(counts), validate_distribution(std::move(probs))};
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string());
  if (files.empty()) {
    throw Error(ErrorCode::kIo, "no .txt files in " + dir.string());
  }
  std::sort(files.begin(), files.end());
  Corpus corpus;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    corpus.clusters.push_back({path.stem().string(), buffer.str()});
  }
  return corpus;
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (is_ascii_letter(c)) out.push_back(to_lower_ascii(c));
  }
  return out;
}

std::uint64_t kgram_index(std::string_view gram) {
  if (gram.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty gram");
  }
  std::uint64_t index = 0;
  for (char c : gram) {
    if (c < 'a' || c > 'z') {
      throw Error(ErrorCode::kBadLetter,
                  std::string("'") + c + "' is not a lowercase letter", c);
    }
    index = index * kAlphabetSize + static_cast<std::uint64_t>(c - 'a');
  }
  return index;
}

std::uint64_t kgram_dimension(int k) {
  check_gram_length(k);
  std::uint64_t dim = 1;
  for (int i = 0; i < k; ++i) dim *= kAlphabetSize;
  return dim;
}

KGramDistribution empirical_kgram_distribution(std::string_view letters, int k) {
  const std::uint64_t dim = kgram_dimension(k);
  if (letters.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTextTooShort,
                "text of length " + std::to_string(letters.size()) +
                    " has no " + std::to_string(k) + "-gram");
  }
  std::vector<std::uint64_t> counts(dim, 0);
  std::uint64_t rolling = 0;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const char c = letters[i];
    if (c < 'a' || c > 'z') {
      throw Error(ErrorCode::kBadLetter,
                  std::string("'") + c + "' is not a lowercase letter", c);
    }
    rolling = (rolling * kAlphabetSize + static_cast<std::uint64_t>(c - 'a')) % dim;
    if (i + 1 >= static_cast<std::size_t>(k)) ++counts[rolling];
  }
  return from_counts(k, std::move(counts));
}

KGramDistribution kgram_distribution_from_raw(std::string_view raw, int k,
                                              WindowPolicy policy) {
  if (policy == WindowPolicy::kConcatenate) {
    return empirical_kgram_distribution(normalize_text(raw), k);
  }
  const std::uint64_t dim = kgram_dimension(k);
  std::vector<std::uint64_t> counts(dim, 0);
  std::uint64_t rolling = 0;
  std::size_t run = 0;
  for (char c : raw) {
    if (!is_ascii_letter(c)) {
      run = 0;
      rolling = 0;
      continue;
    }
    rolling = (rolling * kAlphabetSize +
               static_cast<std::uint64_t>(to_lower_ascii(c) - 'a')) % dim;
    if (++run >= static_cast<std::size_t>(k)) ++counts[rolling];
  }
  return from_counts(k, std::move(counts));
}

std::vector<std::uint32_t> resample_cluster(const KGramDistribution& truth,
                                            std::size_t n, std::uint64_t seed) {
  return sample_cluster(truth.dist, n, seed);
}

}  // namespace shift
