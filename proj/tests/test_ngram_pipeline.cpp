#include <doctest.h>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>

#include "shift/ngram_pipeline.hpp"
#include "test_support.hpp"

using namespace shift;
using shift::testing::check_error;

TEST_CASE("normalize_text") {
  CHECK(normalize_text("AbC!") == "abc");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("don't") == "dont");
  CHECK(normalize_text("Zz 9\n\tQ\xc3\xa9") == "zzq");
}

TEST_CASE("kgram_index is positional base 26") {
  CHECK(kgram_index("aa") == 0);
  CHECK(kgram_index("ab") == 1);
  CHECK(kgram_index("ba") == 26);
  CHECK(kgram_index("zz") == 675);
  CHECK(kgram_index("abc") == 28);
  check_error(ErrorCode::kBadLetter, [] { kgram_index("aB"); });
  check_error(ErrorCode::kInvalidArgument, [] { kgram_dimension(5); });
  CHECK(kgram_dimension(3) == 17576);
}

TEST_CASE("kgram_index is a bijection") {
  for (int k = 1; k <= 2; ++k) {
    std::set<std::uint64_t> seen;
    std::string gram(k, 'a');
    const std::uint64_t dim = kgram_dimension(k);
    for (std::uint64_t i = 0; i < dim; ++i) {
      std::uint64_t rest = i;
      for (int pos = k - 1; pos >= 0; --pos) {
        gram[pos] = static_cast<char>('a' + rest % 26);
        rest /= 26;
      }
      const auto index = kgram_index(gram);
      CHECK(index < dim);
      seen.insert(index);
    }
    CHECK(seen.size() == dim);
  }
  std::mt19937_64 rng(1);
  std::map<std::uint64_t, std::string> inverse;
  for (int i = 0; i < 20000; ++i) {
    std::string gram(3, 'a');
    for (auto& c : gram) c = static_cast<char>('a' + rng() % 26);
    const auto [it, fresh] = inverse.emplace(kgram_index(gram), gram);
    CHECK(it->second == gram);
    CHECK(it->first < 17576);
  }
}

TEST_CASE("empirical k-gram distributions") {
  const auto aaa = empirical_kgram_distribution("aaa", 2);
  CHECK(aaa.dist[0] == 1.0);
  CHECK(aaa.counts[0] == 2);

  const auto abab = empirical_kgram_distribution("abab", 2);
  CHECK(abab.dist[kgram_index("ab")] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(abab.dist[kgram_index("ba")] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(abab.dim == 676);

  check_error(ErrorCode::kTextTooShort, [] { empirical_kgram_distribution("a", 2); });
  check_error(ErrorCode::kBadLetter, [] { empirical_kgram_distribution("a b", 2); });
}

TEST_CASE("window counts equal len - k + 1") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text(5 + rng() % 200, 'a');
    for (auto& c : text) c = static_cast<char>('a' + rng() % 26);
    for (int k = 1; k <= 4; ++k) {
      const auto g = empirical_kgram_distribution(text, k);
      std::uint64_t total = 0;
      for (auto c : g.counts) total += c;
      CHECK(total == text.size() - k + 1);
    }
  }
}

TEST_CASE("unigrams match an independent letter count") {
  const std::string raw = "The quick brown fox, jumps over the lazy dog! AAA zz";
  const auto g = kgram_distribution_from_raw(raw, 1, WindowPolicy::kConcatenate);
  std::map<char, double> tally;
  double letters = 0;
  for (char c : raw) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      tally[static_cast<char>(std::tolower(static_cast<unsigned char>(c)))] += 1;
      letters += 1;
    }
  }
  for (char c = 'a'; c <= 'z'; ++c) {
    CHECK(g.dist[c - 'a'] == doctest::Approx(tally[c] / letters).epsilon(1e-15));
  }
}

TEST_CASE("padding with non-letters changes nothing") {
  const std::string core = "To be, or not to be: that is the question.";
  for (auto policy : {WindowPolicy::kConcatenate, WindowPolicy::kBreakAtStripped}) {
    const auto plain = kgram_distribution_from_raw(core, 2, policy);
    const auto padded = kgram_distribution_from_raw("  ...\n" + core + " 123 !!", 2, policy);
    CHECK(plain.counts == padded.counts);
  }
}

TEST_CASE("window policies differ only across stripped characters") {
  const auto joined = kgram_distribution_from_raw("ab cd", 2, WindowPolicy::kConcatenate);
  const auto split = kgram_distribution_from_raw("ab cd", 2, WindowPolicy::kBreakAtStripped);
  CHECK(joined.counts[kgram_index("bc")] == 1);
  CHECK(split.counts[kgram_index("bc")] == 0);
  CHECK(split.counts[kgram_index("ab")] == 1);
  CHECK(split.counts[kgram_index("cd")] == 1);
  check_error(ErrorCode::kTextTooShort,
              [] { kgram_distribution_from_raw("a b c", 2, WindowPolicy::kBreakAtStripped); });
}

TEST_CASE("resampling replays and respects the support") {
  const auto g = empirical_kgram_distribution("abababcc", 2);
  const auto draws = resample_cluster(g, 20000, 5);
  CHECK(draws == resample_cluster(g, 20000, 5));
  for (auto x : draws) CHECK(g.counts[x] > 0);
  const auto point = empirical_kgram_distribution("aaaa", 2);
  for (auto x : resample_cluster(point, 100, 1)) CHECK(x == 0);
}

TEST_CASE("load_corpus reads sorted .txt files") {
  const auto dir = std::filesystem::temp_directory_path() / "shift_corpus_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "b.txt") << "second";
  std::ofstream(dir / "a.txt") << "first";
  std::ofstream(dir / "notes.md") << "ignored";
  const Corpus corpus = load_corpus(dir);
  REQUIRE(corpus.clusters.size() == 2);
  CHECK(corpus.clusters[0].name == "a");
  CHECK(corpus.clusters[0].text == "first");
  CHECK(corpus.clusters[1].name == "b");
  std::filesystem::remove_all(dir);
  check_error(ErrorCode::kIo, [&] { load_corpus(dir); });
}

TEST_CASE("bundled fixture corpus has five heterogeneous speakers") {
  const Corpus corpus = load_corpus(SHIFT_FIXTURE_CORPUS);
  REQUIRE(corpus.clusters.size() == 5);
  for (const auto& c : corpus.clusters) {
    const auto g = kgram_distribution_from_raw(c.text, 2, WindowPolicy::kConcatenate);
    std::uint64_t total = 0;
    for (auto x : g.counts) total += x;
    CHECK(total > 10000);
  }
}
