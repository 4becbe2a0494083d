#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "shift/synthetic_gen.hpp"
#include "test_support.hpp"

using namespace shift;
using shift::testing::check_error;

TEST_CASE("uniform central distribution") {
  const Distribution two = uniform_central(2);
  CHECK(two[0] == 0.5);
  CHECK(two[1] == 0.5);
  const Distribution d300 = uniform_central(300);
  double sum = 0.0;
  for (double p : d300.probs()) {
    CHECK(p == 1.0 / 300.0);
    sum += p;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  check_error(ErrorCode::kDimensionTooSmall, [] { uniform_central(1); });
}

TEST_CASE("truncated geometric central distribution") {
  const Distribution g = truncated_geometric_central(300, 0.95);
  double sum = 0.0;
  for (double p : g.probs()) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(g[1] / g[0] == doctest::Approx(0.95).epsilon(1e-14));
  // Closed form oracle: p_0 = (1 - beta) / (1 - beta^d).
  CHECK(g[0] == doctest::Approx(0.05 / (1.0 - std::pow(0.95, 300))).epsilon(1e-13));
  for (std::size_t k = 0; k + 1 < g.dim(); ++k) {
    CHECK(g[k] > g[k + 1]);
    CHECK(std::abs(std::log(g[k]) - std::log(g[k + 1]) + std::log(0.95)) <= 1e-9);
  }
  check_error(ErrorCode::kBetaOutOfRange, [] { truncated_geometric_central(10, 1.0); });
  check_error(ErrorCode::kBetaOutOfRange, [] { truncated_geometric_central(10, 0.0); });
}

TEST_CASE("perturb_sparse with s = 5 on the uniform center") {
  const Distribution center = uniform_central(300);
  const auto cluster = perturb_sparse(center, 5, 99, 7);
  CHECK(cluster.record.cluster_id == 7);
  REQUIRE(cluster.record.changed_indices.size() == 5);
  double changed_mass = 0.0;
  for (auto k : cluster.record.changed_indices) changed_mass += cluster.dist[k];
  CHECK(std::abs(changed_mass - 5.0 / 300.0) <= 1e-12);
  CHECK(sparsity_distance(center, cluster.dist, 0.0) <= 5);
  // Cross-check the record against a direct comparison.
  for (std::size_t k = 0; k < 300; ++k) {
    const bool listed = std::binary_search(cluster.record.changed_indices.begin(),
                                           cluster.record.changed_indices.end(), k);
    if (!listed) CHECK(cluster.dist[k] == center[k]);
  }
}

TEST_CASE("perturb_sparse edge budgets") {
  const Distribution center = truncated_geometric_central(40, 0.9);
  CHECK(perturb_sparse(center, 0, 1).dist == center);
  check_error(ErrorCode::kSBudgetExceedsDim, [&] { perturb_sparse(center, 41, 1); });
  const auto full = perturb_sparse(uniform_central(40), 40, 3);
  double sum = 0.0;
  for (double p : full.dist.probs()) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("property: s = 1 leaves every center unchanged") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Distribution center = shift::testing::random_distribution(rng, 2 + rng() % 50);
    CHECK(perturb_sparse(center, 1, rng()).dist == center);
  }
}

TEST_CASE("property: perturbations stay on the simplex and touch at most s entries") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 2 + rng() % 80;
    const std::size_t s = rng() % (d + 1);
    const Distribution center = trial % 2 ? uniform_central(d)
                                          : shift::testing::random_distribution(rng, d);
    const auto cluster = perturb_sparse(center, s, rng());
    double sum = 0.0;
    for (double p : cluster.dist.probs()) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(cluster.record.changed_indices.size() == s);
    CHECK(sparsity_distance(center, cluster.dist, 0.0) <= s);
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::binary_search(cluster.record.changed_indices.begin(),
                              cluster.record.changed_indices.end(), k)) {
        CHECK(cluster.dist[k] == center[k]);
      }
    }
  }
}

TEST_CASE("perturbation indices are uniform over entries") {
  // Each entry is chosen with probability s/d per draw.
  const std::size_t d = 20, s = 3;
  const int trials = 20000;
  std::vector<double> hits(d, 0.0);
  const Distribution center = uniform_central(d);
  for (int i = 0; i < trials; ++i) {
    for (auto k : perturb_sparse(center, s, 5000 + i).record.changed_indices) hits[k] += 1.0;
  }
  const double q = static_cast<double>(s) / d;
  const double sigma = std::sqrt(q * (1 - q) / trials);
  for (double h : hits) CHECK(std::abs(h / trials - q) <= 4 * sigma);
}

TEST_CASE("sampling from a point mass") {
  const auto draws = sample_cluster(validate_distribution({1.0, 0.0}), 1000, 4);
  for (auto x : draws) CHECK(x == 0);
  check_error(ErrorCode::kEmptyCluster,
              [] { sample_cluster(uniform_central(2), 0, 1); });
}

TEST_CASE("sampling frequencies match the distribution") {
  const std::size_t n = 100000;
  {
    const auto draws = sample_cluster(uniform_central(4), n, 12);
    std::vector<double> freq(4, 0.0);
    for (auto x : draws) freq[x] += 1.0 / n;
    const double sigma = std::sqrt(0.25 * 0.75 / n);
    for (double f : freq) CHECK(std::abs(f - 0.25) <= 4 * sigma);
  }
  {
    const Distribution p = validate_distribution({0.5, 0.3, 0.15, 0.05, 0.0});
    const auto draws = sample_cluster(p, n, 13);
    std::vector<double> freq(5, 0.0);
    for (auto x : draws) freq[x] += 1.0 / n;
    for (std::size_t k = 0; k < 5; ++k) {
      const double sigma = std::sqrt(p[k] * (1 - p[k]) / n);
      CHECK(std::abs(freq[k] - p[k]) <= 4 * sigma);
    }
    CHECK(freq[4] == 0.0);
  }
}

TEST_CASE("sampling replays for a fixed seed") {
  const Distribution p = truncated_geometric_central(30, 0.8);
  CHECK(sample_cluster(p, 5000, 31) == sample_cluster(p, 5000, 31));
  CHECK(sample_cluster(p, 5000, 31) != sample_cluster(p, 5000, 32));
}

TEST_CASE("truth CSV round trip is bit exact") {
  std::mt19937_64 rng(10);
  std::vector<Distribution> truths;
  for (int i = 0; i < 5; ++i) truths.push_back(shift::testing::random_distribution(rng, 17));
  truths.push_back(truncated_geometric_central(17, 0.95));
  std::stringstream buffer;
  write_truth_csv(buffer, truths);
  const std::string text = buffer.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(read_truth_csv(buffer) == truths);

  std::stringstream bad("0.5,0.5\nabc,1\n");
  check_error(ErrorCode::kIo, [&] { read_truth_csv(bad); });
}
