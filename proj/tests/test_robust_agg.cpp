#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "shift/robust_agg.hpp"
#include "test_support.hpp"

using namespace shift;
using shift::testing::check_error;

namespace {

std::vector<HashedEstimate> from_count_columns(const std::vector<std::vector<std::uint32_t>>& rows,
                                               std::uint32_t n) {
  std::vector<HashedEstimate> out;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out.push_back(HashedEstimate::from_counts(rows[t], n, 2, static_cast<std::uint32_t>(t), 0));
  }
  return out;
}

// One-entry-per-cluster helper: values given as exact multiples of 1/n.
std::vector<HashedEstimate> scalar_clusters(const std::vector<double>& values, std::uint32_t n) {
  std::vector<HashedEstimate> out;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const std::vector<double> v{values[t], 1.0 - values[t]};
    out.push_back(HashedEstimate::from_values(v, n, 2, static_cast<std::uint32_t>(t), 0));
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> random_counts(std::mt19937_64& rng, std::size_t clusters,
                                                      std::size_t dim, std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> rows(clusters, std::vector<std::uint32_t>(dim));
  // Small value range so ties are common.
  const std::uint32_t top = (rng() % 2 == 0) ? std::min<std::uint32_t>(4, n) : n;
  for (auto& row : rows) {
    for (auto& c : row) c = static_cast<std::uint32_t>(rng() % (top + 1));
  }
  return rows;
}

double oracle_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t t = xs.size();
  if (t % 2 == 1) return xs[t / 2];
  return (xs[t / 2 - 1] + xs[t / 2]) / 2.0;
}

}  // namespace

TEST_CASE("median examples") {
  const auto single = scalar_clusters({0.25}, 4);
  CHECK(entrywise_median(single).values == single.front().values());

  CHECK(entrywise_median(scalar_clusters({0.2, 0.9, 0.5}, 10)).values[0] == 0.5);
  // Even T averages the two central order statistics.
  CHECK(entrywise_median(scalar_clusters({0.1, 0.2, 0.6, 0.8}, 10)).values[0] ==
        doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("trimmed mean examples") {
  const auto plain = scalar_clusters({0.1, 0.2, 0.6, 0.8}, 10);
  CHECK(entrywise_trimmed_mean(plain, 0.0).values[0] ==
        doctest::Approx((0.1 + 0.2 + 0.6 + 0.8) / 4).epsilon(1e-15));

  CHECK(entrywise_trimmed_mean(scalar_clusters({0.0, 0.2, 0.4, 1.0}, 10), 0.25).values[0] ==
        doctest::Approx(0.3).epsilon(1e-15));

  std::vector<double> ten(9, 0.5);
  ten.push_back(0.99);
  CHECK(entrywise_trimmed_mean(scalar_clusters(ten, 100), 0.1).values[0] == 0.5);
}

TEST_CASE("trim count and error cases") {
  CHECK(trim_count(30, 0.1) == 3);
  CHECK(trim_count(10, 0.1) == 1);
  CHECK(trim_count(9, 0.1) == 0);
  CHECK(trim_count(4, 0.25) == 1);
  std::vector<HashedEstimate> none;
  check_error(ErrorCode::kEmptyInput, [&] { entrywise_median(none); });
  check_error(ErrorCode::kInvalidArgument,
              [] { entrywise_trimmed_mean(scalar_clusters({0.5, 0.5}, 2), 0.5); });
  const auto mixed = std::vector<HashedEstimate>{
      HashedEstimate::from_counts({1, 1}, 2, 2, 0, 0),
      HashedEstimate::from_counts({1, 1, 0}, 2, 2, 1, 0)};
  check_error(ErrorCode::kDimensionMismatch, [&] { entrywise_median(mixed); });
}

TEST_CASE("property: median matches a full-sort oracle exactly") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t clusters = 1 + rng() % 12;
    const std::size_t dim = 2 + rng() % 4;
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 50);
    const auto ests = from_count_columns(random_counts(rng, clusters, dim, n), n);
    const auto center = entrywise_median(ests);
    for (std::size_t k = 0; k < dim; ++k) {
      std::vector<double> column;
      for (const auto& e : ests) column.push_back(e.values()[k]);
      CHECK(center.values[k] == oracle_median(column));
    }
  }
}

TEST_CASE("property: trimmed mean with omega 0 is the exact mean") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t clusters = 1 + rng() % 12;
    const std::size_t dim = 2 + rng() % 4;
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 1000);
    const auto rows = random_counts(rng, clusters, dim, n);
    const auto center = entrywise_trimmed_mean(from_count_columns(rows, n), 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      std::uint64_t sum = 0;
      for (const auto& row : rows) sum += row[k];
      // One correctly rounded division of exact integers.
      CHECK(center.values[k] == static_cast<double>(sum) / static_cast<double>(clusters * n));
    }
  }
}

TEST_CASE("property: centers are permutation invariant and bounded") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t clusters = 1 + rng() % 15;
    const std::size_t dim = 2 + rng() % 4;
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 200);
    auto rows = random_counts(rng, clusters, dim, n);
    const double omega = std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.45}[rng() % 5];
    const auto ests = from_count_columns(rows, n);
    const auto median = entrywise_median(ests);
    const auto trimmed = entrywise_trimmed_mean(ests, omega);

    std::shuffle(rows.begin(), rows.end(), rng);
    const auto shuffled = from_count_columns(rows, n);
    CHECK(entrywise_median(shuffled).values == median.values);
    CHECK(entrywise_trimmed_mean(shuffled, omega).values == trimmed.values);

    for (std::size_t k = 0; k < dim; ++k) {
      double lo = 1.0, hi = 0.0;
      for (const auto& e : ests) {
        lo = std::min(lo, e.values()[k]);
        hi = std::max(hi, e.values()[k]);
      }
      CHECK(median.values[k] >= lo);
      CHECK(median.values[k] <= hi);
      CHECK(trimmed.values[k] >= lo);
      CHECK(trimmed.values[k] <= hi);
    }
  }
}

TEST_CASE("property: unequal sample sizes keep the trimmed mean bounded and order free") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t clusters = 2 + rng() % 10;
    std::vector<HashedEstimate> ests;
    for (std::size_t t = 0; t < clusters; ++t) {
      const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 97);
      ests.push_back(HashedEstimate::from_counts(
          {static_cast<std::uint32_t>(rng() % (n + 1)), 0}, n, 2, 0, 0));
    }
    const auto center = entrywise_trimmed_mean(ests, 0.2);
    std::reverse(ests.begin(), ests.end());
    CHECK(entrywise_trimmed_mean(ests, 0.2).values == center.values);
    double lo = 1.0, hi = 0.0;
    for (const auto& e : ests) {
      lo = std::min(lo, e.values()[0]);
      hi = std::max(hi, e.values()[0]);
    }
    CHECK(center.values[0] >= lo);
    CHECK(center.values[0] <= hi);
  }
}

TEST_CASE("property: extreme corruption inside the trim budget is invisible") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t clusters = 5 + rng() % 30;
    const double omega = 0.1 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
    const std::size_t trim = trim_count(clusters, omega);
    if (trim == 0 || clusters <= 2 * trim) continue;
    const std::uint32_t n = 1000;
    auto rows = random_counts(rng, clusters, 3, 800);
    const auto clean = entrywise_trimmed_mean(from_count_columns(rows, n), omega);

    // Push the `trim` largest values of entry 0 to n and the `trim` smallest
    // of entry 1 to 0; order among the rest is unchanged.
    for (std::size_t entry : {0u, 1u}) {
      std::vector<std::size_t> order(clusters);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return rows[a][entry] < rows[b][entry]; });
      for (std::size_t i = 0; i < trim; ++i) {
        if (entry == 0) rows[order[clusters - 1 - i]][entry] = n;
        else rows[order[i]][entry] = 0;
      }
    }
    const auto corrupted = entrywise_trimmed_mean(from_count_columns(rows, n), omega);
    CHECK(corrupted.values == clean.values);
  }
}

TEST_CASE("breakdown: median with a few corrupted clusters stays near the clean mean") {
  // T = 10 clusters, one (< T/5) reports 1.0 at the entry, the rest are
  // Binomial(n, b)/n draws.
  const std::uint32_t n = 10000;
  const double b = 0.2525;
  const std::size_t clusters = 10;
  const std::size_t corrupted = 1;
  std::mt19937_64 rng(606);
  std::binomial_distribution<std::uint32_t> draw(n, b);
  double median_err = 0.0;
  double mean_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values;
    double clean_sum = 0.0;
    for (std::size_t t = 0; t < clusters - corrupted; ++t) {
      values.push_back(draw(rng) / static_cast<double>(n));
      clean_sum += values.back();
    }
    for (std::size_t t = 0; t < corrupted; ++t) values.push_back(1.0);
    median_err += std::abs(entrywise_median(scalar_clusters(values, n)).values[0] - b);
    mean_err += std::abs(clean_sum / static_cast<double>(clusters - corrupted) - b);
  }
  CHECK(median_err <= 3.0 * mean_err);
}
