#pragma once

// Baseline estimators, error metrics and heterogeneity diagnostics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shift/core_model.hpp"

namespace shift {

// Debiased hashed estimate of each cluster on its own.
std::vector<EstimateVector> baseline_local(std::span<const HashedEstimate> estimates);

// Debiased estimate from the pooled counts of all clusters (weighted by
// sample size); every cluster receives this same vector.
EstimateVector baseline_global(std::span<const HashedEstimate> estimates);

struct MetricSummary {
  double avg_l2_sq = 0.0;  // mean over clusters of ||p - p_hat||_2^2
  double avg_l1 = 0.0;     // mean over clusters of ||p - p_hat||_1
  std::vector<double> per_cluster_l2_sq;
  std::vector<double> per_cluster_l1;
  std::size_t runs = 1;
  double stderr_l2_sq = 0.0;  // across runs; zero for a single run
};

MetricSummary metrics(std::span<const Distribution> truth,
                      std::span<const EstimateVector> estimates);

// Averages single-run summaries; per-cluster vectors hold the run means.
MetricSummary aggregate_runs(std::span<const MetricSummary> runs);

// Special functions used for p-values. Both come from Boost.Math.
double chi_squared_survival(double statistic, double dof);
double normal_two_sided_p(double z);

struct ChiSquaredResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Two-sample test on one pair of count vectors. Expected counts use the pooled
// column proportions; every bin whose smaller expected count is below 5 is
// merged into one combined bin, and empty bins are dropped.
ChiSquaredResult two_sample_chi_squared(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b);

struct PairwiseChiSquared {
  std::size_t clusters = 0;
  std::vector<ChiSquaredResult> results;  // row-major clusters x clusters

  const ChiSquaredResult& at(std::size_t u, std::size_t v) const {
    return results[u * clusters + v];
  }
};

PairwiseChiSquared pairwise_chi_squared(
    std::span<const std::vector<std::uint64_t>> counts, unsigned threads = 1);

struct EntrywiseTestSummary {
  std::size_t tests = 0;
  std::size_t rejections = 0;
  double rejection_fraction = 0.0;
};

// Pooled two-proportion z-test for every pair u < v and entry i; entries where
// both counts are zero are skipped.
EntrywiseTestSummary entrywise_tests(
    std::span<const std::vector<std::uint64_t>> counts, double level = 0.05);

}  // namespace shift
