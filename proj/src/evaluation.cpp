#include "shift/evaluation.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

#include "shift/hash_codec.hpp"
#include "shift/parallel.hpp"

namespace shift {

namespace {

constexpr double kMinExpectedCount = 5.0;

void check_nonempty(std::span<const HashedEstimate> estimates) {
  if (estimates.empty()) {
    throw Error(ErrorCode::kEmptyInput, "baseline needs at least one cluster");
  }
  for (const auto& e : estimates) {
    if (e.dim() != estimates.front().dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "clusters have different dimensions");
    }
    if (e.bits() != estimates.front().bits()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "clusters were encoded with different bit widths");
    }
  }
}

void check_count_vectors(std::span<const std::vector<std::uint64_t>> counts) {
  if (counts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no count vectors");
  }
  for (const auto& c : counts) {
    if (c.size() != counts.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "count vectors have different lengths");
    }
  }
}

}  // namespace

std::vector<EstimateVector> baseline_local(std::span<const HashedEstimate> estimates) {
  check_nonempty(estimates);
  std::vector<EstimateVector> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.push_back(debias(e.values(), e.bits()));
  return out;
}

EstimateVector baseline_global(std::span<const HashedEstimate> estimates) {
  check_nonempty(estimates);
  const std::size_t dim = estimates.front().dim();
  std::vector<std::uint64_t> pooled(dim, 0);
  std::uint64_t total = 0;
  for (const auto& e : estimates) {
    for (std::size_t k = 0; k < dim; ++k) pooled[k] += e.counts()[k];
    total += e.sample_size();
  }
  std::vector<double> freq(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    freq[k] = static_cast<double>(pooled[k]) / static_cast<double>(total);
  }
  return debias(EstimateVector(std::move(freq)), estimates.front().bits());
}

MetricSummary metrics(std::span<const Distribution> truth,
                      std::span<const EstimateVector> estimates) {
  if (truth.size() != estimates.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(truth.size()) + " truths vs " +
                    std::to_string(estimates.size()) + " estimates");
  }
  if (truth.empty()) throw Error(ErrorCode::kEmptyInput, "no clusters to score");
  MetricSummary out;
  out.per_cluster_l2_sq.resize(truth.size());
  out.per_cluster_l1.resize(truth.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth[t].dim() != estimates[t].dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "cluster " + std::to_string(t) + " dimension mismatch");
    }
    double l2 = 0.0;
    double l1 = 0.0;
    for (std::size_t k = 0; k < truth[t].dim(); ++k) {
      const double diff = truth[t][k] - estimates[t][k];
      l2 += diff * diff;
      l1 += std::abs(diff);
    }
    out.per_cluster_l2_sq[t] = l2;
    out.per_cluster_l1[t] = l1;
    out.avg_l2_sq += l2;
    out.avg_l1 += l1;
  }
  out.avg_l2_sq /= static_cast<double>(truth.size());
  out.avg_l1 /= static_cast<double>(truth.size());
  return out;
}

MetricSummary aggregate_runs(std::span<const MetricSummary> runs) {
  if (runs.empty()) throw Error(ErrorCode::kEmptyInput, "no runs to aggregate");
  MetricSummary out;
  out.runs = runs.size();
  out.per_cluster_l2_sq.assign(runs.front().per_cluster_l2_sq.size(), 0.0);
  out.per_cluster_l1.assign(runs.front().per_cluster_l1.size(), 0.0);
  const double count = static_cast<double>(runs.size());
  for (const auto& r : runs) {
    if (r.per_cluster_l2_sq.size() != out.per_cluster_l2_sq.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "runs have different cluster counts");
    }
    out.avg_l2_sq += r.avg_l2_sq / count;
    out.avg_l1 += r.avg_l1 / count;
    for (std::size_t t = 0; t < r.per_cluster_l2_sq.size(); ++t) {
      out.per_cluster_l2_sq[t] += r.per_cluster_l2_sq[t] / count;
      out.per_cluster_l1[t] += r.per_cluster_l1[t] / count;
    }
  }
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.avg_l2_sq - out.avg_l2_sq) * (r.avg_l2_sq - out.avg_l2_sq);
    out.stderr_l2_sq = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  return out;
}

double chi_squared_survival(double statistic, double dof) {
  if (!(dof > 0.0)) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

double normal_two_sided_p(double z) {
  return boost::math::erfc(std::abs(z) / std::sqrt(2.0));
}

ChiSquaredResult two_sample_chi_squared(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "count vectors differ in length");
  }
  std::uint64_t total_a = 0;
  std::uint64_t total_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total_a += a[i];
    total_b += b[i];
  }
  if (total_a == 0 || total_b == 0) {
    throw Error(ErrorCode::kDegenerateCounts, "a sample has zero total count");
  }
  const double na = static_cast<double>(total_a);
  const double nb = static_cast<double>(total_b);
  const double n = na + nb;

  double statistic = 0.0;
  std::size_t bins = 0;
  std::uint64_t merged_a = 0;
  std::uint64_t merged_b = 0;
  const auto add_bin = [&](std::uint64_t oa, std::uint64_t ob) {
    const double column = static_cast<double>(oa + ob);
    const double ea = na * column / n;
    const double eb = nb * column / n;
    const double da = static_cast<double>(oa) - ea;
    const double db = static_cast<double>(ob) - eb;
    statistic += da * da / ea + db * db / eb;
    ++bins;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t column = a[i] + b[i];
    if (column == 0) continue;
    const double smaller_expected =
        std::min(na, nb) * static_cast<double>(column) / n;
    if (smaller_expected < kMinExpectedCount) {
      merged_a += a[i];
      merged_b += b[i];
    } else {
      add_bin(a[i], b[i]);
    }
  }
  if (merged_a + merged_b > 0) add_bin(merged_a, merged_b);

  ChiSquaredResult result;
  result.dof = bins > 0 ? static_cast<double>(bins - 1) : 0.0;
  result.statistic = result.dof > 0.0 ? statistic : 0.0;
  result.p_value = chi_squared_survival(result.statistic, result.dof);
  return result;
}

PairwiseChiSquared pairwise_chi_squared(
    std::span<const std::vector<std::uint64_t>> counts, unsigned threads) {
  check_count_vectors(counts);
  PairwiseChiSquared out;
  out.clusters = counts.size();
  out.results.assign(out.clusters * out.clusters, ChiSquaredResult{});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < counts.size(); ++u) {
    for (std::size_t v = u + 1; v < counts.size(); ++v) pairs.emplace_back(u, v);
  }
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [u, v] = pairs[i];
    const ChiSquaredResult r = two_sample_chi_squared(counts[u], counts[v]);
    out.results[u * out.clusters + v] = r;
    out.results[v * out.clusters + u] = r;
  });
  return out;
}

EntrywiseTestSummary entrywise_tests(
    std::span<const std::vector<std::uint64_t>> counts, double level) {
  check_count_vectors(counts);
  std::vector<double> totals;
  for (const auto& c : counts) {
    std::uint64_t total = 0;
    for (auto x : c) total += x;
    if (total == 0) {
      throw Error(ErrorCode::kDegenerateCounts, "a cluster has zero total count");
    }
    totals.push_back(static_cast<double>(total));
  }
  EntrywiseTestSummary out;
  const std::size_t dim = counts.front().size();
  for (std::size_t u = 0; u < counts.size(); ++u) {
    for (std::size_t v = u + 1; v < counts.size(); ++v) {
      for (std::size_t i = 0; i < dim; ++i) {
        const auto xu = counts[u][i];
        const auto xv = counts[v][i];
        if (xu == 0 && xv == 0) continue;
        ++out.tests;
        const double pooled = static_cast<double>(xu + xv) / (totals[u] + totals[v]);
        const double se = std::sqrt(pooled * (1.0 - pooled) *
                                    (1.0 / totals[u] + 1.0 / totals[v]));
        if (!(se > 0.0)) continue;
        const double z =
            (static_cast<double>(xu) / totals[u] - static_cast<double>(xv) / totals[v]) / se;
        if (normal_two_sided_p(z) < level) ++out.rejections;
      }
    }
  }
  out.rejection_fraction =
      out.tests > 0 ? static_cast<double>(out.rejections) / static_cast<double>(out.tests)
                    : 0.0;
  return out;
}

}  // namespace shift
