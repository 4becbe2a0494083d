#include "shift/robust_agg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace shift {

namespace {

void check_inputs(std::span<const HashedEstimate> estimates) {
  if (estimates.empty()) {
    throw Error(ErrorCode::kEmptyInput, "robust center needs T >= 1 estimates");
  }
  const std::size_t dim = estimates.front().dim();
  for (const auto& e : estimates) {
    if (e.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "cluster " + std::to_string(e.cluster_id()) +
                      " has dimension " + std::to_string(e.dim()) +
                      ", expected " + std::to_string(dim));
    }
  }
}

bool equal_sample_sizes(std::span<const HashedEstimate> estimates) {
  return std::all_of(estimates.begin(), estimates.end(), [&](const auto& e) {
    return e.sample_size() == estimates.front().sample_size();
  });
}

}  // namespace

std::size_t trim_count(std::size_t clusters, double omega) {
  return static_cast<std::size_t>(std::floor(omega * static_cast<double>(clusters)));
}

CentralEstimate entrywise_median(std::span<const HashedEstimate> estimates) {
  check_inputs(estimates);
  const std::size_t clusters = estimates.size();
  const std::size_t dim = estimates.front().dim();
  std::vector<double> column(clusters);
  std::vector<double> out(dim);
  const std::size_t mid = clusters / 2;
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t t = 0; t < clusters; ++t) column[t] = estimates[t].values()[k];
    std::nth_element(column.begin(), column.begin() + mid, column.end());
    const double upper = column[mid];
    if (clusters % 2 == 1) {
      out[k] = upper;
    } else {
      const double lower = *std::max_element(column.begin(), column.begin() + mid);
      out[k] = (lower + upper) / 2.0;
    }
  }
  return {EstimateVector(std::move(out)), CenterMethod::median(), clusters};
}

CentralEstimate entrywise_trimmed_mean(std::span<const HashedEstimate> estimates,
                                       double omega) {
  check_inputs(estimates);
  if (!(omega >= 0.0 && omega < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "trimming proportion must lie in [0, 0.5)", omega);
  }
  const std::size_t clusters = estimates.size();
  const std::size_t trim = trim_count(clusters, omega);
  if (clusters <= 2 * trim) {
    throw Error(ErrorCode::kTrimTooLarge,
                "trimming " + std::to_string(trim) + " per side leaves nothing of T = " +
                    std::to_string(clusters),
                omega);
  }
  const std::size_t kept = clusters - 2 * trim;
  const std::size_t dim = estimates.front().dim();
  std::vector<double> out(dim);

  if (equal_sample_sizes(estimates)) {
    // Values are counts / n with a common n: trim and sum the integer counts,
    // which makes the result independent of summation order.
    const double denom =
        static_cast<double>(kept) * estimates.front().sample_size();
    std::vector<std::uint32_t> column(clusters);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t t = 0; t < clusters; ++t) column[t] = estimates[t].counts()[k];
      std::sort(column.begin(), column.end());
      std::uint64_t sum = 0;
      for (std::size_t i = trim; i < clusters - trim; ++i) sum += column[i];
      out[k] = static_cast<double>(sum) / denom;
    }
  } else {
    std::vector<double> column(clusters);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t t = 0; t < clusters; ++t) column[t] = estimates[t].values()[k];
      std::sort(column.begin(), column.end());
      double sum = 0.0;
      for (std::size_t i = trim; i < clusters - trim; ++i) sum += column[i];
      out[k] = std::clamp(sum / static_cast<double>(kept), column[trim],
                          column[clusters - trim - 1]);
    }
  }
  return {EstimateVector(std::move(out)), CenterMethod::trimmed_mean(omega),
          clusters};
}

CentralEstimate robust_center(std::span<const HashedEstimate> estimates,
                              const CenterMethod& method) {
  if (method.kind == CenterMethod::Kind::kMedian) return entrywise_median(estimates);
  return entrywise_trimmed_mean(estimates, method.omega);
}

}  // namespace shift
