#pragma once

// Stage-I central estimators: entry-wise median and trimmed mean across the T
// cluster-level hashed estimates.

#include <cstddef>
#include <span>

#include "shift/core_model.hpp"

namespace shift {

struct CentralEstimate {
  EstimateVector values;
  CenterMethod method;
  std::size_t clusters_used = 0;
};

// Per entry: the middle order statistic for odd T, the average of the two
// central order statistics for even T.
CentralEstimate entrywise_median(std::span<const HashedEstimate> estimates);

// Per entry: sort the T values, drop floor(omega * T) from each end and
// average the rest.
CentralEstimate entrywise_trimmed_mean(std::span<const HashedEstimate> estimates,
                                       double omega);

CentralEstimate robust_center(std::span<const HashedEstimate> estimates,
                              const CenterMethod& method);

// Number of values dropped from each end for T clusters.
std::size_t trim_count(std::size_t clusters, double omega);

}  // namespace shift
