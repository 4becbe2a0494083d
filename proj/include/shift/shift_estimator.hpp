#pragma once

// Two-stage SHIFT estimator. Stage I builds a robust center from all clusters'
// hashed estimates; stage II lets each cluster adopt the central value for
// entry k only when
//
//     |center_k - local_k| <= sqrt(alpha * local_k / n),
//
// and keep its own value otherwise. Both stages read the same hashed
// estimates. The chosen vector is debiased back to the probability scale.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shift/core_model.hpp"
#include "shift/robust_agg.hpp"

namespace shift {

struct FineTuneReport {
  std::vector<std::uint32_t> kept_central;  // ascending entry indices
  std::size_t replaced_count = 0;           // d - |kept_central|
  double alpha_used = 0.0;
  std::vector<double> thresholds;           // empty unless requested
};

struct FineTuneResult {
  EstimateVector hashed;  // fine-tuned vector on the hashed scale
  FineTuneReport report;
};

// sqrt(alpha * local / n); zero when local is zero, for any alpha.
double fine_tune_threshold(double local, double alpha, std::uint32_t n) noexcept;

FineTuneResult fine_tune(const CentralEstimate& central,
                         const HashedEstimate& local, double alpha,
                         bool keep_thresholds = false);

struct ShiftResult {
  CentralEstimate central;
  std::vector<EstimateVector> estimates;  // debiased, one per cluster
  std::vector<FineTuneReport> reports;
};

ShiftResult shift_estimate(std::span<const HashedEstimate> estimates,
                           const ShiftConfig& config);

// Fine-tunes a center learned without the new cluster against its hashed
// estimate; the threshold uses the new cluster's own sample size.
EstimateVector transfer_to_new_cluster(const CentralEstimate& central,
                                       const HashedEstimate& new_local,
                                       double alpha);

// Default threshold ln(n), and the sweep parameterization 2^r ln(n).
double default_alpha(std::uint32_t n);
double alpha_from_multiplier(double r, std::uint32_t n);

// Divides by the entry sum when it is positive.
EstimateVector renormalized(const EstimateVector& v);

}  // namespace shift
