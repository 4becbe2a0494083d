#include "shift/shift_estimator.hpp"

#include <cmath>

#include "shift/hash_codec.hpp"

namespace shift {

double fine_tune_threshold(double local, double alpha, std::uint32_t n) noexcept {
  if (local <= 0.0) return 0.0;
  return std::sqrt(alpha * local / static_cast<double>(n));
}

FineTuneResult fine_tune(const CentralEstimate& central,
                         const HashedEstimate& local, double alpha,
                         bool keep_thresholds) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kNonPositiveAlpha, "alpha must be positive", alpha);
  }
  const std::size_t dim = local.dim();
  if (central.values.dim() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "center has dimension " + std::to_string(central.values.dim()) +
                    ", cluster has " + std::to_string(dim));
  }
  const std::uint32_t n = local.sample_size();
  FineTuneResult result;
  result.report.alpha_used = alpha;
  if (keep_thresholds) result.report.thresholds.resize(dim);
  std::vector<double> chosen(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double c = central.values[k];
    const double l = local.values()[k];
    const double threshold = fine_tune_threshold(l, alpha, n);
    if (keep_thresholds) result.report.thresholds[k] = threshold;
    if (std::abs(c - l) <= threshold) {
      chosen[k] = c;
      result.report.kept_central.push_back(static_cast<std::uint32_t>(k));
    } else {
      chosen[k] = l;
    }
  }
  result.report.replaced_count = dim - result.report.kept_central.size();
  result.hashed = EstimateVector(std::move(chosen));
  return result;
}

ShiftResult shift_estimate(std::span<const HashedEstimate> estimates,
                           const ShiftConfig& config) {
  config.validate();
  if (estimates.empty()) {
    throw Error(ErrorCode::kEmptyInput, "SHIFT needs at least one cluster");
  }
  for (const auto& e : estimates) {
    if (e.bits() != config.bits) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cluster " + std::to_string(e.cluster_id()) + " was encoded with " +
                      std::to_string(e.bits()) + " bits, config says " +
                      std::to_string(config.bits));
    }
  }
  ShiftResult result{robust_center(estimates, config.center), {}, {}};
  result.estimates.reserve(estimates.size());
  result.reports.reserve(estimates.size());
  for (const auto& local : estimates) {
    FineTuneResult tuned = fine_tune(result.central, local, config.alpha);
    EstimateVector final_estimate = debias(tuned.hashed, config.bits);
    if (config.renormalize_output) final_estimate = renormalized(final_estimate);
    result.estimates.push_back(std::move(final_estimate));
    result.reports.push_back(std::move(tuned.report));
  }
  return result;
}

EstimateVector transfer_to_new_cluster(const CentralEstimate& central,
                                       const HashedEstimate& new_local,
                                       double alpha) {
  return debias(fine_tune(central, new_local, alpha).hashed, new_local.bits());
}

double default_alpha(std::uint32_t n) {
  if (n < 2) {
    throw Error(ErrorCode::kNonPositiveAlpha, "ln(n) is not positive for n < 2",
                n);
  }
  return std::log(static_cast<double>(n));
}

double alpha_from_multiplier(double r, std::uint32_t n) {
  return std::exp2(r) * default_alpha(n);
}

EstimateVector renormalized(const EstimateVector& v) {
  double sum = 0.0;
  for (double x : v.values()) sum += x;
  if (!(sum > 0.0)) return v;
  std::vector<double> out(v.values().begin(), v.values().end());
  for (double& x : out) x /= sum;
  return EstimateVector(std::move(out));
}

}  // namespace shift
