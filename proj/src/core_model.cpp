#include "shift/core_model.hpp"

#include <cmath>
#include <sstream>

namespace shift {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kSumNotOne: return "SumNotOne";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kSymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTrimTooLarge: return "TrimTooLarge";
    case ErrorCode::kNonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::kBetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::kSBudgetExceedsDim: return "SBudgetExceedsDim";
    case ErrorCode::kDegenerateDraw: return "DegenerateDraw";
    case ErrorCode::kBadLetter: return "BadLetter";
    case ErrorCode::kTextTooShort: return "TextTooShort";
    case ErrorCode::kDegenerateCounts: return "DegenerateCounts";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, double detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(detail) {}

Distribution validate_distribution(std::vector<double> raw) {
  if (raw.size() < 2) {
    throw Error(ErrorCode::kDimensionTooSmall,
                "a distribution needs at least 2 entries, got " +
                    std::to_string(raw.size()),
                static_cast<double>(raw.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double p = raw[k];
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::kNonFiniteEntry,
                  "entry " + std::to_string(k) + " is not finite");
    }
    if (p < 0.0) {
      throw Error(ErrorCode::kNegativeEntry,
                  "entry " + std::to_string(k) + " is negative", p);
    }
    sum += p;
  }
  const double deviation = sum - 1.0;
  if (std::abs(deviation) > Distribution::kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "entries sum to " << sum << " (deviation " << deviation << ")";
    throw Error(ErrorCode::kSumNotOne, msg.str(), deviation);
  }
  // Non-negative entries summing to 1 +- tol are each at most 1 + tol.
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] > 1.0) {
      throw Error(ErrorCode::kSumNotOne,
                  "entry " + std::to_string(k) + " exceeds 1", raw[k] - 1.0);
    }
  }
  return Distribution(std::move(raw));
}

std::size_t sparsity_distance(const Distribution& a, const Distribution& b,
                              double tol) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sparsity_distance between dimensions " +
                    std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0", tol);
  }
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) ++count;
  }
  return count;
}

EstimateVector::EstimateVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(ErrorCode::kNonFiniteEntry,
                  "estimate entry " + std::to_string(k) + " is not finite");
    }
  }
}

namespace {

void check_hashed_header(std::size_t dim, std::uint32_t sample_size,
                         unsigned bits) {
  if (dim < 2) {
    throw Error(ErrorCode::kDimensionTooSmall,
                "hashed estimate needs d >= 2", static_cast<double>(dim));
  }
  if (sample_size == 0) {
    throw Error(ErrorCode::kEmptyCluster, "sample size must be positive");
  }
  if (bits == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bits must be positive");
  }
}

}  // namespace

HashedEstimate HashedEstimate::from_counts(std::vector<std::uint32_t> counts,
                                           std::uint32_t sample_size,
                                           unsigned bits,
                                           std::uint32_t cluster_id,
                                           std::uint64_t seed) {
  check_hashed_header(counts.size(), sample_size, bits);
  std::vector<double> values(counts.size());
  const double n = sample_size;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > sample_size) {
      throw Error(ErrorCode::kInvariantViolation,
                  "count " + std::to_string(counts[k]) + " at entry " +
                      std::to_string(k) + " exceeds sample size " +
                      std::to_string(sample_size));
    }
    values[k] = counts[k] / n;
  }
  HashedEstimate out;
  out.values_ = EstimateVector(std::move(values));
  out.counts_ = std::move(counts);
  out.sample_size_ = sample_size;
  out.bits_ = bits;
  out.cluster_id_ = cluster_id;
  out.seed_ = seed;
  return out;
}

HashedEstimate HashedEstimate::from_values(std::span<const double> values,
                                           std::uint32_t sample_size,
                                           unsigned bits,
                                           std::uint32_t cluster_id,
                                           std::uint64_t seed) {
  check_hashed_header(values.size(), sample_size, bits);
  std::vector<std::uint32_t> counts(values.size());
  const double n = sample_size;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hashed estimate entry " + std::to_string(k) +
                      " is outside [0, 1]",
                  v);
    }
    const double scaled = v * n;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-12 * std::max(1.0, scaled)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hashed estimate entry " + std::to_string(k) +
                      " is not a multiple of 1/n",
                  scaled - rounded);
    }
    counts[k] = static_cast<std::uint32_t>(rounded);
  }
  return from_counts(std::move(counts), sample_size, bits, cluster_id, seed);
}

std::string CenterMethod::name() const {
  if (kind == Kind::kMedian) return "median";
  std::ostringstream out;
  out << "trimmed_mean(" << omega << ")";
  return out.str();
}

void ShiftConfig::validate() const {
  if (bits < 1 || bits > 20) {
    throw Error(ErrorCode::kInvalidArgument,
                "bits must lie in [1, 20], got " + std::to_string(bits));
  }
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kNonPositiveAlpha, "alpha must be positive", alpha);
  }
  if (center.kind == CenterMethod::Kind::kTrimmedMean &&
      !(center.omega >= 0.0 && center.omega < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "trimming proportion must lie in [0, 0.5)", center.omega);
  }
}

void HeterogeneitySpec::validate(std::size_t dim) const {
  if (s > dim) {
    throw Error(ErrorCode::kSBudgetExceedsDim,
                "s = " + std::to_string(s) + " exceeds d = " +
                    std::to_string(dim),
                static_cast<double>(s));
  }
  if (clusters == 0) {
    throw Error(ErrorCode::kEmptyInput, "need at least one cluster");
  }
  if (sample_size == 0) {
    throw Error(ErrorCode::kEmptyCluster, "per-cluster sample size must be >= 1");
  }
}

}  // namespace shift
