#pragma once

// Domain types shared by the estimators and the experiment harness.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shift {

enum class ErrorCode {
  kNegativeEntry,
  kSumNotOne,
  kDimensionTooSmall,
  kDimensionMismatch,
  kNonFiniteEntry,
  kSymbolOutOfRange,
  kEmptyCluster,
  kEmptyInput,
  kTrimTooLarge,
  kNonPositiveAlpha,
  kBetaOutOfRange,
  kSBudgetExceedsDim,
  kDegenerateDraw,
  kBadLetter,
  kTextTooShort,
  kDegenerateCounts,
  kInvalidArgument,
  kIo,
  kInvariantViolation,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception. `detail()` carries
// the offending quantity where one exists (e.g. the deviation of a sum from 1).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double detail = 0.0);

  ErrorCode code() const noexcept { return code_; }
  double detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  double detail_;
};

// A point on the probability simplex. Only constructible through
// validate_distribution(), which never renormalizes.
class Distribution {
 public:
  static constexpr double kSimplexTolerance = 1e-9;

  std::size_t dim() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t k) const noexcept { return probs_[k]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  friend Distribution validate_distribution(std::vector<double> raw);
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

Distribution validate_distribution(std::vector<double> raw);

// Number of coordinates where |a_k - b_k| > tol.
std::size_t sparsity_distance(const Distribution& a, const Distribution& b,
                              double tol);

// Finite real vector with no simplex constraint.
class EstimateVector {
 public:
  EstimateVector() = default;
  explicit EstimateVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  friend bool operator==(const EstimateVector&, const EstimateVector&) =
      default;

 private:
  std::vector<double> values_;
};

// Decoded per-cluster frequency vector: entry k is counts[k] / sample_size.
class HashedEstimate {
 public:
  static HashedEstimate from_counts(std::vector<std::uint32_t> counts,
                                    std::uint32_t sample_size, unsigned bits,
                                    std::uint32_t cluster_id,
                                    std::uint64_t seed);

  // Accepts values only if each n * value is an integer to within 1e-12
  // relative precision.
  static HashedEstimate from_values(std::span<const double> values,
                                    std::uint32_t sample_size, unsigned bits,
                                    std::uint32_t cluster_id,
                                    std::uint64_t seed);

  const EstimateVector& values() const noexcept { return values_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::size_t dim() const noexcept { return counts_.size(); }
  std::uint32_t sample_size() const noexcept { return sample_size_; }
  unsigned bits() const noexcept { return bits_; }
  std::uint32_t cluster_id() const noexcept { return cluster_id_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  HashedEstimate() = default;

  EstimateVector values_;
  std::vector<std::uint32_t> counts_;
  std::uint32_t sample_size_ = 0;
  unsigned bits_ = 0;
  std::uint32_t cluster_id_ = 0;
  std::uint64_t seed_ = 0;
};

struct CenterMethod {
  enum class Kind { kMedian, kTrimmedMean };

  Kind kind = Kind::kMedian;
  double omega = 0.0;  // trimming proportion, only used by kTrimmedMean

  static CenterMethod median() { return {Kind::kMedian, 0.0}; }
  static CenterMethod trimmed_mean(double omega) {
    return {Kind::kTrimmedMean, omega};
  }

  std::string name() const;
  friend bool operator==(const CenterMethod&, const CenterMethod&) = default;
};

struct ShiftConfig {
  unsigned bits = 2;
  double alpha = 1.0;
  CenterMethod center = CenterMethod::median();
  std::uint64_t master_seed = 0;
  bool renormalize_output = false;

  // Checks everything that can be checked without knowing T.
  void validate() const;
};

struct HeterogeneitySpec {
  std::size_t s = 0;
  std::size_t clusters = 1;
  std::uint32_t sample_size = 1;

  void validate(std::size_t dim) const;
};

}  // namespace shift
