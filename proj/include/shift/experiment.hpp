#pragma once

// Experiment orchestration: configuration, deterministic seeding, simulated
// runs, sweeps, the fine-tuned-entry report used to pick alpha, and CSV output.
//
// Seeds: run r uses run_seed = derive_seed(master_seed, "run", r). Within a
// run, cluster t draws its perturbation from derive_seed(run_seed, "gen", t),
// its datapoints from derive_seed(run_seed, "sample", t) and its hash functions
// from derive_seed(run_seed, "hash"). Cluster t's data therefore depends only on
// (run_seed, t), never on T or on the other clusters.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shift/core_model.hpp"
#include "shift/ngram_pipeline.hpp"
#include "shift/robust_agg.hpp"

namespace shift {

enum class Mode { kSynthetic, kNGram };
enum class CentralKind { kUniform, kTruncatedGeometric };
enum class OutputFormat { kCsv, kJson };
enum class EstimatorKind { kShiftMedian, kShiftTrimmed, kBaselineLocal, kBaselineGlobal };

const char* to_string(Mode mode) noexcept;
const char* to_string(EstimatorKind kind) noexcept;

struct ExperimentConfig {
  Mode mode = Mode::kSynthetic;
  std::size_t d = 300;
  std::size_t s = 5;
  std::size_t clusters = 30;  // T
  std::uint32_t n = 100000;
  std::uint32_t n_new = 1000;  // sample size of a transfer cluster
  unsigned bits = 2;
  CentralKind central = CentralKind::kUniform;
  double beta = 0.95;
  std::vector<EstimatorKind> estimators = {
      EstimatorKind::kShiftMedian, EstimatorKind::kShiftTrimmed,
      EstimatorKind::kBaselineLocal, EstimatorKind::kBaselineGlobal};
  double omega = 0.1;
  double alpha_multiplier = 0.0;  // alpha = 2^r ln(n)
  std::size_t repeats = 10;
  std::uint64_t master_seed = 1;
  std::string corpus_dir;
  int k = 2;
  WindowPolicy window_policy = WindowPolicy::kConcatenate;
  std::string output_path;
  OutputFormat output_format = OutputFormat::kCsv;
  bool record_timing = false;
  unsigned threads = 1;

  void validate() const;
  double alpha() const;
};

// Flat key=value configuration. Keys are the kebab-case field names listed by
// config_keys(); '#' starts a comment.
std::vector<std::string_view> config_keys();
void apply_config_entry(ExperimentConfig& config, std::string_view key,
                        std::string_view value);
void apply_config_text(ExperimentConfig& config, std::string_view text);
std::string to_config_text(const ExperimentConfig& config);

struct ResultRow {
  // "synthetic/uniform", "synthetic/geometric:<beta>", "ngram/concatenate" or
  // "ngram/break"
  std::string mode;
  std::string estimator;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::size_t s = 0;
  std::size_t clusters = 0;
  std::uint32_t n = 0;
  unsigned bits = 0;
  double alpha = 0.0;
  double omega = 0.0;
  int k = 0;
  double avg_l2_sq = 0.0;
  double avg_l1 = 0.0;
  double finetuned_mean = 0.0;  // NaN for the baselines
  double wall_ms = 0.0;         // zero unless timing is recorded
};

inline constexpr std::string_view kCsvHeader =
    "mode,estimator,run,seed,d,s,T,n,b,alpha,omega,k,avg_l2_sq,avg_l1,"
    "finetuned_mean,wall_ms";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRow& row);
void write_csv(std::ostream& out, std::span<const ResultRow> rows);
// JSON array of objects keyed by the CSV column names; NaN becomes null.
void write_json(std::ostream& out, std::span<const ResultRow> rows);
void write_rows(std::ostream& out, std::span<const ResultRow> rows, OutputFormat format);

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run) noexcept;

// Ground truth plus hashed estimates for one run.
struct ClusterData {
  std::vector<Distribution> truths;
  std::vector<HashedEstimate> estimates;
};

Distribution central_distribution(const ExperimentConfig& config);

// Synthetic clusters [first, first + count) of the run; each cluster only
// depends on (run_seed, cluster id) and the config.
ClusterData simulate_synthetic_clusters(const ExperimentConfig& config,
                                        std::uint64_t seed, std::size_t first,
                                        std::size_t count, unsigned decode_threads = 1);
// Perturbed truths of clusters [0, T) for a run, without sampling.
std::vector<Distribution> synthetic_truths(const ExperimentConfig& config,
                                           std::uint64_t seed);
ClusterData simulate_synthetic_run(const ExperimentConfig& config,
                                   std::uint64_t seed, unsigned decode_threads = 1);

// Encodes and decodes n datapoints drawn from each given truth.
ClusterData simulate_from_truths(std::span<const Distribution> truths,
                                 const ExperimentConfig& config,
                                 std::uint64_t seed, unsigned decode_threads = 1);

std::vector<KGramDistribution> load_ngram_truths(const ExperimentConfig& config);

// Runs every selected estimator on a run's data and scores it.
std::vector<ResultRow> evaluate_run(const ExperimentConfig& config,
                                    const ClusterData& data, std::size_t run,
                                    std::uint64_t seed);

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// Transfer to a cluster outside the training set: clusters [0, T) of the run
// train the center, cluster T draws n-new datapoints. Errors are squared l2
// against cluster T's truth.
struct TransferOutcome {
  double transfer_l2_sq = 0.0;
  double local_l2_sq = 0.0;  // debiased hashed estimate of the n-new samples
  std::size_t replaced_count = 0;
};
TransferOutcome transfer_run(const ExperimentConfig& config, std::uint64_t seed,
                             const CenterMethod& center, unsigned decode_threads = 1);
// Same, reusing training data already simulated for this run.
TransferOutcome transfer_run(const ExperimentConfig& config, std::uint64_t seed,
                             const CenterMethod& center,
                             std::span<const HashedEstimate> training);

enum class SweepAxis { kN, kClusters, kS, kBits, kAlphaMultiplier, kOmega };

SweepAxis parse_sweep_axis(std::string_view name);
ExperimentConfig with_axis_value(const ExperimentConfig& config, SweepAxis axis,
                                 double value);
std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepAxis axis,
                             std::span<const double> values);

struct AlphaReportRow {
  double r = 0.0;
  double alpha = 0.0;
  double finetuned_mean = 0.0;
};

struct AlphaReport {
  std::vector<AlphaReportRow> rows;  // ascending r
  std::optional<double> recommended_r;
  std::size_t d = 0;
};

// Mean over clusters and runs of the number of entries whose gap to the center
// exceeds sqrt(alpha * local / n), for alpha = 2^r ln(n). The recommendation is
// the smallest alpha whose count is below d / 2.
AlphaReport alpha_report(const ExperimentConfig& config,
                         std::span<const double> r_values,
                         std::optional<CenterMethod> center = std::nullopt);

// Same count for already simulated data and its center.
double mean_finetuned_count(const CentralEstimate& central,
                            std::span<const HashedEstimate> estimates,
                            double alpha);

void write_alpha_report(std::ostream& out, const AlphaReport& report);

}  // namespace shift
