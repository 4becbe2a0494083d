#include "shift/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "shift/evaluation.hpp"
#include "shift/hash_codec.hpp"
#include "shift/parallel.hpp"
#include "shift/random.hpp"
#include "shift/shift_estimator.hpp"
#include "shift/synthetic_gen.hpp"

namespace shift {

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view value) {
  Int out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    config_error("'" + std::string(key) + "' expects an integer, got '" +
                 std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    config_error("'" + std::string(key) + "' expects a number, got '" +
                 std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  config_error("'" + std::string(key) + "' expects true/false, got '" +
               std::string(value) + "'");
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "shift-median") return EstimatorKind::kShiftMedian;
  if (name == "shift-trimmed") return EstimatorKind::kShiftTrimmed;
  if (name == "baseline-local") return EstimatorKind::kBaselineLocal;
  if (name == "baseline-global") return EstimatorKind::kBaselineGlobal;
  config_error("unknown estimator '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::general, 17);
  return std::string(buffer, res.ptr);
}

std::string mode_label(const ExperimentConfig& config) {
  if (config.mode == Mode::kNGram) {
    return config.window_policy == WindowPolicy::kConcatenate ? "ngram/concatenate"
                                                              : "ngram/break";
  }
  if (config.central == CentralKind::kUniform) return "synthetic/uniform";
  return "synthetic/geometric:" + format_double(config.beta);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

}  // namespace

const char* to_string(Mode mode) noexcept {
  return mode == Mode::kSynthetic ? "synthetic" : "ngram";
}

const char* to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::kShiftMedian: return "shift-median";
    case EstimatorKind::kShiftTrimmed: return "shift-trimmed";
    case EstimatorKind::kBaselineLocal: return "baseline-local";
    case EstimatorKind::kBaselineGlobal: return "baseline-global";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (n < 2) config_error("n must be >= 2 so that ln(n) > 0");
  if (n_new < 2) config_error("n-new must be >= 2");
  if (bits < 1 || bits > kMaxBits) config_error("bits must lie in [1, 20]");
  if (!(omega >= 0.0 && omega < 0.5)) config_error("omega must lie in [0, 0.5)");
  if (!std::isfinite(alpha_multiplier)) config_error("alpha-multiplier must be finite");
  if (repeats < 1) config_error("repeats must be >= 1");
  if (estimators.empty()) config_error("select at least one estimator");
  if (mode == Mode::kSynthetic) {
    if (d < 2) config_error("d must be >= 2");
    if (s > d) config_error("s must not exceed d");
    if (clusters < 1) config_error("T must be >= 1");
    if (central == CentralKind::kTruncatedGeometric && !(beta > 0.0 && beta < 1.0)) {
      config_error("beta must lie in (0, 1)");
    }
  } else {
    if (k < 1 || k > kMaxGramLength) config_error("k must lie in [1, 4]");
    if (corpus_dir.empty()) config_error("ngram mode needs corpus-dir");
  }
}

double ExperimentConfig::alpha() const { return alpha_from_multiplier(alpha_multiplier, n); }

std::vector<std::string_view> config_keys() {
  return {"mode",    "d",       "s",           "T",      "n",
          "n-new",   "bits",    "central",     "beta",   "estimators",
          "omega",   "alpha-multiplier", "repeats", "master-seed",
          "corpus-dir", "k",    "window-policy", "output-path", "output-format",
          "record-timing"};
}

void apply_config_entry(ExperimentConfig& config, std::string_view key,
                        std::string_view raw_value) {
  const std::string_view value = trim(raw_value);
  if (key == "mode") {
    if (value == "synthetic") config.mode = Mode::kSynthetic;
    else if (value == "ngram") config.mode = Mode::kNGram;
    else config_error("mode must be synthetic or ngram");
  } else if (key == "d") {
    config.d = parse_integer<std::size_t>(key, value);
  } else if (key == "s") {
    config.s = parse_integer<std::size_t>(key, value);
  } else if (key == "T") {
    config.clusters = parse_integer<std::size_t>(key, value);
  } else if (key == "n") {
    config.n = parse_integer<std::uint32_t>(key, value);
  } else if (key == "n-new") {
    config.n_new = parse_integer<std::uint32_t>(key, value);
  } else if (key == "bits") {
    config.bits = parse_integer<unsigned>(key, value);
  } else if (key == "central") {
    if (value == "uniform") config.central = CentralKind::kUniform;
    else if (value == "geometric") config.central = CentralKind::kTruncatedGeometric;
    else config_error("central must be uniform or geometric");
  } else if (key == "beta") {
    config.beta = parse_real(key, value);
  } else if (key == "estimators") {
    config.estimators.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) config.estimators.push_back(parse_estimator(item));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else if (key == "omega") {
    config.omega = parse_real(key, value);
  } else if (key == "alpha-multiplier") {
    config.alpha_multiplier = parse_real(key, value);
  } else if (key == "repeats") {
    config.repeats = parse_integer<std::size_t>(key, value);
  } else if (key == "master-seed") {
    config.master_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "corpus-dir") {
    config.corpus_dir = std::string(value);
  } else if (key == "k") {
    config.k = parse_integer<int>(key, value);
  } else if (key == "window-policy") {
    if (value == "concatenate") config.window_policy = WindowPolicy::kConcatenate;
    else if (value == "break") config.window_policy = WindowPolicy::kBreakAtStripped;
    else config_error("window-policy must be concatenate or break");
  } else if (key == "output-path") {
    config.output_path = std::string(value);
  } else if (key == "output-format") {
    if (value == "csv") config.output_format = OutputFormat::kCsv;
    else if (value == "json") config.output_format = OutputFormat::kJson;
    else config_error("output-format must be csv or json");
  } else if (key == "record-timing") {
    config.record_timing = parse_bool(key, value);
  } else {
    config_error("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      config_error("config line " + std::to_string(line_no) + " lacks '='");
    }
    apply_config_entry(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::string to_config_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "mode=" << to_string(config.mode) << '\n'
      << "d=" << config.d << '\n'
      << "s=" << config.s << '\n'
      << "T=" << config.clusters << '\n'
      << "n=" << config.n << '\n'
      << "n-new=" << config.n_new << '\n'
      << "bits=" << config.bits << '\n'
      << "central="
      << (config.central == CentralKind::kUniform ? "uniform" : "geometric") << '\n'
      << "beta=" << format_double(config.beta) << '\n'
      << "estimators=";
  for (std::size_t i = 0; i < config.estimators.size(); ++i) {
    out << (i ? "," : "") << to_string(config.estimators[i]);
  }
  out << '\n'
      << "omega=" << format_double(config.omega) << '\n'
      << "alpha-multiplier=" << format_double(config.alpha_multiplier) << '\n'
      << "repeats=" << config.repeats << '\n'
      << "master-seed=" << config.master_seed << '\n'
      << "corpus-dir=" << config.corpus_dir << '\n'
      << "k=" << config.k << '\n'
      << "window-policy="
      << (config.window_policy == WindowPolicy::kConcatenate ? "concatenate" : "break")
      << '\n'
      << "output-path=" << config.output_path << '\n'
      << "output-format="
      << (config.output_format == OutputFormat::kCsv ? "csv" : "json") << '\n'
      << "record-timing=" << (config.record_timing ? "true" : "false") << '\n';
  return out.str();
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const ResultRow& row) {
  out << row.mode << ',' << row.estimator << ',' << row.run << ',' << row.seed
      << ',' << row.d << ',' << row.s << ',' << row.clusters << ',' << row.n << ','
      << row.bits << ',' << format_double(row.alpha) << ','
      << format_double(row.omega) << ',' << row.k << ','
      << format_double(row.avg_l2_sq) << ',' << format_double(row.avg_l1) << ','
      << format_double(row.finetuned_mean) << ',' << format_double(row.wall_ms)
      << '\n';
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  write_csv_header(out);
  for (const auto& row : rows) write_csv_row(out, row);
  if (!out) throw Error(ErrorCode::kIo, "failed to write CSV output");
}

void write_json(std::ostream& out, std::span<const ResultRow> rows) {
  const auto real = [](double x) -> nlohmann::json {
    if (std::isnan(x)) return nullptr;
    return x;
  };
  nlohmann::json array = nlohmann::json::array();
  for (const auto& row : rows) {
    array.push_back({{"mode", row.mode},
                     {"estimator", row.estimator},
                     {"run", row.run},
                     {"seed", row.seed},
                     {"d", row.d},
                     {"s", row.s},
                     {"T", row.clusters},
                     {"n", row.n},
                     {"b", row.bits},
                     {"alpha", real(row.alpha)},
                     {"omega", real(row.omega)},
                     {"k", row.k},
                     {"avg_l2_sq", real(row.avg_l2_sq)},
                     {"avg_l1", real(row.avg_l1)},
                     {"finetuned_mean", real(row.finetuned_mean)},
                     {"wall_ms", real(row.wall_ms)}});
  }
  out << array.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed to write JSON output");
}

void write_rows(std::ostream& out, std::span<const ResultRow> rows, OutputFormat format) {
  if (format == OutputFormat::kJson) write_json(out, rows);
  else write_csv(out, rows);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run) noexcept {
  return derive_seed(master_seed, "run", run);
}

Distribution central_distribution(const ExperimentConfig& config) {
  if (config.central == CentralKind::kUniform) return uniform_central(config.d);
  return truncated_geometric_central(config.d, config.beta);
}

namespace {

Distribution perturbed_truth(const Distribution& center, const ExperimentConfig& config,
                             std::uint64_t seed, std::size_t t) {
  return perturb_sparse(center, config.s, derive_seed(seed, "gen", t),
                        static_cast<std::uint32_t>(t))
      .dist;
}

}  // namespace

std::vector<Distribution> synthetic_truths(const ExperimentConfig& config,
                                           std::uint64_t seed) {
  const Distribution center = central_distribution(config);
  std::vector<Distribution> truths;
  truths.reserve(config.clusters);
  for (std::size_t t = 0; t < config.clusters; ++t) {
    truths.push_back(perturbed_truth(center, config, seed, t));
  }
  return truths;
}

ClusterData simulate_synthetic_clusters(const ExperimentConfig& config,
                                        std::uint64_t seed, std::size_t first,
                                        std::size_t count, unsigned decode_threads) {
  const Distribution center = central_distribution(config);
  const std::uint64_t hash_seed = derive_seed(seed, "hash");
  ClusterData data;
  data.truths.reserve(count);
  data.estimates.reserve(count);
  for (std::size_t t = first; t < first + count; ++t) {
    const auto id = static_cast<std::uint32_t>(t);
    Distribution truth = perturbed_truth(center, config, seed, t);
    const auto points = sample_cluster(truth, config.n, derive_seed(seed, "sample", t));
    const auto messages = encode_cluster(points, id, hash_seed, config.bits, config.d);
    data.estimates.push_back(decode_cluster(messages, id, hash_seed, config.bits,
                                            config.d, {decode_threads}));
    data.truths.push_back(std::move(truth));
  }
  return data;
}

ClusterData simulate_synthetic_run(const ExperimentConfig& config,
                                   std::uint64_t seed, unsigned decode_threads) {
  return simulate_synthetic_clusters(config, seed, 0, config.clusters, decode_threads);
}

ClusterData simulate_from_truths(std::span<const Distribution> truths,
                                 const ExperimentConfig& config,
                                 std::uint64_t seed, unsigned decode_threads) {
  const std::uint64_t hash_seed = derive_seed(seed, "hash");
  ClusterData data;
  for (std::size_t t = 0; t < truths.size(); ++t) {
    const auto id = static_cast<std::uint32_t>(t);
    const std::size_t dim = truths[t].dim();
    const auto points = sample_cluster(truths[t], config.n, derive_seed(seed, "sample", t));
    const auto messages = encode_cluster(points, id, hash_seed, config.bits, dim);
    data.estimates.push_back(
        decode_cluster(messages, id, hash_seed, config.bits, dim, {decode_threads}));
    data.truths.push_back(truths[t]);
  }
  return data;
}

std::vector<KGramDistribution> load_ngram_truths(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config.corpus_dir);
  std::vector<KGramDistribution> truths;
  truths.reserve(corpus.clusters.size());
  for (const auto& cluster : corpus.clusters) {
    truths.push_back(kgram_distribution_from_raw(cluster.text, config.k,
                                                 config.window_policy));
  }
  return truths;
}

std::vector<ResultRow> evaluate_run(const ExperimentConfig& config,
                                    const ClusterData& data, std::size_t run,
                                    std::uint64_t seed) {
  const double alpha = config.alpha();
  ResultRow base;
  base.mode = mode_label(config);
  base.run = run;
  base.seed = seed;
  base.d = data.truths.front().dim();
  base.s = config.mode == Mode::kSynthetic ? config.s : 0;
  base.clusters = data.truths.size();
  base.n = config.n;
  base.bits = config.bits;
  base.alpha = alpha;
  base.omega = config.omega;
  base.k = config.mode == Mode::kNGram ? config.k : 0;

  std::vector<ResultRow> rows;
  for (const EstimatorKind kind : config.estimators) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<EstimateVector> estimates;
    double finetuned = std::numeric_limits<double>::quiet_NaN();
    switch (kind) {
      case EstimatorKind::kShiftMedian:
      case EstimatorKind::kShiftTrimmed: {
        ShiftConfig shift_config;
        shift_config.bits = config.bits;
        shift_config.alpha = alpha;
        shift_config.center = kind == EstimatorKind::kShiftMedian
                                  ? CenterMethod::median()
                                  : CenterMethod::trimmed_mean(config.omega);
        shift_config.master_seed = seed;
        ShiftResult result = shift_estimate(data.estimates, shift_config);
        double replaced = 0.0;
        for (const auto& report : result.reports) {
          replaced += static_cast<double>(report.replaced_count);
        }
        finetuned = replaced / static_cast<double>(result.reports.size());
        estimates = std::move(result.estimates);
        break;
      }
      case EstimatorKind::kBaselineLocal:
        estimates = baseline_local(data.estimates);
        break;
      case EstimatorKind::kBaselineGlobal:
        estimates.assign(data.estimates.size(), baseline_global(data.estimates));
        break;
    }
    const MetricSummary summary = metrics(data.truths, estimates);
    ResultRow row = base;
    row.estimator = to_string(kind);
    row.avg_l2_sq = summary.avg_l2_sq;
    row.avg_l1 = summary.avg_l1;
    row.finetuned_mean = finetuned;
    row.wall_ms = config.record_timing ? elapsed_ms(start) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Runs `per_run(run, seed, decode_threads)` for every repeat, parallel over
// runs when there are enough of them and inside the decoder otherwise.
template <class PerRun>
auto for_each_run(const ExperimentConfig& config, PerRun&& per_run) {
  using Result = decltype(per_run(std::size_t{}, std::uint64_t{}, 1u));
  std::vector<Result> results(config.repeats);
  const unsigned threads = std::max(1u, config.threads);
  const bool parallel_runs = config.repeats >= threads;
  parallel_for(config.repeats, parallel_runs ? threads : 1u, [&](std::size_t run) {
    const std::uint64_t seed = run_seed(config.master_seed, run);
    results[run] = per_run(run, seed, parallel_runs ? 1u : threads);
  });
  return results;
}

std::vector<Distribution> truths_of(const std::vector<KGramDistribution>& grams) {
  std::vector<Distribution> out;
  out.reserve(grams.size());
  for (const auto& g : grams) out.push_back(g.dist);
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Distribution> ngram_truths;
  if (config.mode == Mode::kNGram) ngram_truths = truths_of(load_ngram_truths(config));

  auto per_run = for_each_run(config, [&](std::size_t run, std::uint64_t seed,
                                          unsigned decode_threads) {
    const ClusterData data =
        config.mode == Mode::kSynthetic
            ? simulate_synthetic_run(config, seed, decode_threads)
            : simulate_from_truths(ngram_truths, config, seed, decode_threads);
    return evaluate_run(config, data, run, seed);
  });
  std::vector<ResultRow> rows;
  for (auto& run_rows : per_run) {
    for (auto& row : run_rows) rows.push_back(std::move(row));
  }
  return rows;
}

TransferOutcome transfer_run(const ExperimentConfig& config, std::uint64_t seed,
                             const CenterMethod& center,
                             std::span<const HashedEstimate> training) {
  if (config.mode != Mode::kSynthetic) {
    config_error("transfer runs are only defined for synthetic data");
  }
  const std::size_t t = config.clusters;
  const auto id = static_cast<std::uint32_t>(t);
  const std::uint64_t hash_seed = derive_seed(seed, "hash");
  const Distribution truth = perturbed_truth(central_distribution(config), config, seed, t);
  const auto points = sample_cluster(truth, config.n_new, derive_seed(seed, "sample", t));
  const auto messages = encode_cluster(points, id, hash_seed, config.bits, config.d);
  const HashedEstimate local =
      decode_cluster(messages, id, hash_seed, config.bits, config.d);

  const CentralEstimate central = robust_center(training, center);
  const FineTuneResult tuned =
      fine_tune(central, local, alpha_from_multiplier(config.alpha_multiplier, config.n_new));
  const std::vector<Distribution> truths{truth};
  const std::vector<EstimateVector> transferred{debias(tuned.hashed, config.bits)};
  const std::vector<EstimateVector> local_only{debias(local.values(), config.bits)};

  TransferOutcome out;
  out.transfer_l2_sq = metrics(truths, transferred).avg_l2_sq;
  out.local_l2_sq = metrics(truths, local_only).avg_l2_sq;
  out.replaced_count = tuned.report.replaced_count;
  return out;
}

TransferOutcome transfer_run(const ExperimentConfig& config, std::uint64_t seed,
                             const CenterMethod& center, unsigned decode_threads) {
  config.validate();
  const ClusterData data = simulate_synthetic_run(config, seed, decode_threads);
  return transfer_run(config, seed, center, data.estimates);
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "n") return SweepAxis::kN;
  if (name == "T") return SweepAxis::kClusters;
  if (name == "s") return SweepAxis::kS;
  if (name == "b" || name == "bits") return SweepAxis::kBits;
  if (name == "r") return SweepAxis::kAlphaMultiplier;
  if (name == "omega") return SweepAxis::kOmega;
  config_error("unknown sweep axis '" + std::string(name) + "'");
}

ExperimentConfig with_axis_value(const ExperimentConfig& config, SweepAxis axis,
                                 double value) {
  const auto as_count = [&](const char* name) -> std::uint64_t {
    if (!(value >= 0.0) || value != std::floor(value) || value > 4294967295.0) {
      config_error(std::string("sweep values for ") + name +
                   " must be non-negative integers");
    }
    return static_cast<std::uint64_t>(value);
  };
  ExperimentConfig out = config;
  switch (axis) {
    case SweepAxis::kN: out.n = static_cast<std::uint32_t>(as_count("n")); break;
    case SweepAxis::kClusters: out.clusters = as_count("T"); break;
    case SweepAxis::kS: out.s = as_count("s"); break;
    case SweepAxis::kBits: out.bits = static_cast<unsigned>(as_count("b")); break;
    case SweepAxis::kAlphaMultiplier: out.alpha_multiplier = value; break;
    case SweepAxis::kOmega: out.omega = value; break;
  }
  return out;
}

std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepAxis axis,
                             std::span<const double> values) {
  if (values.empty()) config_error("sweep needs at least one value");
  std::vector<ResultRow> rows;
  for (double value : values) {
    auto part = run_experiment(with_axis_value(config, axis, value));
    for (auto& row : part) rows.push_back(std::move(row));
  }
  return rows;
}

double mean_finetuned_count(const CentralEstimate& central,
                            std::span<const HashedEstimate> estimates,
                            double alpha) {
  if (estimates.empty()) throw Error(ErrorCode::kEmptyInput, "no clusters");
  double total = 0.0;
  for (const auto& local : estimates) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < local.dim(); ++k) {
      const double l = local.values()[k];
      if (std::abs(central.values[k] - l) >
          fine_tune_threshold(l, alpha, local.sample_size())) {
        ++count;
      }
    }
    total += static_cast<double>(count);
  }
  return total / static_cast<double>(estimates.size());
}

AlphaReport alpha_report(const ExperimentConfig& config,
                         std::span<const double> r_values,
                         std::optional<CenterMethod> center) {
  config.validate();
  if (r_values.empty()) config_error("alpha report needs at least one r value");
  std::vector<double> rs(r_values.begin(), r_values.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  const CenterMethod method = center.value_or(CenterMethod::trimmed_mean(config.omega));

  std::vector<Distribution> ngram_truths;
  if (config.mode == Mode::kNGram) ngram_truths = truths_of(load_ngram_truths(config));

  auto per_run = for_each_run(config, [&](std::size_t, std::uint64_t seed,
                                          unsigned decode_threads) {
    const ClusterData data =
        config.mode == Mode::kSynthetic
            ? simulate_synthetic_run(config, seed, decode_threads)
            : simulate_from_truths(ngram_truths, config, seed, decode_threads);
    const CentralEstimate central = robust_center(data.estimates, method);
    std::vector<double> counts;
    for (double r : rs) {
      counts.push_back(mean_finetuned_count(central, data.estimates,
                                            alpha_from_multiplier(r, config.n)));
    }
    return std::pair{counts, data.truths.front().dim()};
  });

  AlphaReport report;
  report.d = per_run.front().second;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double mean = 0.0;
    for (const auto& run : per_run) mean += run.first[i];
    mean /= static_cast<double>(per_run.size());
    report.rows.push_back({rs[i], alpha_from_multiplier(rs[i], config.n), mean});
  }
  for (const auto& row : report.rows) {
    if (row.finetuned_mean < static_cast<double>(report.d) / 2.0) {
      report.recommended_r = row.r;
      break;
    }
  }
  return report;
}

void write_alpha_report(std::ostream& out, const AlphaReport& report) {
  out << "r,alpha,finetuned_mean,recommended\n";
  for (const auto& row : report.rows) {
    const bool recommended = report.recommended_r && *report.recommended_r == row.r;
    out << format_double(row.r) << ',' << format_double(row.alpha) << ','
        << format_double(row.finetuned_mean) << ',' << (recommended ? 1 : 0) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write alpha report");
}

}  // namespace shift
