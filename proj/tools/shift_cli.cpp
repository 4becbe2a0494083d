// Command-line front end for the SHIFT experiment harness.
//
//   shift simulate     synthetic runs, one CSV row per (estimator, run)
//   shift ngram        the same on k-gram truths from a corpus directory
//   shift sweep        Cartesian sweep of one axis (n, T, s, b, r, omega)
//   shift alpha-report mean fine-tuned entry counts for alpha = 2^r ln(n)
//   shift dump-truth   ground-truth distributions of one run as CSV
//
// Exit codes: 0 success, 2 configuration error, 3 IO error, 4 internal error.
// SHIFT_THREADS sets the worker count; nothing else is read from the
// environment.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "shift/experiment.hpp"
#include "shift/synthetic_gen.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

int exit_code_for(shift::ErrorCode code) {
  switch (code) {
    case shift::ErrorCode::kInvalidArgument:
    case shift::ErrorCode::kSBudgetExceedsDim:
    case shift::ErrorCode::kBetaOutOfRange:
    case shift::ErrorCode::kNonPositiveAlpha:
    case shift::ErrorCode::kTrimTooLarge:
    case shift::ErrorCode::kDimensionTooSmall:
      return kExitConfig;
    case shift::ErrorCode::kIo:
    case shift::ErrorCode::kTextTooShort:
      return kExitIo;
    default:
      return kExitInternal;
  }
}

unsigned threads_from_environment() {
  const char* raw = std::getenv("SHIFT_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (*end != '\0' || value == 0 || value > 1024) {
    throw shift::Error(shift::ErrorCode::kInvalidArgument,
                       std::string("SHIFT_THREADS must be a positive integer, got '") +
                           raw + "'");
  }
  return static_cast<unsigned>(value);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw shift::Error(shift::ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream stream(list);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw shift::Error(shift::ErrorCode::kInvalidArgument,
                         "bad value '" + item + "' in list '" + list + "'");
    }
  }
  return out;
}

// Every experiment knob is a string option named after its config key, so
// config files and flags go through one parser.
struct KnobOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value configuration file");
    for (auto key : shift::config_keys()) {
      const std::string name(key);
      if (name == "mode") continue;  // implied by the subcommand
      options[name] = app.add_option("--" + name, values[name], "config key " + name);
    }
  }

  shift::ExperimentConfig build(shift::Mode mode) const {
    shift::ExperimentConfig config;
    config.mode = mode;
    if (!config_file.empty()) shift::apply_config_text(config, read_file(config_file));
    for (const auto& [name, option] : options) {
      if (option->count() > 0) shift::apply_config_entry(config, name, values.at(name));
    }
    config.threads = threads_from_environment();
    return config;
  }
};

template <class Writer>
void emit(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw shift::Error(shift::ErrorCode::kIo, "failed to write stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw shift::Error(shift::ErrorCode::kIo, "cannot open " + path);
  writer(out);
  out.close();
  if (!out) throw shift::Error(shift::ErrorCode::kIo, "failed to write " + path);
}

void emit_rows(const shift::ExperimentConfig& config,
               const std::vector<shift::ResultRow>& rows) {
  emit(config.output_path,
       [&](std::ostream& out) { shift::write_rows(out, rows, config.output_format); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed discrete distribution estimation under b-bit "
               "communication and sparse heterogeneity"};
  app.require_subcommand(1);

  KnobOptions simulate_knobs;
  auto* simulate = app.add_subcommand("simulate", "run synthetic experiments");
  simulate_knobs.attach(*simulate);

  KnobOptions ngram_knobs;
  auto* ngram = app.add_subcommand("ngram", "run experiments on corpus k-grams");
  ngram_knobs.attach(*ngram);

  KnobOptions sweep_knobs;
  std::string sweep_axis;
  std::string sweep_values;
  bool sweep_ngram = false;
  auto* sweep = app.add_subcommand("sweep", "sweep one configuration axis");
  sweep_knobs.attach(*sweep);
  sweep->add_option("--axis", sweep_axis, "n, T, s, b, r or omega")->required();
  sweep->add_option("--values", sweep_values, "comma-separated axis values")->required();
  sweep->add_flag("--ngram", sweep_ngram, "sweep the corpus experiment");

  KnobOptions alpha_knobs;
  std::string r_values = "-5,-4,-3,-2,-1,0,1,2,3,4";
  std::string alpha_center = "trimmed";
  bool alpha_ngram = false;
  auto* alpha = app.add_subcommand("alpha-report", "fine-tuned entry counts per alpha");
  alpha_knobs.attach(*alpha);
  alpha->add_option("--r-values", r_values, "exponents r for alpha = 2^r ln(n)");
  alpha->add_option("--center", alpha_center, "median or trimmed")
      ->check(CLI::IsMember({"median", "trimmed"}));
  alpha->add_flag("--ngram", alpha_ngram, "use corpus k-gram truths");

  KnobOptions dump_knobs;
  std::size_t dump_run = 0;
  bool dump_ngram = false;
  auto* dump = app.add_subcommand("dump-truth", "write ground-truth distributions as CSV");
  dump_knobs.attach(*dump);
  dump->add_option("--run", dump_run, "run index whose truths are written");
  dump->add_flag("--ngram", dump_ngram, "dump corpus k-gram truths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      const auto config = simulate_knobs.build(shift::Mode::kSynthetic);
      emit_rows(config, shift::run_experiment(config));
    } else if (ngram->parsed()) {
      const auto config = ngram_knobs.build(shift::Mode::kNGram);
      emit_rows(config, shift::run_experiment(config));
    } else if (sweep->parsed()) {
      const auto config =
          sweep_knobs.build(sweep_ngram ? shift::Mode::kNGram : shift::Mode::kSynthetic);
      const auto values = parse_values(sweep_values);
      emit_rows(config, shift::sweep(config, shift::parse_sweep_axis(sweep_axis), values));
    } else if (alpha->parsed()) {
      const auto config =
          alpha_knobs.build(alpha_ngram ? shift::Mode::kNGram : shift::Mode::kSynthetic);
      const auto center = alpha_center == "median"
                              ? shift::CenterMethod::median()
                              : shift::CenterMethod::trimmed_mean(config.omega);
      const auto report = shift::alpha_report(config, parse_values(r_values), center);
      emit(config.output_path,
           [&](std::ostream& out) { shift::write_alpha_report(out, report); });
    } else if (dump->parsed()) {
      auto config =
          dump_knobs.build(dump_ngram ? shift::Mode::kNGram : shift::Mode::kSynthetic);
      config.validate();
      std::vector<shift::Distribution> truths;
      if (config.mode == shift::Mode::kNGram) {
        for (auto& g : shift::load_ngram_truths(config)) truths.push_back(g.dist);
      } else {
        truths = shift::synthetic_truths(config,
                                         shift::run_seed(config.master_seed, dump_run));
      }
      emit(config.output_path,
           [&](std::ostream& out) { shift::write_truth_csv(out, truths); });
    }
  } catch (const shift::Error& e) {
    std::cerr << "shift: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "shift: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
