#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visemelab/analysis.hpp"
#include "visemelab/protocol.hpp"

namespace visemelab {

struct DataPaths {
  std::string tables;
  std::string english_lexicon;
  std::string mandarin_lexicon;
  std::string english_words;
  std::string mandarin_words;

  /// Files shipped under `dir` (the bundled data directory by default).
  static DataPaths bundled(const std::string& dir = default_data_dir());
  static std::string default_data_dir();
};

struct Bundle {
  MappingTables tables;
  Corpora corpora;
};

Bundle load_bundle(const DataPaths& paths);

struct RunSpec {
  ProtocolSpec protocol;
  std::uint64_t seed = 1;

  /// `<family>_f<fraction>_s<seed>`, e.g. mono-en_f0.25_s3.
  std::string stem() const;
};

struct RunResult {
  RunSpec spec;
  std::optional<TrainingTrace> trace;
  bool skipped = false;  // an existing output was reused
  std::string error;     // empty on success
  int exit_code = 0;
};

struct ExperimentSettings {
  GeneratorParams generator;
  TrainingConfig training;  // training.seed is replaced per run
  DetectionParams detection;
};

/// Runs every run spec, up to `jobs` at a time. A failing run is recorded in its
/// result and does not stop the others. When `out_dir` is non-empty each trace
/// is written to `<out_dir>/<stem>.trace`; existing traces are loaded instead
/// of retrained unless `force` is set.
std::vector<RunResult> run_matrix(const std::vector<RunSpec>& specs, const Bundle& bundle,
                                  const ExperimentSettings& settings, int jobs,
                                  const std::string& out_dir = "", bool force = false);

/// Fraction grid: mono-en, mono-cmn and bilingual at every fraction.
std::vector<RunSpec> table_matrix(const std::vector<std::uint64_t>& seeds,
                                  const std::vector<double>& fractions);

/// The four sequential families at one fraction.
std::vector<RunSpec> sequential_matrix(const std::vector<std::uint64_t>& seeds, double fraction);

struct ClaimResult {
  std::string name;
  std::string description;
  bool held = false;
  std::size_t satisfied = 0;
  std::size_t total = 0;
  double required_share = 0.0;
};

struct SeedComparison {
  std::uint64_t seed = 0;
  std::optional<CrossInferenceReport> report;
  std::string error;
};

struct ClaimsSummary {
  std::vector<ClaimResult> claims;  // exactly four, in a fixed order
  std::vector<SeedComparison> comparisons;
  // Mean final overall accuracy per family and fraction.
  std::map<std::string, std::map<double, double>> final_accuracy;
  nlohmann::json to_json() const;
};

/// Checks the qualitative claims on a finished matrix: CP existence at the
/// full split, CP moving earlier with more data, switch-at-CP beating
/// switch-at-convergence for every class, and unique classes dropping more
/// than common ones.
ClaimsSummary evaluate_claims(const std::vector<RunResult>& results,
                              const DetectionParams& detection);

/// Looks up a finished trace in `results`.
const TrainingTrace* find_trace(const std::vector<RunResult>& results, const std::string& family,
                                double fraction, std::uint64_t seed);

}  // namespace visemelab
