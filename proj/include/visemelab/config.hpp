#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "visemelab/experiment.hpp"

namespace visemelab {

inline constexpr const char* kOutputEnvVar = "VISEMELAB_OUT";

/// Everything a `train` or `reproduce` invocation needs. The defaults are the
/// bundled preset, so an empty config file is valid.
struct RunConfig {
  DataPaths data = DataPaths::bundled();
  ExperimentSettings settings;
  std::vector<std::string> families = {"mono-en", "mono-cmn", "bilingual"};
  std::vector<double> fractions = {0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> sequential_families = {"seq-en-cp", "seq-en-conv", "seq-cmn-cp",
                                                  "seq-cmn-conv"};
  std::vector<double> sequential_fractions = {1.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string output_dir = default_output_dir();
  int jobs = 1;

  /// $VISEMELAB_OUT if set, otherwise ./visemelab-out.
  static std::string default_output_dir();

  std::vector<RunSpec> run_specs() const;

  /// Checks parameter ranges, that every input file exists and that the
  /// output directory can be created.
  void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_run_config(const std::string& path);

}  // namespace visemelab
