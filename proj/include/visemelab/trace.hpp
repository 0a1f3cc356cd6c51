#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visemelab/protocol_types.hpp"

namespace visemelab {

using AccuracyRow = std::vector<std::optional<double>>;  // nullopt = viseme absent from test set

struct EpochRecord {
  int epoch = 0;
  int phase = 1;
  double overall = 0.0;
  AccuracyRow accuracy;
};

struct TrainingTrace {
  ProtocolSpec protocol;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> labels;
  std::uint64_t inventory_hash = 0;
  std::uint64_t params_digest = 0;
  std::optional<int> switch_epoch;  // last phase-1 epoch of a sequential run
  std::vector<EpochRecord> epochs;

  std::size_t num_epochs() const { return epochs.size(); }
  std::size_t num_visemes() const { return labels.size(); }
  std::optional<std::size_t> index_of(const std::string& label) const;
  std::vector<double> overall_series() const;
  /// Sub-trace holding only the epochs of one phase, renumbered from 1.
  TrainingTrace phase_only(int phase) const;

  /// Throws if epochs are not contiguous from 1, phases decrease, accuracies
  /// leave [0, 1], rows have the wrong width or the hash mismatches the labels.
  void validate() const;
};

nlohmann::json protocol_to_json(const ProtocolSpec& p);
ProtocolSpec protocol_from_json(const nlohmann::json& j);

/// One JSON header line, then `epoch phase overall a1,a2,...` per epoch with
/// `-` for absent visemes. Numbers are written in shortest round-trip form.
std::string serialize_trace(const TrainingTrace& trace);
TrainingTrace parse_trace(const std::string& text, const std::string& source = "<trace>");

void save_trace(const std::string& path, const TrainingTrace& trace);
TrainingTrace load_trace(const std::string& path);

}  // namespace visemelab
