#pragma once

#include <optional>

#include "visemelab/analysis.hpp"
#include "visemelab/corpus.hpp"
#include "visemelab/error.hpp"
#include "visemelab/generator.hpp"
#include "visemelab/trace.hpp"
#include "visemelab/training.hpp"

namespace visemelab {

struct Corpora {
  std::optional<LabeledCorpus> english;
  std::optional<LabeledCorpus> mandarin;

  const LabeledCorpus& of(LanguageId lang) const;
};

/// Raised when a switch-at-CP run sees no critical period in phase 1.
class NoCriticalPeriodError : public Error {
 public:
  explicit NoCriticalPeriodError(TrainingTrace partial)
      : Error(ExitCode::kNumeric, "no critical period detected before the epoch limit in phase 1"),
        partial_(std::move(partial)) {}

  const TrainingTrace& partial_trace() const { return partial_; }

 private:
  TrainingTrace partial_;
};

struct RunInputs {
  const Corpora* corpora = nullptr;
  const MappingTables* tables = nullptr;
  GeneratorParams generator;
  TrainingConfig training;
  DetectionParams detection;
};

/// Trains one model under `protocol`, evaluating on held-out data after every
/// epoch. The run seed (training.seed) also seeds the confusability model,
/// the split and the features, so runs that share a seed see the same world.
TrainingTrace run_protocol(const ProtocolSpec& protocol, const RunInputs& inputs);

}  // namespace visemelab
