#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "visemelab/trace.hpp"
#include "visemelab/viseme.hpp"

namespace visemelab {

/// gain(t, v) = acc(t, v) - acc(t - 1, v). Row i holds epoch i + 2.
struct GainMatrix {
  std::vector<AccuracyRow> rows;

  std::size_t num_rows() const { return rows.size(); }
  int epoch_of_row(std::size_t i) const { return static_cast<int>(i) + 2; }
};

GainMatrix gains(const TrainingTrace& trace);
GainMatrix gains(const std::vector<AccuracyRow>& accuracy);

struct CriticalPeriodReport {
  std::optional<int> cp_epoch;
  double surge_fraction = 0.0;  // at cp_epoch (0 when absent)
  double mean_gain = 0.0;       // at cp_epoch
  DetectionParams params;
  // Per-epoch statistics, index 0 = epoch 2.
  std::vector<double> surge_fraction_by_epoch;
  std::vector<double> mean_gain_by_epoch;
};

/// Earliest epoch at which the share of visemes whose (smoothed) gain is at
/// least the threshold reaches the required fraction. Needs >= 3 epochs.
CriticalPeriodReport detect_critical_period(const TrainingTrace& trace,
                                            const DetectionParams& params);
CriticalPeriodReport detect_critical_period(const std::vector<AccuracyRow>& accuracy,
                                            const DetectionParams& params);

/// Streaming form used to switch languages mid-run. With window w a decision
/// about epoch t is available once epoch t + (w - 1) / 2 has been pushed.
class CriticalPeriodStream {
 public:
  explicit CriticalPeriodStream(DetectionParams params);

  /// Returns the CP epoch the first time one is confirmed, nullopt otherwise.
  std::optional<int> push(const AccuracyRow& accuracy);
  std::optional<int> fired() const { return fired_; }

 private:
  DetectionParams params_;
  std::vector<AccuracyRow> rows_;
  std::optional<int> fired_;
};

struct CpSummary {
  std::vector<std::pair<double, std::optional<int>>> points;  // sorted by fraction
  bool monotone = false;  // non-increasing over the detected points
  bool partial = false;   // some fraction had no CP
};

CpSummary cp_vs_data_fraction(std::vector<std::pair<double, CriticalPeriodReport>> reports);

struct SequentialPair {
  const TrainingTrace* switch_at_cp = nullptr;
  const TrainingTrace* switch_at_convergence = nullptr;
};

struct ClassComparison {
  VisemeClass cls = VisemeClass::kCommon;
  std::size_t visemes = 0;  // visemes with both accuracies available
  double at_cp = 0.0;
  double at_convergence = 0.0;
  double drop = 0.0;  // at_cp - at_convergence
  std::optional<double> mono_english;
  std::optional<double> mono_mandarin;
};

struct VisemeComparison {
  std::string label;
  VisemeClass cls = VisemeClass::kCommon;
  std::optional<double> at_cp;
  std::optional<double> at_convergence;
  std::optional<double> mono_english;
  std::optional<double> mono_mandarin;
};

struct CrossInferenceReport {
  std::array<ClassComparison, 3> classes;  // indexed by VisemeClass
  std::vector<VisemeComparison> visemes;   // merged inventory order

  const ClassComparison& of(VisemeClass cls) const { return classes[static_cast<int>(cls)]; }
};

struct MonolingualRefs {
  const TrainingTrace* english = nullptr;
  const TrainingTrace* mandarin = nullptr;
};

/// Compares final-epoch L2 accuracies of runs switched at the CP against runs
/// switched at convergence. Several pairs (e.g. both L1 directions, several
/// seeds) are pooled per viseme before the unweighted class means.
CrossInferenceReport cross_inference_compare(const std::vector<SequentialPair>& pairs,
                                             const MonolingualRefs& refs = {});

CrossInferenceReport cross_inference_compare(const TrainingTrace& trace_cp,
                                             const TrainingTrace& trace_conv,
                                             const MonolingualRefs& refs = {});

nlohmann::json to_json(const CriticalPeriodReport& r);
nlohmann::json to_json(const CpSummary& s);
nlohmann::json to_json(const CrossInferenceReport& r);

}  // namespace visemelab
