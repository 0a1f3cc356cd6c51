#pragma once

#include <string>
#include <vector>

#include "visemelab/experiment.hpp"
#include "visemelab/generator.hpp"
#include "visemelab/trace.hpp"

namespace testing {

inline const visemelab::Bundle& bundled() {
  static const visemelab::Bundle b = visemelab::load_bundle(visemelab::DataPaths::bundled());
  return b;
}

// A trace whose per-viseme accuracies are given epoch by epoch. Labels are
// v0, v1, ... and all belong to one monolingual run.
inline visemelab::TrainingTrace make_trace(const std::vector<std::vector<double>>& rows) {
  visemelab::TrainingTrace t;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t v = 0; v < n; ++v) t.labels.push_back("v" + std::to_string(v));
  t.inventory_hash = visemelab::inventory_hash(t.labels);
  int epoch = 0;
  for (const auto& r : rows) {
    visemelab::EpochRecord rec;
    rec.epoch = ++epoch;
    double sum = 0.0;
    for (double a : r) {
      rec.accuracy.push_back(a);
      sum += a;
    }
    rec.overall = n ? sum / n : 0.0;
    t.epochs.push_back(rec);
  }
  return t;
}

// Builds a dataset with one frame per item.
inline visemelab::FeatureDataset make_dataset(int dim, const std::vector<std::uint32_t>& labels,
                                              const std::vector<float>& features) {
  visemelab::FeatureDataset ds;
  ds.dim = dim;
  for (std::size_t i = 0; i < labels.size(); ++i) ds.item_offsets.push_back(i + 1);
  ds.labels = labels;
  ds.features = features;
  return ds;
}

}  // namespace testing
