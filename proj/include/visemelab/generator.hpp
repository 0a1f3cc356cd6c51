#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "visemelab/corpus.hpp"
#include "visemelab/inventory.hpp"

namespace visemelab {

struct GeneratorParams {
  int dim = 16;
  // Every articulated viseme shares a large common component along one
  // direction ("mouth is moving"); context frames sit further out on it.
  double baseline = 10.0;
  double context_lift = 0.7;
  // Scale of the viseme-specific part of each mean.
  double separation = 2.0;
  double sigma = 0.5;
  // Weight applied to every pair in kDefaultConfusionPairs.
  double confusion = 0.0;
  // Per-language, per-viseme displacement of the means (std. dev.).
  double language_shift = 0.3;
  int min_frames = 2;
  int max_frames = 5;
  int context_frames = 3;
  std::string context_label = "sil";
  int test_samples_per_word = 1;
};

/// Pairs of viseme symbols that look alike on the lips.
extern const std::vector<std::pair<std::string, std::string>> kDefaultConfusionPairs;

struct ConfusabilityModel {
  int dim = 0;
  double sigma = 0.0;
  int min_frames = 2;
  int max_frames = 5;
  int context_frames = 0;
  std::string context_label;
  std::vector<std::string> labels;  // rendered labels, row order of `means`
  std::vector<double> means;        // labels.size() x dim, already confusion-mixed
  std::vector<double> confusion;    // labels.size() x labels.size(), symmetric, zero diagonal
  std::vector<double> shift_en;     // labels.size() x dim
  std::vector<double> shift_cmn;

  std::size_t row_of(const std::string& rendered) const;
  const std::vector<double>& shift(LanguageId lang) const {
    return lang == LanguageId::kEnglish ? shift_en : shift_cmn;
  }
  void validate() const;
};

/// Builds means for every label of `inventory` (normally the merged one).
ConfusabilityModel make_confusability_model(const VisemeInventory& inventory,
                                            const GeneratorParams& params, std::uint64_t seed);

/// Mixes raw means: m_v = (r_v + sum_u w_vu r_u) / (1 + sum_u w_vu).
std::vector<double> mix_means(const std::vector<double>& raw, const std::vector<double>& weights,
                              std::size_t n, int dim);

struct FeatureDataset {
  int dim = 0;
  std::uint64_t inventory_hash = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> item_offsets{0};  // frame ranges, size items+1
  std::vector<std::uint32_t> labels;         // one per frame
  std::vector<float> features;               // frames x dim

  std::size_t num_items() const { return item_offsets.size() - 1; }
  std::size_t num_frames() const { return labels.size(); }
  void append(const FeatureDataset& other);
};

/// One item per (word, sample id). Each item's stream is seeded from
/// (seed, language, word index, sample id), so output is identical whether
/// items are generated serially or in parallel.
FeatureDataset generate_features(const LabeledCorpus& corpus, const ConfusabilityModel& model,
                                 const VisemeInventory& inventory, std::uint64_t seed);

FeatureDataset generate_features_serial(const LabeledCorpus& corpus,
                                        const ConfusabilityModel& model,
                                        const VisemeInventory& inventory, std::uint64_t seed);

/// Held-out set: `samples_per_word` fresh samples per word on a separate stream.
FeatureDataset generate_test_features(const LabeledCorpus& corpus,
                                      const ConfusabilityModel& model,
                                      const VisemeInventory& inventory, std::uint64_t seed,
                                      int samples_per_word);

}  // namespace visemelab
