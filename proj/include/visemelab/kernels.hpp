#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "visemelab/generator.hpp"
#include "visemelab/model.hpp"

namespace visemelab {

/// Numerically stable softmax of `z[0..n)` into `p`.
void softmax(const double* z, std::size_t n, double* p);

struct Gradient {
  std::vector<double> weights;  // same shape as ModelParams::weights
  std::vector<double> bias;
  double loss = 0.0;  // weighted mean cross-entropy over the frames

  void reset(std::size_t classes, int dim);
};

/// Weighted frame-level cross-entropy and its gradient, averaged over
/// `frames` (indices into `ds`). `class_weights` scales each frame's term by
/// the weight of its true label.
void batch_gradient_serial(const ModelParams& params, const FeatureDataset& ds,
                           std::span<const std::size_t> frames,
                           const std::vector<double>& class_weights, Gradient& out);

/// Same result as the serial kernel up to summation order. Frames are cut into
/// fixed-size chunks whose partial sums are added in chunk order, so the output
/// does not depend on the thread count.
void batch_gradient(const ModelParams& params, const FeatureDataset& ds,
                    std::span<const std::size_t> frames, const std::vector<double>& class_weights,
                    Gradient& out);

inline constexpr std::size_t kGradientChunk = 128;

struct PerVisemeAccuracy {
  std::vector<std::uint64_t> correct;
  std::vector<std::uint64_t> total;

  std::size_t size() const { return total.size(); }
  bool present(std::size_t c) const { return total[c] > 0; }
  double accuracy(std::size_t c) const;
  double overall() const;
};

/// Argmax prediction per frame, ties to the lowest index.
PerVisemeAccuracy evaluate_serial(const ModelParams& params, const FeatureDataset& test);
PerVisemeAccuracy evaluate(const ModelParams& params, const FeatureDataset& test);

}  // namespace visemelab
