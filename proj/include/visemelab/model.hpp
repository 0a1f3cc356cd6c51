#pragma once

#include <cstdint>
#include <vector>

#include "visemelab/inventory.hpp"

namespace visemelab {

/// Linear-softmax frame classifier: logits = W x + b.
struct ModelParams {
  std::size_t classes = 0;
  int dim = 0;
  std::vector<double> weights;  // classes x dim, row-major
  std::vector<double> bias;     // classes
  std::uint64_t inventory_hash = 0;

  double w(std::size_t c, int j) const { return weights[c * dim + j]; }
  bool all_finite() const;
  /// FNV-1a over the raw bytes of weights and bias.
  std::uint64_t digest() const;
};

/// Weights ~ N(0, init_scale^2), bias zero.
ModelParams init_model(const VisemeInventory& inventory, int dim, std::uint64_t seed,
                       double init_scale = 0.01);

}  // namespace visemelab
