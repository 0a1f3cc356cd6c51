#pragma once

#include <cstdint>
#include <vector>

#include "visemelab/kernels.hpp"

namespace visemelab {

struct TrainingConfig {
  double learning_rate = 0.0085;
  // Inverse-time decay over SGD updates: update n (counted from 0 across the
  // whole run) uses lr / (1 + lr_decay * n).
  double lr_decay = 0.0025;
  int batch_size = 32;  // items (word samples) per step
  int max_epochs = 40;
  std::uint64_t seed = 1;
  double convergence_eps = 0.002;
  int convergence_patience = 3;
  // Weight each frame by (N / (K_present * n_label)) so rare visemes count as
  // much as frequent ones.
  bool class_balanced = true;
  double init_scale = 0.01;

  void validate() const;
  double learning_rate_at(std::uint64_t update) const;
};

/// Per-label loss weights for `ds`; labels absent from `ds` get 0.
std::vector<double> class_weights(const FeatureDataset& ds, std::size_t classes, bool balanced);

/// Checks shape, inventory and label range once, before any training step.
void check_training_data(const ModelParams& params, const FeatureDataset& ds);

struct EpochStats {
  double mean_loss = 0.0;
  std::uint64_t updates = 0;
};

/// One pass over `ds` in an order seeded by (config.seed, epoch_index).
/// `first_update` is the run-wide index of this epoch's first SGD update and
/// drives the learning-rate schedule. Throws NumericError on a non-finite loss
/// or parameter.
EpochStats train_epoch_inplace(ModelParams& params, const FeatureDataset& ds,
                               const TrainingConfig& config, int epoch_index,
                               const std::vector<double>& weights, std::uint64_t first_update);

/// Number of SGD updates one epoch over `ds` makes.
std::uint64_t updates_per_epoch(const FeatureDataset& ds, const TrainingConfig& config);

/// Pure form: assumes every earlier epoch ran over a dataset of the same size.
ModelParams train_epoch(const ModelParams& params, const FeatureDataset& ds,
                        const TrainingConfig& config, int epoch_index);

/// True once the last `patience` epochs of `overall` lie on a plateau: each of
/// their consecutive gains is below eps. Needs at least patience + 1 epochs.
bool detect_convergence_online(const std::vector<double>& overall, double eps, int patience);

}  // namespace visemelab
