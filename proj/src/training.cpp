#include "visemelab/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "visemelab/error.hpp"
#include "visemelab/rng.hpp"

namespace visemelab {

void TrainingConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be a finite non-negative number");
  }
  if (!(lr_decay >= 0.0)) throw ConfigError("lr_decay must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(convergence_eps > 0.0)) throw ConfigError("convergence_eps must be > 0");
  if (convergence_patience < 1) throw ConfigError("convergence_patience must be >= 1");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
}

double TrainingConfig::learning_rate_at(std::uint64_t update) const {
  return learning_rate / (1.0 + lr_decay * static_cast<double>(update));
}

std::uint64_t updates_per_epoch(const FeatureDataset& ds, const TrainingConfig& config) {
  const auto b = static_cast<std::uint64_t>(config.batch_size);
  return (ds.num_items() + b - 1) / b;
}

std::vector<double> class_weights(const FeatureDataset& ds, std::size_t classes, bool balanced) {
  std::vector<double> counts(classes, 0.0);
  for (auto y : ds.labels) counts.at(y) += 1.0;
  std::size_t present = 0;
  for (double c : counts) present += c > 0.0;
  std::vector<double> w(classes, 0.0);
  const double n = static_cast<double>(ds.labels.size());
  for (std::size_t c = 0; c < classes; ++c) {
    if (counts[c] == 0.0) continue;
    w[c] = balanced ? n / (static_cast<double>(present) * counts[c]) : 1.0;
  }
  return w;
}

void check_training_data(const ModelParams& params, const FeatureDataset& ds) {
  if (ds.dim != params.dim) throw IncompatibleError("feature dimension does not match the model");
  if (ds.inventory_hash != params.inventory_hash) {
    throw IncompatibleError("dataset labels belong to a different inventory than the model");
  }
  for (auto y : ds.labels) {
    if (y >= params.classes) throw IncompatibleError("training label outside the model's inventory");
  }
}

EpochStats train_epoch_inplace(ModelParams& params, const FeatureDataset& ds,
                               const TrainingConfig& config, int epoch_index,
                               const std::vector<double>& weights, std::uint64_t first_update) {
  std::vector<std::size_t> order(ds.num_items());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed({config.seed, seed_tag("shuffle"), static_cast<std::uint64_t>(epoch_index)}));
  std::shuffle(order.begin(), order.end(), rng);

  Gradient g;
  std::vector<std::size_t> frames;
  double loss_sum = 0.0;
  std::uint64_t steps = 0;
  for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
    std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
    frames.clear();
    for (std::size_t i = start; i < stop; ++i) {
      for (std::size_t f = ds.item_offsets[order[i]]; f < ds.item_offsets[order[i] + 1]; ++f) {
        frames.push_back(f);
      }
    }
    if (frames.empty()) continue;
    batch_gradient(params, ds, frames, weights, g);
    if (!std::isfinite(g.loss)) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch_index));
    }
    const double lr = config.learning_rate_at(first_update + steps);
    if (lr != 0.0) {
      for (std::size_t k = 0; k < params.weights.size(); ++k) params.weights[k] -= lr * g.weights[k];
      for (std::size_t k = 0; k < params.bias.size(); ++k) params.bias[k] -= lr * g.bias[k];
    }
    loss_sum += g.loss;
    ++steps;
  }
  if (!params.all_finite()) {
    throw NumericError("parameters became non-finite at epoch " + std::to_string(epoch_index));
  }
  return {steps ? loss_sum / static_cast<double>(steps) : 0.0, steps};
}

ModelParams train_epoch(const ModelParams& params, const FeatureDataset& ds,
                        const TrainingConfig& config, int epoch_index) {
  config.validate();
  check_training_data(params, ds);
  ModelParams out = params;
  const auto first = static_cast<std::uint64_t>(std::max(0, epoch_index - 1)) *
                     updates_per_epoch(ds, config);
  train_epoch_inplace(out, ds, config, epoch_index,
                      class_weights(ds, params.classes, config.class_balanced), first);
  return out;
}

bool detect_convergence_online(const std::vector<double>& overall, double eps, int patience) {
  const auto n = overall.size();
  if (patience < 1 || n < static_cast<std::size_t>(patience) + 1) return false;
  // A plateau of `patience` epochs has patience - 1 internal gains; with
  // patience 1 the single most recent gain is checked.
  std::size_t gains = std::max(1, patience - 1);
  for (std::size_t i = 0; i < gains; ++i) {
    if (!(overall[n - 1 - i] - overall[n - 2 - i] < eps)) return false;
  }
  return true;
}

}  // namespace visemelab
