#include "visemelab/model.hpp"

#include <cmath>
#include <cstring>

#include "visemelab/error.hpp"
#include "visemelab/rng.hpp"

namespace visemelab {

bool ModelParams::all_finite() const {
  for (double x : weights) {
    if (!std::isfinite(x)) return false;
  }
  for (double x : bias) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::uint64_t ModelParams::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const std::vector<double>& v) {
    for (double x : v) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
      }
    }
  };
  feed(weights);
  feed(bias);
  return h;
}

ModelParams init_model(const VisemeInventory& inventory, int dim, std::uint64_t seed,
                       double init_scale) {
  if (dim < 1) throw ConfigError("model dimension must be >= 1");
  ModelParams p;
  p.classes = inventory.size();
  p.dim = dim;
  p.inventory_hash = inventory.hash();
  p.weights.resize(p.classes * dim);
  p.bias.assign(p.classes, 0.0);
  Rng rng(derive_seed({seed, seed_tag("init")}));
  std::normal_distribution<double> normal(0.0, init_scale);
  for (auto& x : p.weights) x = init_scale > 0.0 ? normal(rng) : 0.0;
  return p;
}

}  // namespace visemelab
