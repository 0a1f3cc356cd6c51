#include "visemelab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "visemelab/error.hpp"
#include "visemelab/rng.hpp"

namespace visemelab {

const std::vector<std::pair<std::string, std::string>> kDefaultConfusionPairs = {
    {"t", "s"}, {"t", "k"}, {"s", "S"}, {"i", "e"}, {"E", "a"}, {"@", "E"},
    {"u", "o"}, {"o", "O"}, {"a", "@"}, {"p", "f"}, {"T", "f"}, {"T", "t"},
    {"y", "u"}, {"y", "i"}, {"ɨ", "i"}, {"ɨ", "s"},
};

std::size_t ConfusabilityModel::row_of(const std::string& rendered) const {
  auto it = std::find(labels.begin(), labels.end(), rendered);
  if (it == labels.end()) {
    throw ConfigError("viseme '" + rendered + "' has no mean in the confusability model");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

void ConfusabilityModel::validate() const {
  std::size_t n = labels.size();
  if (dim < 2) throw ConfigError("generator dimension must be at least 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("generator sigma must be >= 0");
  if (min_frames < 1 || max_frames < min_frames) throw ConfigError("bad frames-per-viseme range");
  if (context_frames < 0) throw ConfigError("context frames must be >= 0");
  if (means.size() != n * dim) throw ConfigError("mean matrix has the wrong shape");
  if (shift_en.size() != n * dim || shift_cmn.size() != n * dim) {
    throw ConfigError("language shift matrix has the wrong shape");
  }
  if (confusion.size() != n * n) throw ConfigError("confusion matrix has the wrong shape");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double w = confusion[a * n + b];
      if (w < 0.0 || w > 1.0 || w != confusion[b * n + a]) {
        throw ConfigError("confusion weights must be symmetric and within [0, 1]");
      }
    }
  }
}

std::vector<double> mix_means(const std::vector<double>& raw, const std::vector<double>& weights,
                              std::size_t n, int dim) {
  std::vector<double> out(n * dim, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    double norm = 1.0;
    for (int j = 0; j < dim; ++j) out[v * dim + j] = raw[v * dim + j];
    for (std::size_t u = 0; u < n; ++u) {
      double w = u == v ? 0.0 : weights[v * n + u];
      if (w == 0.0) continue;
      norm += w;
      for (int j = 0; j < dim; ++j) out[v * dim + j] += w * raw[u * dim + j];
    }
    for (int j = 0; j < dim; ++j) out[v * dim + j] /= norm;
  }
  return out;
}

ConfusabilityModel make_confusability_model(const VisemeInventory& inventory,
                                            const GeneratorParams& p, std::uint64_t seed) {
  ConfusabilityModel m;
  m.dim = p.dim;
  m.sigma = p.sigma;
  m.min_frames = p.min_frames;
  m.max_frames = p.max_frames;
  m.context_frames = p.context_frames;
  m.context_label = p.context_label;
  m.labels = inventory.rendered_labels();
  const std::size_t n = m.labels.size();
  const int d = p.dim;
  if (d < 2) throw ConfigError("generator dimension must be at least 2");

  Rng rng(derive_seed({seed, seed_tag("confusability")}));
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> base_dir(d);
  for (auto& x : base_dir) x = normal(rng);
  double norm = std::sqrt(std::inner_product(base_dir.begin(), base_dir.end(), base_dir.begin(), 0.0));
  for (auto& x : base_dir) x /= norm;

  // Viseme-specific parts live orthogonal to the shared direction.
  std::vector<double> raw(n * d);
  const double scale = p.separation / std::sqrt(static_cast<double>(d));
  for (std::size_t v = 0; v < n; ++v) {
    double* row = &raw[v * d];
    for (int j = 0; j < d; ++j) row[j] = normal(rng) * scale;
    double along = std::inner_product(row, row + d, base_dir.begin(), 0.0);
    for (int j = 0; j < d; ++j) row[j] -= along * base_dir[j];
  }

  m.confusion.assign(n * n, 0.0);
  if (p.confusion > 0.0) {
    for (const auto& [a, b] : kDefaultConfusionPairs) {
      std::optional<std::size_t> ia, ib;
      for (std::size_t v = 0; v < n; ++v) {
        const auto& base = inventory.label(v).base;
        if (base == a) ia = v;
        if (base == b) ib = v;
      }
      if (ia && ib) m.confusion[*ia * n + *ib] = m.confusion[*ib * n + *ia] = p.confusion;
    }
  }
  m.means = mix_means(raw, m.confusion, n, d);

  auto ctx = std::find(m.labels.begin(), m.labels.end(), p.context_label);
  for (std::size_t v = 0; v < n; ++v) {
    double* row = &m.means[v * d];
    bool is_ctx = ctx != m.labels.end() && static_cast<std::size_t>(ctx - m.labels.begin()) == v;
    if (is_ctx) std::fill(row, row + d, 0.0);
    double lift = p.baseline * (is_ctx ? 1.0 + p.context_lift : 1.0);
    for (int j = 0; j < d; ++j) row[j] += lift * base_dir[j];
  }

  for (auto* shift : {&m.shift_en, &m.shift_cmn}) {
    shift->assign(n * d, 0.0);
    if (p.language_shift > 0.0) {
      for (auto& x : *shift) x = normal(rng) * p.language_shift;
    }
  }
  m.validate();
  return m;
}

void FeatureDataset::append(const FeatureDataset& other) {
  if (other.dim != dim || other.inventory_hash != inventory_hash) {
    throw IncompatibleError("cannot concatenate feature datasets of different shape");
  }
  std::size_t base = labels.size();
  for (std::size_t i = 1; i < other.item_offsets.size(); ++i) {
    item_offsets.push_back(base + other.item_offsets[i]);
  }
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  features.insert(features.end(), other.features.begin(), other.features.end());
}

namespace {

struct ItemRef {
  std::size_t word;
  std::uint32_t sample_id;
};

struct Item {
  std::vector<std::uint32_t> labels;
  std::vector<float> features;
};

struct Prepared {
  std::vector<ItemRef> refs;
  // Per word: model rows and inventory indices of its visemes.
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::vector<std::uint32_t>> targets;
  std::size_t ctx_row = 0;
  std::uint32_t ctx_target = 0;
};

Prepared prepare(const LabeledCorpus& corpus, const ConfusabilityModel& model,
                 const VisemeInventory& inventory) {
  model.validate();
  Prepared p;
  for (std::size_t w = 0; w < corpus.entries.size(); ++w) {
    const auto& e = corpus.entries[w];
    std::vector<std::size_t> rows;
    std::vector<std::uint32_t> targets;
    for (const auto& v : e.visemes) {
      auto r = v.rendered();
      rows.push_back(model.row_of(r));
      targets.push_back(static_cast<std::uint32_t>(inventory.require_index(r)));
    }
    p.rows.push_back(std::move(rows));
    p.targets.push_back(std::move(targets));
    for (auto id : e.sample_ids) p.refs.push_back({w, id});
  }
  if (model.context_frames > 0) {
    p.ctx_row = model.row_of(model.context_label);
    p.ctx_target = static_cast<std::uint32_t>(inventory.require_index(model.context_label));
  }
  return p;
}

Item make_item(const Prepared& p, const ItemRef& ref, const ConfusabilityModel& model,
               LanguageId lang, std::uint64_t seed) {
  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(lang), ref.word, ref.sample_id}));
  std::uniform_int_distribution<int> frames(model.min_frames, model.max_frames);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = model.dim;
  const auto& shift = model.shift(lang);

  std::vector<std::size_t> rows;
  Item item;
  auto push = [&](std::size_t row, std::uint32_t target, int k) {
    for (int f = 0; f < k; ++f) {
      rows.push_back(row);
      item.labels.push_back(target);
    }
  };
  push(p.ctx_row, p.ctx_target, model.context_frames);
  const auto& wr = p.rows[ref.word];
  const auto& wt = p.targets[ref.word];
  for (std::size_t i = 0; i < wr.size(); ++i) push(wr[i], wt[i], frames(rng));
  push(p.ctx_row, p.ctx_target, model.context_frames);

  item.features.resize(rows.size() * d);
  for (std::size_t f = 0; f < rows.size(); ++f) {
    const double* mu = &model.means[rows[f] * d];
    const double* sh = &shift[rows[f] * d];
    for (int j = 0; j < d; ++j) {
      double noise = model.sigma > 0.0 ? model.sigma * normal(rng) : 0.0;
      item.features[f * d + j] = static_cast<float>(mu[j] + sh[j] + noise);
    }
  }
  return item;
}

FeatureDataset assemble(std::vector<Item>& items, int dim, std::uint64_t hash,
                        std::uint64_t seed) {
  FeatureDataset ds;
  ds.dim = dim;
  ds.inventory_hash = hash;
  ds.seed = seed;
  std::size_t frames = 0;
  for (const auto& it : items) frames += it.labels.size();
  ds.labels.reserve(frames);
  ds.features.reserve(frames * dim);
  ds.item_offsets.reserve(items.size() + 1);
  for (auto& it : items) {
    ds.labels.insert(ds.labels.end(), it.labels.begin(), it.labels.end());
    ds.features.insert(ds.features.end(), it.features.begin(), it.features.end());
    ds.item_offsets.push_back(ds.labels.size());
  }
  return ds;
}

}  // namespace

FeatureDataset generate_features(const LabeledCorpus& corpus, const ConfusabilityModel& model,
                                 const VisemeInventory& inventory, std::uint64_t seed) {
  Prepared p = prepare(corpus, model, inventory);
  std::vector<Item> items(p.refs.size());
  const auto n = static_cast<std::ptrdiff_t>(p.refs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    items[i] = make_item(p, p.refs[i], model, corpus.language, seed);
  }
  return assemble(items, model.dim, inventory.hash(), seed);
}

FeatureDataset generate_features_serial(const LabeledCorpus& corpus,
                                        const ConfusabilityModel& model,
                                        const VisemeInventory& inventory, std::uint64_t seed) {
  Prepared p = prepare(corpus, model, inventory);
  std::vector<Item> items;
  items.reserve(p.refs.size());
  for (const auto& ref : p.refs) items.push_back(make_item(p, ref, model, corpus.language, seed));
  return assemble(items, model.dim, inventory.hash(), seed);
}

FeatureDataset generate_test_features(const LabeledCorpus& corpus,
                                      const ConfusabilityModel& model,
                                      const VisemeInventory& inventory, std::uint64_t seed,
                                      int samples_per_word) {
  if (samples_per_word < 1) throw ConfigError("test samples per word must be >= 1");
  LabeledCorpus test = corpus;
  for (auto& e : test.entries) {
    e.sample_count = static_cast<std::uint32_t>(samples_per_word);
    e.sample_ids.resize(e.sample_count);
    std::iota(e.sample_ids.begin(), e.sample_ids.end(), 0u);
  }
  return generate_features(test, model, inventory, derive_seed({seed, seed_tag("test")}));
}

}  // namespace visemelab
