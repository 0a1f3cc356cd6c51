#include "visemelab/params_json.hpp"

#include "visemelab/error.hpp"

namespace visemelab {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const char* section) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + section);
  }
}

}  // namespace

void to_json(nlohmann::json& j, const TrainingConfig& c) {
  j = {{"learning_rate", c.learning_rate},
       {"lr_decay", c.lr_decay},
       {"batch_size", c.batch_size},
       {"max_epochs", c.max_epochs},
       {"seed", c.seed},
       {"convergence_eps", c.convergence_eps},
       {"convergence_patience", c.convergence_patience},
       {"class_balanced", c.class_balanced},
       {"init_scale", c.init_scale}};
}

void from_json(const nlohmann::json& j, TrainingConfig& c) {
  reject_unknown(j,
                 {"learning_rate", "lr_decay", "batch_size", "max_epochs", "seed",
                  "convergence_eps", "convergence_patience", "class_balanced", "init_scale"},
                 "training");
  read(j, "learning_rate", c.learning_rate);
  read(j, "lr_decay", c.lr_decay);
  read(j, "batch_size", c.batch_size);
  read(j, "max_epochs", c.max_epochs);
  read(j, "seed", c.seed);
  read(j, "convergence_eps", c.convergence_eps);
  read(j, "convergence_patience", c.convergence_patience);
  read(j, "class_balanced", c.class_balanced);
  read(j, "init_scale", c.init_scale);
}

void to_json(nlohmann::json& j, const GeneratorParams& p) {
  j = {{"dim", p.dim},
       {"baseline", p.baseline},
       {"context_lift", p.context_lift},
       {"separation", p.separation},
       {"sigma", p.sigma},
       {"confusion", p.confusion},
       {"language_shift", p.language_shift},
       {"min_frames", p.min_frames},
       {"max_frames", p.max_frames},
       {"context_frames", p.context_frames},
       {"context_label", p.context_label},
       {"test_samples_per_word", p.test_samples_per_word}};
}

void from_json(const nlohmann::json& j, GeneratorParams& p) {
  reject_unknown(j,
                 {"dim", "baseline", "context_lift", "separation", "sigma", "confusion",
                  "language_shift", "min_frames", "max_frames", "context_frames", "context_label",
                  "test_samples_per_word"},
                 "generator");
  read(j, "dim", p.dim);
  read(j, "baseline", p.baseline);
  read(j, "context_lift", p.context_lift);
  read(j, "separation", p.separation);
  read(j, "sigma", p.sigma);
  read(j, "confusion", p.confusion);
  read(j, "language_shift", p.language_shift);
  read(j, "min_frames", p.min_frames);
  read(j, "max_frames", p.max_frames);
  read(j, "context_frames", p.context_frames);
  read(j, "context_label", p.context_label);
  read(j, "test_samples_per_word", p.test_samples_per_word);
}

void to_json(nlohmann::json& j, const DetectionParams& p) {
  j = {{"surge_threshold", p.surge_threshold},
       {"surge_fraction", p.surge_fraction},
       {"window", p.window}};
}

void from_json(const nlohmann::json& j, DetectionParams& p) {
  reject_unknown(j, {"surge_threshold", "surge_fraction", "window"}, "detection");
  read(j, "surge_threshold", p.surge_threshold);
  read(j, "surge_fraction", p.surge_fraction);
  read(j, "window", p.window);
}

}  // namespace visemelab
