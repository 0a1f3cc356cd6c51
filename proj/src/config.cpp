#include "visemelab/config.hpp"

#include <cstdlib>
#include <filesystem>

#include "visemelab/error.hpp"
#include "visemelab/params_json.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

std::string RunConfig::default_output_dir() {
  const char* env = std::getenv(kOutputEnvVar);
  return env && *env ? env : "visemelab-out";
}

std::vector<RunSpec> RunConfig::run_specs() const {
  std::vector<RunSpec> specs;
  for (auto seed : seeds) {
    for (const auto& fam : families) {
      for (double f : fractions) specs.push_back({parse_family(fam, f), seed});
    }
    for (const auto& fam : sequential_families) {
      for (double f : sequential_fractions) specs.push_back({parse_family(fam, f), seed});
    }
  }
  return specs;
}

void RunConfig::validate() const {
  namespace fs = std::filesystem;
  for (const auto* p : {&data.tables, &data.english_lexicon, &data.mandarin_lexicon,
                        &data.english_words, &data.mandarin_words}) {
    if (!fs::exists(*p)) throw ConfigError("input file '" + *p + "' does not exist");
  }
  settings.training.validate();
  settings.detection.validate();
  if (settings.generator.dim < 2) throw ConfigError("generator.dim must be >= 2");
  if (!(settings.generator.sigma >= 0.0)) throw ConfigError("generator.sigma must be >= 0");
  for (const auto& f : families) {
    if (parse_family(f).kind == ProtocolKind::kSequential) {
      throw ConfigError("'" + f + "' belongs in sequential_families");
    }
  }
  for (const auto& f : sequential_families) {
    if (parse_family(f).kind != ProtocolKind::kSequential) {
      throw ConfigError("'" + f + "' is not a sequential family");
    }
  }
  for (double f : fractions) split_corpus({}, {f, 0});
  for (double f : sequential_fractions) split_corpus({}, {f, 0});
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir)) {
    throw ConfigError("output directory '" + output_dir + "' is not writable");
  }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"data",
        {{"tables", c.data.tables},
         {"english_lexicon", c.data.english_lexicon},
         {"mandarin_lexicon", c.data.mandarin_lexicon},
         {"english_words", c.data.english_words},
         {"mandarin_words", c.data.mandarin_words}}},
       {"generator", c.settings.generator},
       {"training", c.settings.training},
       {"detection", c.settings.detection},
       {"families", c.families},
       {"fractions", c.fractions},
       {"sequential_families", c.sequential_families},
       {"sequential_fractions", c.sequential_fractions},
       {"seeds", c.seeds},
       {"output_dir", c.output_dir},
       {"jobs", c.jobs}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "data") {
        if (value.contains("dir")) c.data = DataPaths::bundled(value.at("dir").get<std::string>());
        for (const auto& [k, v] : value.items()) {
          if (k == "dir") continue;
          if (k == "tables") c.data.tables = v.get<std::string>();
          else if (k == "english_lexicon") c.data.english_lexicon = v.get<std::string>();
          else if (k == "mandarin_lexicon") c.data.mandarin_lexicon = v.get<std::string>();
          else if (k == "english_words") c.data.english_words = v.get<std::string>();
          else if (k == "mandarin_words") c.data.mandarin_words = v.get<std::string>();
          else throw ConfigError("unknown key '" + k + "' in data");
        }
      } else if (key == "generator") {
        value.get_to(c.settings.generator);
      } else if (key == "training") {
        value.get_to(c.settings.training);
      } else if (key == "detection") {
        value.get_to(c.settings.detection);
      } else if (key == "families") {
        c.families = value.get<std::vector<std::string>>();
      } else if (key == "fractions") {
        c.fractions = value.get<std::vector<double>>();
      } else if (key == "sequential_families") {
        c.sequential_families = value.get<std::vector<std::string>>();
      } else if (key == "sequential_fractions") {
        c.sequential_fractions = value.get<std::vector<double>>();
      } else if (key == "seeds") {
        c.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else if (key == "jobs") {
        c.jobs = value.get<int>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return j.get<RunConfig>();
}

}  // namespace visemelab
