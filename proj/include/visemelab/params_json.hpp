#pragma once

#include <json.hpp>

#include "visemelab/generator.hpp"
#include "visemelab/protocol_types.hpp"
#include "visemelab/training.hpp"

namespace visemelab {

// Missing keys keep their defaults when reading, so partial config files work.
void to_json(nlohmann::json& j, const TrainingConfig& c);
void from_json(const nlohmann::json& j, TrainingConfig& c);
void to_json(nlohmann::json& j, const GeneratorParams& p);
void from_json(const nlohmann::json& j, GeneratorParams& p);
void to_json(nlohmann::json& j, const DetectionParams& p);
void from_json(const nlohmann::json& j, DetectionParams& p);

}  // namespace visemelab
