#pragma once

#include <string>

#include "visemelab/generator.hpp"

namespace visemelab {

inline constexpr std::uint32_t kFeatureFormatVersion = 1;

/// Binary container: "PPFD", u32 version, u32 dim, u64 inventory hash,
/// u64 seed, u64 item count, then per item u32 frame count, u32 labels and
/// float32 features. All integers and floats little-endian.
std::string encode_features(const FeatureDataset& ds);
FeatureDataset decode_features(const std::string& bytes, const std::string& source = "<features>");

void save_features(const std::string& path, const FeatureDataset& ds);
FeatureDataset load_features(const std::string& path);

}  // namespace visemelab
