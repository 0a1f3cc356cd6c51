#include "visemelab/inventory.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "visemelab/error.hpp"

namespace visemelab {

std::string InventoryScope::name() const {
  return merged ? "merged" : std::string(language_tag(language));
}

VisemeInventory::VisemeInventory(InventoryScope scope, std::vector<VisemeLabel> labels,
                                 MappingTables tables)
    : scope_(scope), labels_(std::move(labels)), tables_(std::move(tables)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i].rendered(), i);
  hash_ = inventory_hash(rendered_labels());
}

std::optional<std::size_t> VisemeInventory::index_of(const std::string& rendered) const {
  auto it = index_.find(rendered);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VisemeInventory::require_index(const std::string& rendered) const {
  auto idx = index_of(rendered);
  if (!idx) {
    throw ConfigError("viseme '" + rendered + "' is not in the " + scope_.name() + " inventory");
  }
  return *idx;
}

std::optional<std::string> VisemeInventory::viseme_for(LanguageId lang,
                                                       const std::string& phoneme) const {
  const auto& map = tables_.of(lang);
  auto it = map.find(phoneme);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> VisemeInventory::rendered_labels() const {
  std::vector<std::string> out;
  out.reserve(labels_.size());
  for (const auto& l : labels_) out.push_back(l.rendered());
  return out;
}

VisemeInventory build_inventory(InventoryScope scope, const MappingTables& tables) {
  std::set<std::string> bases;
  auto collect = [&](LanguageId lang) {
    for (const auto& [ph, vis] : tables.of(lang)) bases.insert(vis);
  };
  if (scope.merged) {
    collect(LanguageId::kEnglish);
    collect(LanguageId::kMandarin);
  } else {
    collect(scope.language);
  }
  std::vector<VisemeLabel> labels;
  labels.reserve(bases.size());
  for (const auto& b : bases) labels.push_back(classify_viseme(b, tables));
  std::sort(labels.begin(), labels.end(), [](const VisemeLabel& a, const VisemeLabel& b) {
    return a.rendered() < b.rendered();
  });
  return VisemeInventory(scope, std::move(labels), tables);
}

std::uint64_t inventory_hash(const std::vector<std::string>& rendered_labels) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& s : rendered_labels) {
    for (unsigned char c : s) mix(c);
    mix(0);
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace visemelab
