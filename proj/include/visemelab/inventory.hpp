#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "visemelab/language.hpp"
#include "visemelab/viseme.hpp"

namespace visemelab {

/// Which output head an inventory describes.
struct InventoryScope {
  bool merged = true;
  LanguageId language = LanguageId::kEnglish;  // ignored when merged

  static InventoryScope Merged() { return {true, LanguageId::kEnglish}; }
  static InventoryScope Of(LanguageId lang) { return {false, lang}; }

  std::string name() const;
};

class VisemeInventory {
 public:
  VisemeInventory() = default;
  VisemeInventory(InventoryScope scope, std::vector<VisemeLabel> labels, MappingTables tables);

  const InventoryScope& scope() const { return scope_; }
  const std::vector<VisemeLabel>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  const VisemeLabel& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> index_of(const std::string& rendered) const;
  std::size_t require_index(const std::string& rendered) const;

  /// Viseme symbol for `phoneme` in `lang`, if the tables have one.
  std::optional<std::string> viseme_for(LanguageId lang, const std::string& phoneme) const;

  std::vector<std::string> rendered_labels() const;

  /// FNV-1a over the rendered labels in order; identifies the output head.
  std::uint64_t hash() const { return hash_; }

  const MappingTables& tables() const { return tables_; }

 private:
  InventoryScope scope_;
  std::vector<VisemeLabel> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  MappingTables tables_;
  std::uint64_t hash_ = 0;
};

VisemeInventory build_inventory(InventoryScope scope, const MappingTables& tables);

std::uint64_t inventory_hash(const std::vector<std::string>& rendered_labels);

std::string hash_hex(std::uint64_t h);

}  // namespace visemelab
