#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "visemelab/language.hpp"

namespace visemelab {

enum class VisemeClass { kCommon, kEnglishOnly, kMandarinOnly };

std::string_view viseme_class_name(VisemeClass cls);

/// A viseme symbol tagged with which language tables use it.
struct VisemeLabel {
  std::string base;
  VisemeClass cls = VisemeClass::kCommon;

  /// `base`, `base_E` or `base_M`.
  std::string rendered() const;

  auto operator<=>(const VisemeLabel&) const = default;
};

/// Splits a rendered label back into base and class.
VisemeLabel parse_rendered_label(const std::string& rendered);

using PhonemeMap = std::map<std::string, std::string>;

/// Per-language phoneme -> viseme symbol tables.
struct MappingTables {
  PhonemeMap english;
  PhonemeMap mandarin;

  const PhonemeMap& of(LanguageId lang) const {
    return lang == LanguageId::kEnglish ? english : mandarin;
  }
  PhonemeMap& of(LanguageId lang) {
    return lang == LanguageId::kEnglish ? english : mandarin;
  }

  /// True if some phoneme of `lang` maps to viseme `base`.
  bool uses_viseme(LanguageId lang, const std::string& base) const;
};

/// Parses the `<language-tag> <ipa-phoneme> <viseme-symbol>` table format.
/// `source` names the input in error messages.
MappingTables parse_mapping_tables(const std::string& text,
                                   const std::string& source = "<tables>");

MappingTables load_mapping_tables(const std::string& path);

/// Assigns the Common/EnglishOnly/MandarinOnly class from table membership.
VisemeLabel classify_viseme(const std::string& base, const MappingTables& tables);

}  // namespace visemelab
