#include "visemelab/viseme.hpp"

#include <fstream>
#include <sstream>

#include "visemelab/error.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

std::string_view viseme_class_name(VisemeClass cls) {
  switch (cls) {
    case VisemeClass::kCommon:
      return "Common";
    case VisemeClass::kEnglishOnly:
      return "EnglishOnly";
    case VisemeClass::kMandarinOnly:
      return "MandarinOnly";
  }
  return "?";
}

std::string VisemeLabel::rendered() const {
  switch (cls) {
    case VisemeClass::kEnglishOnly:
      return base + "_E";
    case VisemeClass::kMandarinOnly:
      return base + "_M";
    default:
      return base;
  }
}

VisemeLabel parse_rendered_label(const std::string& rendered) {
  if (rendered.size() > 2 && rendered[rendered.size() - 2] == '_') {
    char tag = rendered.back();
    std::string base = rendered.substr(0, rendered.size() - 2);
    if (tag == 'E') return {base, VisemeClass::kEnglishOnly};
    if (tag == 'M') return {base, VisemeClass::kMandarinOnly};
  }
  return {rendered, VisemeClass::kCommon};
}

bool MappingTables::uses_viseme(LanguageId lang, const std::string& base) const {
  for (const auto& [ph, vis] : of(lang)) {
    if (vis == base) return true;
  }
  return false;
}

MappingTables parse_mapping_tables(const std::string& text, const std::string& source) {
  MappingTables tables;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    if (fields.size() != 3) {
      throw ParseError(source, lineno, "expected '<language> <phoneme> <viseme>', got " +
                                           std::to_string(fields.size()) + " fields");
    }
    auto lang = parse_language(fields[0]);
    if (!lang) throw ParseError(source, lineno, "unknown language tag '" + fields[0] + "'");
    auto& map = tables.of(*lang);
    auto [it, inserted] = map.emplace(fields[1], fields[2]);
    if (!inserted && it->second != fields[2]) {
      throw ConflictError(source + ":" + std::to_string(lineno) + ": phoneme '" + fields[1] +
                          "' already maps to '" + it->second + "' for " +
                          std::string(language_tag(*lang)));
    }
  }
  return tables;
}

MappingTables load_mapping_tables(const std::string& path) {
  return parse_mapping_tables(read_text_file(path), path);
}

VisemeLabel classify_viseme(const std::string& base, const MappingTables& tables) {
  bool en = tables.uses_viseme(LanguageId::kEnglish, base);
  bool cmn = tables.uses_viseme(LanguageId::kMandarin, base);
  if (en && cmn) return {base, VisemeClass::kCommon};
  if (en) return {base, VisemeClass::kEnglishOnly};
  if (cmn) return {base, VisemeClass::kMandarinOnly};
  throw UnknownVisemeError(base);
}

}  // namespace visemelab
