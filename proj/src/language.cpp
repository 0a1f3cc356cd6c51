#include "visemelab/language.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace visemelab {

std::string_view language_tag(LanguageId lang) {
  return lang == LanguageId::kEnglish ? "en" : "cmn";
}

std::string_view language_name(LanguageId lang) {
  return lang == LanguageId::kEnglish ? "English" : "Mandarin";
}

std::optional<LanguageId> parse_language(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "en" || s == "eng" || s == "english") return LanguageId::kEnglish;
  if (s == "cmn" || s == "zh" || s == "mandarin") return LanguageId::kMandarin;
  return std::nullopt;
}

}  // namespace visemelab
