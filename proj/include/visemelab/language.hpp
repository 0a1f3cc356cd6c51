#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace visemelab {

enum class LanguageId { kEnglish, kMandarin };

inline constexpr std::array<LanguageId, 2> kLanguages = {LanguageId::kEnglish,
                                                         LanguageId::kMandarin};

/// Short tag used in files and on the command line: "en" / "cmn".
std::string_view language_tag(LanguageId lang);

std::string_view language_name(LanguageId lang);

/// Accepts "en", "eng", "english", "cmn", "zh", "mandarin" (case-insensitive).
std::optional<LanguageId> parse_language(std::string_view text);

inline LanguageId other_language(LanguageId lang) {
  return lang == LanguageId::kEnglish ? LanguageId::kMandarin : LanguageId::kEnglish;
}

}  // namespace visemelab
