#pragma once

#include <map>
#include <string>
#include <vector>

#include "visemelab/language.hpp"
#include "visemelab/viseme.hpp"

namespace visemelab {

using PhonemeSeq = std::vector<std::string>;

struct Lexicon {
  LanguageId language = LanguageId::kEnglish;
  std::map<std::string, PhonemeSeq> entries;

  bool contains(const std::string& word) const;
};

/// Lookup key for a word: whitespace trimmed, ASCII uppercased. For Mandarin,
/// tone digits and tone-marked vowels are reduced to their toneless letters and
/// u-umlaut (ü, u:, v) is written V.
std::string normalize_word(const std::string& word, LanguageId lang);

Lexicon parse_lexicon(const std::string& text, LanguageId lang,
                      const std::string& source = "<lexicon>");
Lexicon load_lexicon(const std::string& path, LanguageId lang);

/// Returns the lexicon's phonemes for `word` verbatim.
PhonemeSeq transliterate(const std::string& word, LanguageId lang, const Lexicon& lexicon);

/// One label per phoneme, in order; repeated visemes are kept.
std::vector<VisemeLabel> phonemes_to_visemes(const PhonemeSeq& seq, LanguageId lang,
                                             const MappingTables& tables);

}  // namespace visemelab
