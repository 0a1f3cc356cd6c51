#include "visemelab/lexicon.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "visemelab/error.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

namespace {

// Pinyin vowels carrying tone diacritics, as UTF-8, with their plain letter.
constexpr std::array<std::pair<std::string_view, char>, 28> kToneVowels = {{
    {"ā", 'a'}, {"á", 'a'}, {"ǎ", 'a'}, {"à", 'a'},
    {"ē", 'e'}, {"é", 'e'}, {"ě", 'e'}, {"è", 'e'},
    {"ī", 'i'}, {"í", 'i'}, {"ǐ", 'i'}, {"ì", 'i'},
    {"ō", 'o'}, {"ó", 'o'}, {"ǒ", 'o'}, {"ò", 'o'},
    {"ū", 'u'}, {"ú", 'u'}, {"ǔ", 'u'}, {"ù", 'u'},
    {"ǖ", 'v'}, {"ǘ", 'v'}, {"ǚ", 'v'}, {"ǜ", 'v'},
    {"ü", 'v'}, {"Ü", 'v'}, {"ê", 'e'}, {"ń", 'n'},
}};

char upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

}  // namespace

bool Lexicon::contains(const std::string& word) const {
  return entries.count(normalize_word(word, language)) > 0;
}

std::string normalize_word(const std::string& word, LanguageId lang) {
  std::string s = trim(word);
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (lang == LanguageId::kMandarin) {
      char c = s[i];
      if (c >= '1' && c <= '5') {
        ++i;
        continue;
      }
      if ((c == 'u' || c == 'U') && i + 1 < s.size() && s[i + 1] == ':') {
        out.push_back('V');
        i += 2;
        continue;
      }
      bool matched = false;
      for (const auto& [mark, plain] : kToneVowels) {
        if (s.compare(i, mark.size(), mark) == 0) {
          out.push_back(upper(plain));
          i += mark.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out.push_back(upper(s[i]));
    ++i;
  }
  return out;
}

Lexicon parse_lexicon(const std::string& text, LanguageId lang, const std::string& source) {
  Lexicon lex;
  lex.language = lang;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(source, lineno, "entry has no phonemes");
    std::string key = normalize_word(fields[0], lang);
    PhonemeSeq seq(fields.begin() + 1, fields.end());
    auto [it, inserted] = lex.entries.emplace(key, seq);
    if (!inserted && it->second != seq) {
      throw ConflictError(source + ":" + std::to_string(lineno) + ": '" + key +
                          "' has two different pronunciations");
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path, LanguageId lang) {
  return parse_lexicon(read_text_file(path), lang, path);
}

PhonemeSeq transliterate(const std::string& word, LanguageId lang, const Lexicon& lexicon) {
  if (lexicon.language != lang) {
    throw ConfigError("lexicon is for " + std::string(language_name(lexicon.language)) +
                      ", not " + std::string(language_name(lang)));
  }
  auto it = lexicon.entries.find(normalize_word(word, lang));
  if (it == lexicon.entries.end()) throw MissingEntryError(word);
  return it->second;
}

std::vector<VisemeLabel> phonemes_to_visemes(const PhonemeSeq& seq, LanguageId lang,
                                             const MappingTables& tables) {
  const auto& map = tables.of(lang);
  std::vector<VisemeLabel> out;
  out.reserve(seq.size());
  for (const auto& ph : seq) {
    auto it = map.find(ph);
    if (it == map.end()) throw UnmappedPhonemeError(ph, std::string(language_name(lang)));
    out.push_back(classify_viseme(it->second, tables));
  }
  return out;
}

}  // namespace visemelab
