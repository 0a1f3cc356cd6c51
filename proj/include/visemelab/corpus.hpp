#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "visemelab/inventory.hpp"
#include "visemelab/lexicon.hpp"

namespace visemelab {

struct WordEntry {
  std::string word;
  std::uint32_t sample_count = 1;
};

struct WordList {
  LanguageId language = LanguageId::kEnglish;
  std::vector<WordEntry> entries;
};

WordList parse_word_list(const std::string& text, LanguageId lang,
                         const std::string& source = "<word list>");
WordList load_word_list(const std::string& path, LanguageId lang);

struct CorpusEntry {
  std::string word;
  PhonemeSeq phonemes;
  std::vector<VisemeLabel> visemes;
  std::uint32_t sample_count = 0;
  // Which of the word's samples are in this corpus. Sample ids index the
  // generator's per-sample streams, so a sample keeps its features across splits.
  std::vector<std::uint32_t> sample_ids;
};

struct LabeledCorpus {
  LanguageId language = LanguageId::kEnglish;
  std::vector<CorpusEntry> entries;

  std::uint64_t total_samples() const;
};

LabeledCorpus build_labeled_corpus(const WordList& words, const Lexicon& lexicon,
                                   const MappingTables& tables);

inline constexpr std::array<double, 4> kSplitFractions = {0.25, 0.5, 0.75, 1.0};

struct SplitSpec {
  double fraction = 1.0;
  std::uint64_t seed = 0;
  bool allow_any_fraction = false;
};

/// Keeps max(1, floor(count * fraction)) samples per word. The kept samples are
/// a prefix of a per-word permutation fixed by the seed, so smaller fractions
/// select subsets of larger ones.
LabeledCorpus split_corpus(const LabeledCorpus& corpus, const SplitSpec& spec);

/// Trims the corpus with more samples until both totals match. Samples are
/// removed from the end of the word with the most samples first (lowest index
/// on ties), which keeps every word while counts allow it.
void equalize_sample_counts(LabeledCorpus& a, LabeledCorpus& b);

struct VisemeDistribution {
  std::map<std::string, std::uint64_t> counts;  // keyed by rendered label
  std::array<std::uint64_t, 3> class_totals{};  // indexed by VisemeClass
  std::uint64_t grand_total = 0;

  std::uint64_t class_total(VisemeClass cls) const {
    return class_totals[static_cast<int>(cls)];
  }
};

VisemeDistribution viseme_distribution(const LabeledCorpus& corpus);

}  // namespace visemelab
