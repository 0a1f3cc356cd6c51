#include "visemelab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "visemelab/error.hpp"
#include "visemelab/rng.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

WordList parse_word_list(const std::string& text, LanguageId lang, const std::string& source) {
  WordList list;
  list.language = lang;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    if (fields.size() != 2) throw ParseError(source, lineno, "expected '<word> <sample_count>'");
    long long count = 0;
    const auto& c = fields[1];
    auto res = std::from_chars(c.data(), c.data() + c.size(), count);
    if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
      throw ParseError(source, lineno, "sample count '" + c + "' is not an integer");
    }
    if (count <= 0) throw ParseError(source, lineno, "sample count must be positive");
    if (count > 0xffffffffLL) throw ParseError(source, lineno, "sample count too large");
    if (!seen.insert(normalize_word(fields[0], lang)).second) {
      throw ConflictError(source + ":" + std::to_string(lineno) + ": duplicate word '" +
                          fields[0] + "'");
    }
    list.entries.push_back({fields[0], static_cast<std::uint32_t>(count)});
  }
  return list;
}

WordList load_word_list(const std::string& path, LanguageId lang) {
  return parse_word_list(read_text_file(path), lang, path);
}

std::uint64_t LabeledCorpus::total_samples() const {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.sample_count;
  return n;
}

LabeledCorpus build_labeled_corpus(const WordList& words, const Lexicon& lexicon,
                                   const MappingTables& tables) {
  LabeledCorpus corpus;
  corpus.language = words.language;
  corpus.entries.reserve(words.entries.size());
  for (const auto& w : words.entries) {
    CorpusEntry e;
    e.word = w.word;
    e.phonemes = transliterate(w.word, words.language, lexicon);
    e.visemes = phonemes_to_visemes(e.phonemes, words.language, tables);
    if (e.visemes.empty()) throw EmptyInputError("word '" + w.word + "' has no visemes");
    e.sample_count = w.sample_count;
    e.sample_ids.resize(w.sample_count);
    std::iota(e.sample_ids.begin(), e.sample_ids.end(), 0u);
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

LabeledCorpus split_corpus(const LabeledCorpus& corpus, const SplitSpec& spec) {
  bool standard = std::find(kSplitFractions.begin(), kSplitFractions.end(), spec.fraction) !=
                  kSplitFractions.end();
  if (!standard && !spec.allow_any_fraction) {
    throw ConfigError("split fraction " + format_double(spec.fraction) +
                      " is not one of 0.25, 0.5, 0.75, 1");
  }
  if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
    throw ConfigError("split fraction must be in (0, 1]");
  }
  LabeledCorpus out;
  out.language = corpus.language;
  out.entries.reserve(corpus.entries.size());
  for (std::size_t w = 0; w < corpus.entries.size(); ++w) {
    const auto& src = corpus.entries[w];
    CorpusEntry e = src;
    if (spec.fraction < 1.0) {
      auto keep = static_cast<std::uint32_t>(
          std::floor(static_cast<double>(src.sample_count) * spec.fraction));
      keep = std::max<std::uint32_t>(1, keep);
      std::vector<std::uint32_t> ids = src.sample_ids;
      Rng rng(derive_seed({spec.seed, seed_tag("split"),
                           static_cast<std::uint64_t>(corpus.language), w}));
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(keep);
      std::sort(ids.begin(), ids.end());
      e.sample_ids = std::move(ids);
      e.sample_count = keep;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

void equalize_sample_counts(LabeledCorpus& a, LabeledCorpus& b) {
  LabeledCorpus& big = a.total_samples() >= b.total_samples() ? a : b;
  std::uint64_t target = std::min(a.total_samples(), b.total_samples());
  std::uint64_t total = big.total_samples();
  while (total > target) {
    auto it = std::max_element(
        big.entries.begin(), big.entries.end(),
        [](const CorpusEntry& x, const CorpusEntry& y) { return x.sample_count < y.sample_count; });
    it->sample_ids.pop_back();
    --it->sample_count;
    --total;
  }
  big.entries.erase(std::remove_if(big.entries.begin(), big.entries.end(),
                                   [](const CorpusEntry& e) { return e.sample_count == 0; }),
                    big.entries.end());
}

VisemeDistribution viseme_distribution(const LabeledCorpus& corpus) {
  if (corpus.entries.empty()) throw EmptyInputError("corpus is empty");
  VisemeDistribution dist;
  for (const auto& e : corpus.entries) {
    for (const auto& v : e.visemes) {
      dist.counts[v.rendered()] += e.sample_count;
      dist.class_totals[static_cast<int>(v.cls)] += e.sample_count;
      dist.grand_total += e.sample_count;
    }
  }
  return dist;
}

}  // namespace visemelab
