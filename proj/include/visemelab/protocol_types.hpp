#pragma once

#include <string>

#include "visemelab/language.hpp"

namespace visemelab {

enum class ProtocolKind { kMonolingual, kBilingual, kSequential };
enum class SwitchRule { kAtCriticalPeriod, kAtConvergence };

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::kMonolingual;
  // Training language for monolingual runs, L1 for sequential runs.
  LanguageId language = LanguageId::kEnglish;
  SwitchRule switch_rule = SwitchRule::kAtCriticalPeriod;
  double fraction = 1.0;

  static ProtocolSpec Monolingual(LanguageId lang, double fraction = 1.0) {
    return {ProtocolKind::kMonolingual, lang, SwitchRule::kAtCriticalPeriod, fraction};
  }
  static ProtocolSpec Bilingual(double fraction = 1.0) {
    return {ProtocolKind::kBilingual, LanguageId::kEnglish, SwitchRule::kAtCriticalPeriod,
            fraction};
  }
  static ProtocolSpec Sequential(LanguageId l1, SwitchRule rule, double fraction = 1.0) {
    return {ProtocolKind::kSequential, l1, rule, fraction};
  }

  /// Family name without the fraction: mono-en, mono-cmn, bilingual,
  /// seq-en-cp, seq-en-conv, seq-cmn-cp, seq-cmn-conv.
  std::string family() const;
  bool uses_merged_inventory() const { return kind != ProtocolKind::kMonolingual; }
  LanguageId l2() const { return other_language(language); }
};

/// Inverse of ProtocolSpec::family(); throws ConfigError on unknown names.
ProtocolSpec parse_family(const std::string& family, double fraction = 1.0);

struct DetectionParams {
  double surge_threshold = 0.05;  // accuracy points per epoch
  double surge_fraction = 0.5;    // share of visemes that must surge
  int window = 1;                 // odd centred moving-average width over gains

  void validate() const;
};

}  // namespace visemelab
