#include "visemelab/protocol_types.hpp"

#include "visemelab/error.hpp"

namespace visemelab {

std::string ProtocolSpec::family() const {
  switch (kind) {
    case ProtocolKind::kMonolingual:
      return "mono-" + std::string(language_tag(language));
    case ProtocolKind::kBilingual:
      return "bilingual";
    case ProtocolKind::kSequential:
      return "seq-" + std::string(language_tag(language)) +
             (switch_rule == SwitchRule::kAtCriticalPeriod ? "-cp" : "-conv");
  }
  return "?";
}

ProtocolSpec parse_family(const std::string& family, double fraction) {
  if (family == "bilingual") return ProtocolSpec::Bilingual(fraction);
  for (auto lang : kLanguages) {
    std::string tag(language_tag(lang));
    if (family == "mono-" + tag) return ProtocolSpec::Monolingual(lang, fraction);
    if (family == "seq-" + tag + "-cp") {
      return ProtocolSpec::Sequential(lang, SwitchRule::kAtCriticalPeriod, fraction);
    }
    if (family == "seq-" + tag + "-conv") {
      return ProtocolSpec::Sequential(lang, SwitchRule::kAtConvergence, fraction);
    }
  }
  throw ConfigError("unknown protocol family '" + family + "'");
}

void DetectionParams::validate() const {
  if (!(surge_threshold > 0.0)) throw ConfigError("surge threshold must be > 0");
  if (!(surge_fraction > 0.0 && surge_fraction <= 1.0)) {
    throw ConfigError("surge fraction must be in (0, 1]");
  }
  if (window < 1 || window % 2 == 0) throw ConfigError("smoothing window must be odd and >= 1");
}

}  // namespace visemelab
