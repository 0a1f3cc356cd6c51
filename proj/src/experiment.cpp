#include "visemelab/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "visemelab/error.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

std::string DataPaths::default_data_dir() {
#ifdef VISEMELAB_DATA_DIR
  return VISEMELAB_DATA_DIR;
#else
  return "data";
#endif
}

DataPaths DataPaths::bundled(const std::string& dir) {
  return {dir + "/viseme_tables.txt", dir + "/english_lexicon.txt", dir + "/mandarin_lexicon.txt",
          dir + "/lrw_words.txt", dir + "/lrw1000_words.txt"};
}

Bundle load_bundle(const DataPaths& paths) {
  Bundle b;
  b.tables = load_mapping_tables(paths.tables);
  auto en_lex = load_lexicon(paths.english_lexicon, LanguageId::kEnglish);
  auto cmn_lex = load_lexicon(paths.mandarin_lexicon, LanguageId::kMandarin);
  b.corpora.english = build_labeled_corpus(load_word_list(paths.english_words, LanguageId::kEnglish),
                                           en_lex, b.tables);
  b.corpora.mandarin = build_labeled_corpus(
      load_word_list(paths.mandarin_words, LanguageId::kMandarin), cmn_lex, b.tables);
  return b;
}

std::string RunSpec::stem() const {
  return protocol.family() + "_f" + format_double(protocol.fraction) + "_s" + std::to_string(seed);
}

std::vector<RunResult> run_matrix(const std::vector<RunSpec>& specs, const Bundle& bundle,
                                  const ExperimentSettings& settings, int jobs,
                                  const std::string& out_dir, bool force) {
  std::vector<RunResult> results(specs.size());
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
  const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    RunResult& r = results[i];
    r.spec = specs[i];
    std::string path = out_dir.empty() ? "" : out_dir + "/" + r.spec.stem() + ".trace";
    try {
      if (!path.empty() && !force && std::filesystem::exists(path)) {
        r.trace = load_trace(path);
        r.skipped = true;
        continue;
      }
      RunInputs in{&bundle.corpora, &bundle.tables, settings.generator, settings.training,
                   settings.detection};
      in.training.seed = r.spec.seed;
      r.trace = run_protocol(r.spec.protocol, in);
      if (!path.empty()) save_trace(path, *r.trace);
    } catch (const NoCriticalPeriodError& e) {
      r.error = e.what();
      r.exit_code = static_cast<int>(e.code());
      if (!path.empty()) {
        try {
          save_trace(out_dir + "/" + r.spec.stem() + ".partial.trace", e.partial_trace());
        } catch (const Error&) {
        }
      }
    } catch (const Error& e) {
      r.error = e.what();
      r.exit_code = static_cast<int>(e.code());
    } catch (const std::exception& e) {
      r.error = e.what();
      r.exit_code = static_cast<int>(ExitCode::kData);
    }
  }
  return results;
}

std::vector<RunSpec> table_matrix(const std::vector<std::uint64_t>& seeds,
                                  const std::vector<double>& fractions) {
  std::vector<RunSpec> specs;
  for (auto seed : seeds) {
    for (double f : fractions) {
      specs.push_back({ProtocolSpec::Monolingual(LanguageId::kEnglish, f), seed});
      specs.push_back({ProtocolSpec::Monolingual(LanguageId::kMandarin, f), seed});
      specs.push_back({ProtocolSpec::Bilingual(f), seed});
    }
  }
  return specs;
}

std::vector<RunSpec> sequential_matrix(const std::vector<std::uint64_t>& seeds, double fraction) {
  std::vector<RunSpec> specs;
  for (auto seed : seeds) {
    for (auto l1 : kLanguages) {
      for (auto rule : {SwitchRule::kAtCriticalPeriod, SwitchRule::kAtConvergence}) {
        specs.push_back({ProtocolSpec::Sequential(l1, rule, fraction), seed});
      }
    }
  }
  return specs;
}

const TrainingTrace* find_trace(const std::vector<RunResult>& results, const std::string& family,
                                double fraction, std::uint64_t seed) {
  for (const auto& r : results) {
    if (r.trace && r.spec.seed == seed && r.spec.protocol.fraction == fraction &&
        r.spec.protocol.family() == family) {
      return &*r.trace;
    }
  }
  return nullptr;
}

namespace {

ClaimResult make_claim(std::string name, std::string description, std::size_t satisfied,
                       std::size_t total, double share) {
  ClaimResult c{std::move(name), std::move(description), false, satisfied, total, share};
  c.held = total > 0 && static_cast<double>(satisfied) >=
                            std::ceil(share * static_cast<double>(total) - 1e-9);
  return c;
}

}  // namespace

ClaimsSummary evaluate_claims(const std::vector<RunResult>& results,
                              const DetectionParams& detection) {
  ClaimsSummary s;
  std::set<std::uint64_t> seeds;
  std::set<double> fractions;
  std::set<double> seq_fractions;
  for (const auto& r : results) {
    seeds.insert(r.spec.seed);
    if (r.spec.protocol.kind == ProtocolKind::kSequential) {
      seq_fractions.insert(r.spec.protocol.fraction);
    } else {
      fractions.insert(r.spec.protocol.fraction);
    }
    if (r.trace && r.spec.protocol.kind != ProtocolKind::kSequential && !r.trace->epochs.empty()) {
      // Accumulated as a running sum and divided below.
      s.final_accuracy[r.spec.protocol.family()][r.spec.protocol.fraction] +=
          r.trace->epochs.back().overall;
    }
  }
  for (auto& [family, by_fraction] : s.final_accuracy) {
    for (auto& [f, sum] : by_fraction) {
      std::size_t n = 0;
      for (const auto& r : results) {
        n += r.trace && r.spec.protocol.family() == family && r.spec.protocol.fraction == f;
      }
      sum /= static_cast<double>(n);
    }
  }

  const std::vector<std::string> mono = {"mono-en", "mono-cmn"};
  const double full = fractions.empty() ? 1.0 : *fractions.rbegin();

  std::size_t exist_ok = 0, exist_total = 0;
  for (const auto& family : mono) {
    for (auto seed : seeds) {
      if (fractions.empty()) continue;
      const TrainingTrace* t = find_trace(results, family, full, seed);
      ++exist_total;
      if (!t || t->num_epochs() < 3) continue;
      auto rep = detect_critical_period(*t, detection);
      exist_ok += rep.cp_epoch && rep.surge_fraction >= detection.surge_fraction;
    }
  }
  s.claims.push_back(make_claim("cp_existence",
                                "a critical period is detected in monolingual runs on the full split",
                                exist_ok, exist_total, 0.9));

  std::size_t mono_ok = 0, mono_total = 0;
  for (const auto& family : mono) {
    for (auto seed : seeds) {
      if (fractions.size() < 2) continue;
      ++mono_total;
      std::vector<std::pair<double, CriticalPeriodReport>> reps;
      bool complete = true;
      for (double f : fractions) {
        const TrainingTrace* t = find_trace(results, family, f, seed);
        if (!t || t->num_epochs() < 3) {
          complete = false;
          break;
        }
        reps.emplace_back(f, detect_critical_period(*t, detection));
      }
      if (!complete) continue;
      try {
        auto summary = cp_vs_data_fraction(reps);
        mono_ok += summary.monotone && !summary.partial;
      } catch (const InsufficientDataError&) {
      }
    }
  }
  s.claims.push_back(make_claim("cp_monotonicity",
                                "the critical period does not move later as the split grows",
                                mono_ok, mono_total, 0.8));

  std::size_t order_ok = 0, drop_ok = 0, seq_total = 0;
  const double seq_f = seq_fractions.empty() ? 1.0 : *seq_fractions.rbegin();
  for (auto seed : seeds) {
    if (seq_fractions.empty()) continue;
    ++seq_total;
    SeedComparison cmp;
    cmp.seed = seed;
    std::vector<SequentialPair> pairs;
    for (auto l1 : kLanguages) {
      std::string tag(language_tag(l1));
      const TrainingTrace* cp = find_trace(results, "seq-" + tag + "-cp", seq_f, seed);
      const TrainingTrace* conv = find_trace(results, "seq-" + tag + "-conv", seq_f, seed);
      if (cp && conv) pairs.push_back({cp, conv});
    }
    if (pairs.size() != 2) {
      cmp.error = "missing sequential runs";
      s.comparisons.push_back(std::move(cmp));
      continue;
    }
    MonolingualRefs refs{find_trace(results, "mono-en", full, seed),
                         find_trace(results, "mono-cmn", full, seed)};
    try {
      auto rep = cross_inference_compare(pairs, refs);
      const auto& c = rep.of(VisemeClass::kCommon);
      const auto& e = rep.of(VisemeClass::kEnglishOnly);
      const auto& m = rep.of(VisemeClass::kMandarinOnly);
      order_ok += c.drop > 0.0 && e.drop > 0.0 && m.drop > 0.0;
      drop_ok += e.drop > c.drop && m.drop > c.drop;
      cmp.report = std::move(rep);
    } catch (const Error& err) {
      cmp.error = err.what();
    }
    s.comparisons.push_back(std::move(cmp));
  }
  s.claims.push_back(make_claim("switch_ordering",
                                "switching to L2 at the critical period beats switching at "
                                "convergence for every viseme class",
                                order_ok, seq_total, 0.8));
  s.claims.push_back(make_claim("unique_drop_exceeds_common",
                                "the unique-class accuracy drop exceeds the common-class drop",
                                drop_ok, seq_total, 0.7));
  return s;
}

nlohmann::json ClaimsSummary::to_json() const {
  nlohmann::json claims_j = nlohmann::json::array();
  for (const auto& c : claims) {
    claims_j.push_back({{"claim", c.name},
                        {"description", c.description},
                        {"held", c.held},
                        {"satisfied", c.satisfied},
                        {"total", c.total},
                        {"required_share", c.required_share}});
  }
  nlohmann::json cmp_j = nlohmann::json::array();
  for (const auto& c : comparisons) {
    nlohmann::json row = {{"seed", c.seed}};
    if (c.report) {
      for (const auto& cls : c.report->classes) {
        row[std::string(viseme_class_name(cls.cls))] = {{"switch_at_cp", cls.at_cp},
                                                        {"switch_at_convergence",
                                                         cls.at_convergence},
                                                        {"drop", cls.drop}};
      }
    } else {
      row["error"] = c.error;
    }
    cmp_j.push_back(row);
  }
  nlohmann::json acc_j = nlohmann::json::object();
  for (const auto& [family, by_fraction] : final_accuracy) {
    nlohmann::json f_j = nlohmann::json::object();
    for (const auto& [f, a] : by_fraction) f_j[format_double(f)] = a;
    acc_j[family] = f_j;
  }
  return {{"claims", claims_j}, {"cross_inference_by_seed", cmp_j}, {"final_accuracy", acc_j}};
}

}  // namespace visemelab
