// Acceptance run: one PASS/FAIL line per criterion. Criteria 3 to 6 share a
// single seeded run matrix (10 seeds, every family and fraction).

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "visemelab/analysis.hpp"
#include "visemelab/config.hpp"
#include "visemelab/error.hpp"
#include "visemelab/experiment.hpp"
#include "visemelab/kernels.hpp"
#include "visemelab/model.hpp"

using namespace visemelab;

namespace {

// Tolerances and thresholds, fixed here rather than read from anywhere else.
constexpr int kSeeds = 10;
constexpr int kCpExistenceMin = 9;
constexpr int kMonotoneMin = 8;
constexpr int kOrderingMin = 8;
constexpr int kUniqueDropMin = 7;
constexpr double kDataGapMin = 0.03;
constexpr int kGradientInstances = 50;
constexpr double kGradientRelTol = 1e-4;
constexpr double kSoftmaxTol = 1e-9;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

void guarded(int id, const std::string& what, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, pass, what, detail);
}

std::string ratio(std::size_t a, std::size_t b) {
  return std::to_string(a) + "/" + std::to_string(b);
}

bool taxonomy(const Bundle& b, std::string& detail) {
  bool ok = true;
  auto merged = build_inventory(InventoryScope::Merged(), b.tables);
  std::set<std::string> bases;
  for (const auto& l : merged.labels()) {
    ok &= bases.insert(l.base).second;
    const auto r = l.rendered();
    const bool e = r.ends_with("_E"), m = r.ends_with("_M");
    ok &= e == (l.cls == VisemeClass::kEnglishOnly);
    ok &= m == (l.cls == VisemeClass::kMandarinOnly);
    ok &= l.cls == classify_viseme(l.base, b.tables).cls;
  }
  std::set<std::string> union_labels;
  for (auto lang : kLanguages) {
    auto mono = build_inventory(InventoryScope::Of(lang), b.tables);
    const auto foreign =
        lang == LanguageId::kEnglish ? VisemeClass::kMandarinOnly : VisemeClass::kEnglishOnly;
    for (const auto& l : mono.labels()) {
      ok &= l.cls != foreign;
      union_labels.insert(l.rendered());
    }
  }
  ok &= union_labels.size() == merged.size();

  // Rebuild both corpora from the word lists so every word goes through the
  // lexicon and the tables again.
  auto paths = DataPaths::bundled();
  std::size_t words = 0;
  for (auto lang : kLanguages) {
    auto list = load_word_list(
        lang == LanguageId::kEnglish ? paths.english_words : paths.mandarin_words, lang);
    auto lex = load_lexicon(
        lang == LanguageId::kEnglish ? paths.english_lexicon : paths.mandarin_lexicon, lang);
    auto corpus = build_labeled_corpus(list, lex, b.tables);
    for (const auto& e : corpus.entries) ok &= e.visemes.size() == e.phonemes.size();
    words += corpus.entries.size();
  }
  ok &= words == 1500;
  detail = "merged inventory " + std::to_string(merged.size()) + " labels, " +
           std::to_string(words) + " words transliterated";
  return ok;
}

bool common_dominates(const Bundle& b, std::string& detail) {
  bool ok = true;
  for (auto lang : kLanguages) {
    auto d = viseme_distribution(b.corpora.of(lang));
    const auto c = d.class_total(VisemeClass::kCommon);
    const auto e = d.class_total(VisemeClass::kEnglishOnly);
    const auto m = d.class_total(VisemeClass::kMandarinOnly);
    ok &= c > e && c > m;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(language_tag(lang)) +
              ": common " + std::to_string(c) + ", E " + std::to_string(e) + ", M " +
              std::to_string(m);
  }
  return ok;
}

bool cp_existence(const std::vector<RunResult>& results, const DetectionParams& det,
                  std::string& detail) {
  bool ok = true;
  for (const char* family : {"mono-en", "mono-cmn"}) {
    std::size_t hits = 0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      const auto* t = find_trace(results, family, 1.0, seed);
      if (!t) continue;
      auto rep = detect_critical_period(*t, det);
      hits += rep.cp_epoch && rep.surge_fraction >= 0.5;
    }
    ok &= hits >= kCpExistenceMin;
    detail += std::string(detail.empty() ? "" : ", ") + family + " " + ratio(hits, kSeeds);
  }
  detail += ", need " + std::to_string(kCpExistenceMin) + " each";
  return ok;
}

bool cp_monotone(const std::vector<RunResult>& results, const DetectionParams& det,
                 std::string& detail) {
  bool ok = true;
  for (const char* family : {"mono-en", "mono-cmn"}) {
    std::size_t hits = 0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      std::vector<std::pair<double, CriticalPeriodReport>> reps;
      for (double f : kSplitFractions) {
        if (const auto* t = find_trace(results, family, f, seed)) {
          reps.emplace_back(f, detect_critical_period(*t, det));
        }
      }
      if (reps.size() != kSplitFractions.size()) continue;
      try {
        auto s = cp_vs_data_fraction(reps);
        // A fraction without any CP counts against the seed.
        hits += s.monotone && !s.partial;
      } catch (const InsufficientDataError&) {
      }
    }
    ok &= hits >= kMonotoneMin;
    detail += std::string(detail.empty() ? "" : ", ") + family + " " + ratio(hits, kSeeds);
  }
  detail += ", need " + std::to_string(kMonotoneMin) + " each";
  return ok;
}

bool switch_ordering(const ClaimsSummary& claims, std::string& detail) {
  std::size_t order = 0, unique = 0;
  double c = 0, e = 0, m = 0;
  std::size_t n = 0;
  for (const auto& cmp : claims.comparisons) {
    if (!cmp.report) continue;
    const auto& r = *cmp.report;
    const double dc = r.of(VisemeClass::kCommon).drop;
    const double de = r.of(VisemeClass::kEnglishOnly).drop;
    const double dm = r.of(VisemeClass::kMandarinOnly).drop;
    order += dc > 0 && de > 0 && dm > 0;
    unique += de > dc && dm > dc;
    c += dc;
    e += de;
    m += dm;
    ++n;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "ordering %zu/%d (need %d), unique > common %zu/%d (need %d); mean drops "
                "common %.3f, E %.3f, M %.3f",
                order, kSeeds, kOrderingMin, unique, kSeeds, kUniqueDropMin, n ? c / n : 0.0,
                n ? e / n : 0.0, n ? m / n : 0.0);
  detail = buf;
  return order >= kOrderingMin && unique >= kUniqueDropMin;
}

bool data_quantity(const ClaimsSummary& claims, std::string& detail) {
  bool ok = true;
  for (const char* family : {"mono-en", "mono-cmn", "bilingual"}) {
    auto it = claims.final_accuracy.find(family);
    if (it == claims.final_accuracy.end() || !it->second.count(1.0) || !it->second.count(0.25)) {
      detail += std::string(family) + " missing; ";
      ok = false;
      continue;
    }
    const double gap = it->second.at(1.0) - it->second.at(0.25);
    ok &= gap >= kDataGapMin;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%s %.4f -> %.4f (+%.4f)", detail.empty() ? "" : ", ",
                  family, it->second.at(0.25), it->second.at(1.0), gap);
    detail += buf;
  }
  detail += ", need +" + std::to_string(kDataGapMin).substr(0, 4);
  return ok;
}

bool numerical_integrity(const Bundle& b, std::string& detail) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_grad = 0.0;
  for (int trial = 0; trial < kGradientInstances; ++trial) {
    const std::size_t k = 2 + rng() % 4;
    const int d = 2 + static_cast<int>(rng() % 4);
    const std::size_t frames = 1 + rng() % 10;
    ModelParams p;
    p.classes = k;
    p.dim = d;
    p.weights.resize(k * d);
    p.bias.resize(k);
    for (auto& w : p.weights) w = 0.5 * normal(rng);
    for (auto& w : p.bias) w = 0.5 * normal(rng);
    FeatureDataset ds;
    ds.dim = d;
    for (std::size_t f = 0; f < frames; ++f) {
      ds.item_offsets.push_back(f + 1);
      ds.labels.push_back(static_cast<std::uint32_t>(rng() % k));
      for (int j = 0; j < d; ++j) ds.features.push_back(static_cast<float>(normal(rng)));
    }
    std::vector<double> cw(k, 1.0);
    std::vector<std::size_t> idx(frames);
    std::iota(idx.begin(), idx.end(), 0);
    Gradient g;
    batch_gradient_serial(p, ds, idx, cw, g);
    auto loss = [&](const ModelParams& q) {
      Gradient h;
      batch_gradient_serial(q, ds, idx, cw, h);
      return h.loss;
    };
    double num2 = 0, ana2 = 0, diff2 = 0;
    const double h = 1e-5;
    for (std::size_t i = 0; i < p.weights.size() + p.bias.size(); ++i) {
      auto plus = p, minus = p;
      const bool is_w = i < p.weights.size();
      const std::size_t j = is_w ? i : i - p.weights.size();
      (is_w ? plus.weights[j] : plus.bias[j]) += h;
      (is_w ? minus.weights[j] : minus.bias[j]) -= h;
      const double numeric = (loss(plus) - loss(minus)) / (2 * h);
      const double analytic = is_w ? g.weights[j] : g.bias[j];
      num2 += numeric * numeric;
      ana2 += analytic * analytic;
      diff2 += (numeric - analytic) * (numeric - analytic);
    }
    worst_grad = std::max(worst_grad, std::sqrt(diff2) /
                                          std::max(std::sqrt(num2) + std::sqrt(ana2), 1e-12));
  }

  double worst_softmax = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng() % 40;
    std::vector<double> z(k), q(k);
    for (auto& x : z) x = normal(rng) * (trial % 4 == 0 ? 500.0 : 5.0);
    softmax(z.data(), k, q.data());
    worst_softmax = std::max(worst_softmax, std::abs(std::accumulate(q.begin(), q.end(), 0.0) - 1.0));
  }

  ExperimentSettings s;
  s.training.max_epochs = 8;
  std::vector<RunSpec> twice = {{ProtocolSpec::Bilingual(0.5), 4}, {ProtocolSpec::Bilingual(0.5), 4}};
  auto r = run_matrix(twice, b, s, 2);
  const bool identical = r[0].trace && r[1].trace &&
                         serialize_trace(*r[0].trace) == serialize_trace(*r[1].trace);

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "worst gradient rel. error %.2e over %d instances (tol %.0e), worst softmax sum "
                "error %.1e (tol %.0e), repeated seed %s",
                worst_grad, kGradientInstances, kGradientRelTol, worst_softmax, kSoftmaxTol,
                identical ? "bit-identical" : "DIFFERS");
  detail = buf;
  return worst_grad < kGradientRelTol && worst_softmax <= kSoftmaxTol && identical;
}

TrainingTrace rows_trace(const std::vector<std::vector<double>>& rows,
                         std::vector<std::string> labels = {}) {
  TrainingTrace t;
  if (labels.empty()) {
    for (std::size_t v = 0; v < rows[0].size(); ++v) labels.push_back("v" + std::to_string(v));
  }
  t.labels = labels;
  t.inventory_hash = inventory_hash(labels);
  for (std::size_t e = 0; e < rows.size(); ++e) {
    EpochRecord rec;
    rec.epoch = static_cast<int>(e) + 1;
    for (double a : rows[e]) rec.accuracy.push_back(a);
    t.epochs.push_back(rec);
  }
  return t;
}

bool analyzer_examples(std::string& detail) {
  const DetectionParams det;
  std::vector<std::string> failed;
  int checked = 0;
  auto expect = [&](bool cond, const char* name) {
    ++checked;
    if (!cond) failed.push_back(name);
  };

  auto flat = rows_trace(std::vector<std::vector<double>>(6, {0.3, 0.6, 0.9}));
  bool zeros = true;
  for (const auto& row : gains(flat).rows) {
    for (const auto& g : row) zeros &= g && *g == 0.0;
  }
  expect(zeros, "constant trace gives zero gains");
  auto g3 = gains(rows_trace({{0.1}, {0.3}, {0.35}}));
  expect(std::abs(*g3.rows[0][0] - 0.2) < 1e-12 && std::abs(*g3.rows[1][0] - 0.05) < 1e-12,
         "gains of [0.1, 0.3, 0.35]");

  std::vector<std::vector<double>> jump, twin;
  for (int e = 1; e <= 10; ++e) jump.emplace_back(4, e >= 6 ? 0.8 : 0.1);
  for (int e = 1; e <= 12; ++e) twin.emplace_back(3, e >= 9 ? 0.7 : e >= 4 ? 0.4 : 0.1);
  auto rj = detect_critical_period(rows_trace(jump), det);
  expect(rj.cp_epoch == 6 && rj.surge_fraction == 1.0, "jump at epoch 6");
  expect(!detect_critical_period(flat, det).cp_epoch, "flat trace has no CP");
  expect(detect_critical_period(rows_trace(twin), det).cp_epoch == 4, "earliest surge wins");

  auto rep = [](int cp) {
    CriticalPeriodReport r;
    r.cp_epoch = cp;
    return r;
  };
  expect(cp_vs_data_fraction({{0.25, rep(15)}, {0.5, rep(10)}, {0.75, rep(7)}, {1.0, rep(5)}})
             .monotone,
         "15/10/7/5 is monotone");
  expect(!cp_vs_data_fraction({{0.25, rep(5)}, {1.0, rep(9)}}).monotone, "5 then 9 is not");

  auto seq = rows_trace({{0.1, 0.2, 0.3}, {0.5, 0.6, 0.7}}, {"T_E", "p", "y_M"});
  seq.protocol = ProtocolSpec::Sequential(LanguageId::kEnglish, SwitchRule::kAtCriticalPeriod);
  seq.epochs[1].phase = 2;
  seq.switch_epoch = 1;
  auto same = cross_inference_compare(seq, seq);
  bool zero_drops = true;
  for (const auto& c : same.classes) zero_drops &= c.drop == 0.0;
  expect(zero_drops, "identical traces give zero drops");

  bool equivariant = true;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> rows(10, std::vector<double>(5));
    for (int v = 0; v < 5; ++v) {
      double a = 0.1 * u(rng);
      for (int e = 0; e < 10; ++e) rows[e][v] = a = std::min(1.0, a + 0.2 * u(rng) * u(rng));
    }
    auto cp = detect_critical_period(rows_trace(rows), det).cp_epoch;
    for (int j = 1; j <= 4; ++j) {
      auto shifted = rows;
      shifted.insert(shifted.begin(), j, rows.front());
      auto cp2 = detect_critical_period(rows_trace(shifted), det).cp_epoch;
      equivariant &= cp.has_value() == cp2.has_value() && (!cp || *cp2 == *cp + j);
    }
  }
  expect(equivariant, "CP shifts with prepended flat epochs");

  detail = std::to_string(checked - failed.size()) + "/" + std::to_string(checked) + " examples";
  for (const auto& f : failed) detail += ", failed: " + f;
  return failed.empty();
}

}  // namespace

int main() {
  const Bundle bundle = load_bundle(DataPaths::bundled());

  guarded(1, "viseme taxonomy and full transliteration",
          [&](std::string& d) { return taxonomy(bundle, d); });
  guarded(2, "common visemes outnumber each unique class",
          [&](std::string& d) { return common_dominates(bundle, d); });

  RunConfig cfg;
  cfg.seeds.clear();
  for (int s = 1; s <= kSeeds; ++s) cfg.seeds.push_back(s);
  const int jobs = std::max(1, omp_get_max_threads());
  std::vector<RunResult> results;
  ClaimsSummary claims;
  std::string matrix_error;
  try {
    results = run_matrix(cfg.run_specs(), bundle, cfg.settings, jobs);
    claims = evaluate_claims(results, cfg.settings.detection);
  } catch (const std::exception& e) {
    matrix_error = e.what();
  }
  std::size_t failed_runs = 0;
  for (const auto& r : results) failed_runs += !r.error.empty();
  std::printf("run matrix: %zu runs, %zu failed\n", results.size(), failed_runs);

  const auto& det = cfg.settings.detection;
  guarded(3, "critical period exists at the full split", [&](std::string& d) {
    if (!matrix_error.empty()) throw std::runtime_error(matrix_error);
    return cp_existence(results, det, d);
  });
  guarded(4, "critical period does not move later with more data", [&](std::string& d) {
    if (!matrix_error.empty()) throw std::runtime_error(matrix_error);
    return cp_monotone(results, det, d);
  });
  guarded(5, "switching at the CP beats switching at convergence", [&](std::string& d) {
    if (!matrix_error.empty()) throw std::runtime_error(matrix_error);
    return switch_ordering(claims, d);
  });
  guarded(6, "more data gives higher final accuracy", [&](std::string& d) {
    if (!matrix_error.empty()) throw std::runtime_error(matrix_error);
    return data_quantity(claims, d);
  });
  guarded(7, "numerical integrity", [&](std::string& d) { return numerical_integrity(bundle, d); });
  guarded(8, "analyzer unit examples", [&](std::string& d) { return analyzer_examples(d); });

  return failures == 0 ? 0 : 1;
}
