#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "visemelab/analysis.hpp"
#include "visemelab/config.hpp"
#include "visemelab/corpus.hpp"
#include "visemelab/error.hpp"
#include "visemelab/experiment.hpp"
#include "visemelab/lexicon.hpp"
#include "visemelab/params_json.hpp"
#include "visemelab/svg.hpp"
#include "visemelab/text_util.hpp"
#include "visemelab/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace visemelab;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool json = false;
  bool force = false;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_run_config(g.config_path);
  if (g.seed) cfg.seeds = {*g.seed};
  if (g.jobs) cfg.jobs = *g.jobs;
  return cfg;
}

LanguageId require_language(const std::string& text) {
  auto lang = parse_language(text);
  if (!lang) throw ConfigError("unknown language '" + text + "' (expected en or cmn)");
  return *lang;
}

void write_json(const std::string& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- map ----

int cmd_map(const GlobalOptions& g, const std::string& word, const std::string& lang_text) {
  RunConfig cfg = resolve_config(g);
  LanguageId lang = require_language(lang_text);
  auto tables = load_mapping_tables(cfg.data.tables);
  auto lexicon = load_lexicon(
      lang == LanguageId::kEnglish ? cfg.data.english_lexicon : cfg.data.mandarin_lexicon, lang);
  auto phonemes = transliterate(word, lang, lexicon);
  std::vector<std::string> visemes;
  for (const auto& v : phonemes_to_visemes(phonemes, lang, tables)) visemes.push_back(v.rendered());
  if (g.json) {
    std::cout << json{{"word", word},
                      {"lang", language_tag(lang)},
                      {"phonemes", phonemes},
                      {"visemes", visemes}}
                     .dump()
              << "\n";
  } else {
    std::cout << "IPA:     " << join(phonemes) << "\n";
    std::cout << "Visemes: " << join(visemes) << "\n";
  }
  return 0;
}

// ---- corpus-stats ----

json distribution_json(LanguageId lang, const VisemeDistribution& dist) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(dist.counts.begin(), dist.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  json counts = json::array();
  for (const auto& [label, n] : rows) {
    counts.push_back({{"label", label},
                      {"class", viseme_class_name(parse_rendered_label(label).cls)},
                      {"count", n}});
  }
  json totals = json::object();
  for (auto cls : {VisemeClass::kCommon, VisemeClass::kEnglishOnly, VisemeClass::kMandarinOnly}) {
    totals[std::string(viseme_class_name(cls))] = dist.class_total(cls);
  }
  return {{"lang", language_tag(lang)},
          {"counts", counts},
          {"class_totals", totals},
          {"grand_total", dist.grand_total}};
}

VisemeDistribution corpus_distribution(const RunConfig& cfg, LanguageId lang,
                                       const std::string& list_path) {
  auto tables = load_mapping_tables(cfg.data.tables);
  auto lexicon = load_lexicon(
      lang == LanguageId::kEnglish ? cfg.data.english_lexicon : cfg.data.mandarin_lexicon, lang);
  std::string path = !list_path.empty()                ? list_path
                     : lang == LanguageId::kEnglish ? cfg.data.english_words
                                                       : cfg.data.mandarin_words;
  auto words = load_word_list(path, lang);
  if (words.entries.empty()) throw EmptyInputError("word list '" + path + "' is empty");
  return viseme_distribution(build_labeled_corpus(words, lexicon, tables));
}

int cmd_corpus_stats(const GlobalOptions& g, const std::string& lang_text,
                     const std::string& list_path, const std::string& plot) {
  RunConfig cfg = resolve_config(g);
  LanguageId lang = require_language(lang_text);
  auto dist = corpus_distribution(cfg, lang, list_path);
  if (!plot.empty()) render_distribution(dist, plot);
  json j = distribution_json(lang, dist);
  if (g.json) {
    std::cout << j.dump() << "\n";
    return 0;
  }
  for (const auto& row : j["counts"]) {
    std::printf("%-8s %-13s %llu\n", row["label"].get<std::string>().c_str(),
                row["class"].get<std::string>().c_str(),
                static_cast<unsigned long long>(row["count"].get<std::uint64_t>()));
  }
  for (const auto& [cls, n] : j["class_totals"].items()) {
    std::printf("total %-13s %llu\n", cls.c_str(),
                static_cast<unsigned long long>(n.get<std::uint64_t>()));
  }
  std::printf("total %-13s %llu\n", "all",
              static_cast<unsigned long long>(j["grand_total"].get<std::uint64_t>()));
  return 0;
}

// ---- train ----

json run_status(const RunResult& r) {
  json j = {{"run", r.spec.stem()},
            {"family", r.spec.protocol.family()},
            {"fraction", r.spec.protocol.fraction},
            {"seed", r.spec.seed},
            {"status", r.error.empty() ? "ok" : "failed"}};
  if (!r.error.empty()) {
    j["error"] = r.error;
    j["exit_code"] = r.exit_code;
  } else {
    j["trace"] = r.spec.stem() + ".trace";
    j["final_overall"] = r.trace->epochs.back().overall;
    if (r.trace->switch_epoch) j["switch_epoch"] = *r.trace->switch_epoch;
  }
  return j;
}

struct TrainOutcome {
  std::vector<RunResult> results;
  int exit_code = 0;
};

TrainOutcome train_matrix(const RunConfig& cfg, const std::vector<RunSpec>& specs,
                          const std::string& trace_dir, bool force) {
  Bundle bundle = load_bundle(cfg.data);
  fs::create_directories(trace_dir);
  TrainOutcome out;
  out.results = run_matrix(specs, bundle, cfg.settings, cfg.jobs, trace_dir, force);
  json runs = json::array();
  for (const auto& r : out.results) {
    runs.push_back(run_status(r));
    if (!r.error.empty()) out.exit_code = std::max(out.exit_code, r.exit_code);
  }
  write_json(trace_dir + "/train_summary.json", {{"config", cfg}, {"runs", runs}});
  return out;
}

void report_runs(const std::vector<RunResult>& results) {
  std::size_t reused = 0, failed = 0;
  for (const auto& r : results) {
    reused += r.skipped;
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "run " << r.spec.stem() << " failed: " << r.error << "\n";
    }
  }
  std::cerr << results.size() << " runs: " << results.size() - reused - failed << " trained, "
            << reused << " reused, " << failed << " failed\n";
}

int cmd_train(const GlobalOptions& g, const std::vector<std::string>& families,
              const std::vector<double>& fractions, std::string out_dir) {
  RunConfig cfg = resolve_config(g);
  if (!families.empty()) {
    cfg.families.clear();
    cfg.sequential_families.clear();
    for (const auto& f : families) {
      (parse_family(f).kind == ProtocolKind::kSequential ? cfg.sequential_families : cfg.families)
          .push_back(f);
    }
  }
  if (!fractions.empty()) {
    cfg.fractions = fractions;
    cfg.sequential_fractions = fractions;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.validate();
  const std::string trace_dir = cfg.output_dir + "/traces";
  fs::create_directories(trace_dir);
  write_json(cfg.output_dir + "/config.json", cfg);
  auto outcome = train_matrix(cfg, cfg.run_specs(), trace_dir, g.force);
  report_runs(outcome.results);
  if (g.json) {
    json runs = json::array();
    for (const auto& r : outcome.results) runs.push_back(run_status(r));
    std::cout << json{{"runs", runs}}.dump() << "\n";
  } else {
    for (const auto& r : outcome.results) {
      std::cout << r.spec.stem() << " "
                << (r.error.empty() ? "ok " + fmt(r.trace->epochs.back().overall) : "FAILED")
                << "\n";
    }
  }
  return outcome.exit_code;
}

// ---- analyze ----

struct LoadedTrace {
  std::string name;  // file stem, used for figure names
  TrainingTrace trace;
  std::uint64_t seed = 0;
};

std::uint64_t trace_seed(const TrainingTrace& t) {
  if (t.config.contains("training") && t.config["training"].contains("seed")) {
    return t.config["training"]["seed"].get<std::uint64_t>();
  }
  return 0;
}

json analyze_traces(const std::vector<LoadedTrace>& traces, const DetectionParams& detection,
                    const std::string& out_dir) {
  fs::create_directories(out_dir);
  json reports = json::array();
  std::map<std::pair<std::string, std::uint64_t>, std::vector<std::pair<double, CriticalPeriodReport>>>
      by_family;
  for (const auto& lt : traces) {
    json r = {{"trace", lt.name},
              {"family", lt.trace.protocol.family()},
              {"fraction", lt.trace.protocol.fraction},
              {"seed", lt.seed}};
    const std::string heatmap = lt.name + ".heatmap.svg";
    render_heatmap(lt.trace, out_dir + "/" + heatmap, detection);
    r["heatmap"] = heatmap;
    if (lt.trace.num_epochs() >= 3) {
      auto rep = detect_critical_period(lt.trace, detection);
      r["critical_period"] = to_json(rep);
      if (lt.trace.protocol.kind != ProtocolKind::kSequential) {
        by_family[{lt.trace.protocol.family(), lt.seed}].emplace_back(lt.trace.protocol.fraction,
                                                                      rep);
      }
    } else {
      r["critical_period"] = nullptr;
      r["note"] = "fewer than 3 epochs";
    }
    reports.push_back(r);
  }

  json summaries = json::array();
  for (auto& [key, reps] : by_family) {
    std::set<double> distinct;
    for (const auto& [f, rep] : reps) distinct.insert(f);
    if (distinct.size() < 2 || distinct.size() != reps.size()) continue;
    json s = {{"family", key.first}, {"seed", key.second}};
    try {
      s["summary"] = to_json(cp_vs_data_fraction(reps));
    } catch (const InsufficientDataError& e) {
      s["error"] = e.what();
    }
    summaries.push_back(s);
  }

  json j = {{"critical_periods", reports}, {"cp_vs_fraction", summaries}};

  std::vector<SequentialPair> pairs;
  for (auto l1 : kLanguages) {
    const std::string tag(language_tag(l1));
    std::map<std::uint64_t, SequentialPair> by_seed;
    for (const auto& lt : traces) {
      const auto fam = lt.trace.protocol.family();
      if (fam == "seq-" + tag + "-cp") by_seed[lt.seed].switch_at_cp = &lt.trace;
      if (fam == "seq-" + tag + "-conv") by_seed[lt.seed].switch_at_convergence = &lt.trace;
    }
    for (const auto& [seed, p] : by_seed) {
      if (p.switch_at_cp && p.switch_at_convergence) pairs.push_back(p);
    }
  }
  if (!pairs.empty()) {
    MonolingualRefs refs;
    for (const auto& lt : traces) {
      const auto fam = lt.trace.protocol.family();
      auto pick = [&](const TrainingTrace*& slot) {
        if (!slot || lt.trace.protocol.fraction > slot->protocol.fraction) slot = &lt.trace;
      };
      if (fam == "mono-en") pick(refs.english);
      if (fam == "mono-cmn") pick(refs.mandarin);
    }
    auto report = cross_inference_compare(pairs, refs);
    render_bars(report, out_dir + "/cross_inference.bars.svg");
    j["cross_inference"] = to_json(report);
    j["cross_inference"]["pairs"] = pairs.size();
    j["cross_inference"]["chart"] = "cross_inference.bars.svg";
  }
  return j;
}

void print_analysis(const json& j) {
  for (const auto& r : j["critical_periods"]) {
    std::cout << r["trace"].get<std::string>() << ": ";
    const auto& cp = r["critical_period"];
    if (cp.is_null() || cp["cp_epoch"].is_null()) {
      std::cout << "no critical period\n";
    } else {
      std::cout << "critical period at epoch " << cp["cp_epoch"].get<int>() << " (surge "
                << fmt(cp["surge_fraction"].get<double>(), 2) << ")\n";
    }
  }
  for (const auto& s : j["cp_vs_fraction"]) {
    std::cout << s["family"].get<std::string>() << " seed " << s["seed"].get<std::uint64_t>()
              << ": ";
    if (s.contains("error")) {
      std::cout << s["error"].get<std::string>() << "\n";
      continue;
    }
    const auto& sum = s["summary"];
    for (const auto& p : sum["points"]) {
      std::cout << "f=" << format_double(p["fraction"].get<double>()) << "->"
                << (p["cp_epoch"].is_null() ? "-" : std::to_string(p["cp_epoch"].get<int>()))
                << " ";
    }
    std::cout << (sum["monotone"].get<bool>() ? "monotone" : "not monotone")
              << (sum["partial"].get<bool>() ? " (partial)" : "") << "\n";
  }
  if (j.contains("cross_inference")) {
    for (const auto& c : j["cross_inference"]["classes"]) {
      std::cout << c["class"].get<std::string>() << ": at_cp " << fmt(c["switch_at_cp"].get<double>())
                << " at_convergence " << fmt(c["switch_at_convergence"].get<double>()) << " drop "
                << fmt(c["drop"].get<double>()) << "\n";
    }
  }
}

int cmd_analyze(const GlobalOptions& g, const std::vector<std::string>& paths, std::string out_dir) {
  RunConfig cfg = resolve_config(g);
  cfg.settings.detection.validate();
  if (out_dir.empty()) out_dir = cfg.output_dir + "/analysis";
  std::vector<LoadedTrace> traces;
  std::set<std::string> names;
  for (const auto& p : paths) {
    LoadedTrace lt;
    lt.trace = load_trace(p);
    lt.seed = trace_seed(lt.trace);
    lt.name = fs::path(p).stem().string();
    while (!names.insert(lt.name).second) lt.name += "_";
    traces.push_back(std::move(lt));
  }
  json j = analyze_traces(traces, cfg.settings.detection, out_dir);
  write_json(out_dir + "/analysis.json", j);
  if (g.json) {
    std::cout << j.dump() << "\n";
  } else {
    print_analysis(j);
  }
  return 0;
}

// ---- reproduce ----

int cmd_reproduce(const GlobalOptions& g, std::string out_dir) {
  RunConfig cfg = resolve_config(g);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.validate();
  const std::string root = cfg.output_dir;
  const std::string fig_dir = root + "/figures";
  fs::create_directories(fig_dir);
  write_json(root + "/config.json", cfg);

  json corpus = json::object();
  for (auto lang : kLanguages) {
    auto dist = corpus_distribution(cfg, lang, "");
    const std::string tag(language_tag(lang));
    render_distribution(dist, fig_dir + "/distribution_" + tag + ".svg");
    corpus[tag] = distribution_json(lang, dist);
  }
  write_json(root + "/corpus_stats.json", corpus);

  auto outcome = train_matrix(cfg, cfg.run_specs(), root + "/traces", g.force);
  report_runs(outcome.results);

  std::vector<LoadedTrace> traces;
  for (const auto& r : outcome.results) {
    if (r.trace) traces.push_back({r.spec.stem(), *r.trace, r.spec.seed});
  }
  json analysis = analyze_traces(traces, cfg.settings.detection, fig_dir);
  write_json(root + "/analysis.json", analysis);

  auto claims = evaluate_claims(outcome.results, cfg.settings.detection);
  json runs = json::array();
  for (const auto& r : outcome.results) runs.push_back(run_status(r));
  json summary = claims.to_json();
  summary["runs"] = runs;
  summary["config"] = cfg;
  write_json(root + "/summary.json", summary);

  std::string text;
  for (const auto& c : claims.claims) {
    text += std::string(c.held ? "HELD     " : "NOT HELD ") + c.name + " (" +
            std::to_string(c.satisfied) + "/" + std::to_string(c.total) + ", need " +
            fmt(c.required_share * 100.0, 0) + "%): " + c.description + "\n";
  }
  write_file_atomic(root + "/summary.txt", text);
  if (g.json) {
    std::cout << summary.dump() << "\n";
  } else {
    std::cout << text;
    std::cout << "artifacts written to " << root << "\n";
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viseme critical-period laboratory"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  int jobs = 0;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Run a single seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_flag("--force", g.force, "Retrain even when a trace already exists");

  std::string word, lang = "en", list_path, plot, out_dir;
  std::vector<std::string> families, trace_paths;
  std::vector<double> fractions;

  auto* map = app.add_subcommand("map", "Transliterate one word to phonemes and visemes");
  map->add_option("word", word, "Word or pinyin syllables")->required();
  map->add_option("--lang", lang, "en or cmn");

  auto* stats = app.add_subcommand("corpus-stats", "Viseme occurrence counts of a word list");
  stats->add_option("word_list", list_path, "Word list (defaults to the bundled one)");
  stats->add_option("--lang", lang, "en or cmn");
  stats->add_option("--plot", plot, "Write a bar chart SVG here");

  auto* train = app.add_subcommand("train", "Run the protocol matrix and write traces");
  train->add_option("--family", families, "Protocol families to run (repeatable)");
  train->add_option("--fraction", fractions, "Split fractions to run (repeatable)");
  train->add_option("--out", out_dir, "Output root");

  auto* analyze = app.add_subcommand("analyze", "Analyze traces and render figures");
  analyze->add_option("traces", trace_paths, "Trace files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", out_dir, "Directory for reports and figures");

  auto* reproduce = app.add_subcommand("reproduce", "Run the whole study and summarize the claims");
  reproduce->add_option("--out", out_dir, "Output root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }
  if (*seed_opt) g.seed = seed;
  if (*jobs_opt) g.jobs = jobs;

  try {
    if (*map) return cmd_map(g, word, lang);
    if (*stats) return cmd_corpus_stats(g, lang, list_path, plot);
    if (*train) return cmd_train(g, families, fractions, out_dir);
    if (*analyze) return cmd_analyze(g, trace_paths, out_dir);
    if (*reproduce) return cmd_reproduce(g, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  }
  return static_cast<int>(ExitCode::kUsage);
}
