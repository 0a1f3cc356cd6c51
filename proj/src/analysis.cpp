#include "visemelab/analysis.hpp"

#include <algorithm>

#include "visemelab/error.hpp"
#include "visemelab/inventory.hpp"

namespace visemelab {

namespace {

std::vector<AccuracyRow> accuracy_rows(const TrainingTrace& trace) {
  std::vector<AccuracyRow> rows;
  rows.reserve(trace.epochs.size());
  for (const auto& e : trace.epochs) rows.push_back(e.accuracy);
  return rows;
}

// Centred moving average of one viseme's gain series, truncated at the ends.
std::optional<double> smoothed(const GainMatrix& g, std::size_t row, std::size_t v, int window) {
  if (window <= 1) return g.rows[row][v];
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  double sum = 0.0;
  int n = 0;
  for (std::ptrdiff_t r = static_cast<std::ptrdiff_t>(row) - half;
       r <= static_cast<std::ptrdiff_t>(row) + half; ++r) {
    if (r < 0 || r >= static_cast<std::ptrdiff_t>(g.rows.size())) continue;
    if (const auto& x = g.rows[r][v]) {
      sum += *x;
      ++n;
    }
  }
  if (n == 0 || !g.rows[row][v]) return std::nullopt;
  return sum / n;
}

struct RowStats {
  double surge_fraction = 0.0;
  double mean_gain = 0.0;
  bool any = false;
};

RowStats row_stats(const GainMatrix& g, std::size_t row, const DetectionParams& p) {
  RowStats s;
  std::size_t present = 0, surging = 0;
  double sum = 0.0;
  for (std::size_t v = 0; v < g.rows[row].size(); ++v) {
    auto x = smoothed(g, row, v, p.window);
    if (!x) continue;
    ++present;
    sum += *x;
    if (*x >= p.surge_threshold) ++surging;
  }
  if (present) {
    s.any = true;
    s.surge_fraction = static_cast<double>(surging) / static_cast<double>(present);
    s.mean_gain = sum / static_cast<double>(present);
  }
  return s;
}

}  // namespace

GainMatrix gains(const std::vector<AccuracyRow>& accuracy) {
  if (accuracy.size() < 2) throw InsufficientDataError("gains need at least 2 epochs");
  GainMatrix g;
  g.rows.reserve(accuracy.size() - 1);
  for (std::size_t t = 1; t < accuracy.size(); ++t) {
    const auto& cur = accuracy[t];
    const auto& prev = accuracy[t - 1];
    if (cur.size() != prev.size()) throw IncompatibleError("accuracy rows differ in width");
    AccuracyRow row(cur.size());
    for (std::size_t v = 0; v < cur.size(); ++v) {
      if (cur[v] && prev[v]) row[v] = *cur[v] - *prev[v];
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

GainMatrix gains(const TrainingTrace& trace) { return gains(accuracy_rows(trace)); }

CriticalPeriodReport detect_critical_period(const std::vector<AccuracyRow>& accuracy,
                                            const DetectionParams& params) {
  params.validate();
  if (accuracy.size() < 3) {
    throw InsufficientDataError("critical-period detection needs at least 3 epochs");
  }
  GainMatrix g = gains(accuracy);
  CriticalPeriodReport r;
  r.params = params;
  for (std::size_t row = 0; row < g.num_rows(); ++row) {
    RowStats s = row_stats(g, row, params);
    r.surge_fraction_by_epoch.push_back(s.surge_fraction);
    r.mean_gain_by_epoch.push_back(s.mean_gain);
    if (!r.cp_epoch && s.any && s.surge_fraction >= params.surge_fraction) {
      r.cp_epoch = g.epoch_of_row(row);
      r.surge_fraction = s.surge_fraction;
      r.mean_gain = s.mean_gain;
    }
  }
  return r;
}

CriticalPeriodReport detect_critical_period(const TrainingTrace& trace,
                                            const DetectionParams& params) {
  return detect_critical_period(accuracy_rows(trace), params);
}

CriticalPeriodStream::CriticalPeriodStream(DetectionParams params) : params_(params) {
  params_.validate();
}

std::optional<int> CriticalPeriodStream::push(const AccuracyRow& accuracy) {
  rows_.push_back(accuracy);
  if (fired_ || rows_.size() < 2) return std::nullopt;
  GainMatrix g = gains(rows_);
  const std::size_t lookahead = static_cast<std::size_t>(params_.window / 2);
  if (g.num_rows() <= lookahead) return std::nullopt;
  // Only the row that just became fully determined is new.
  std::size_t row = g.num_rows() - 1 - lookahead;
  RowStats s = row_stats(g, row, params_);
  if (s.any && s.surge_fraction >= params_.surge_fraction) {
    fired_ = g.epoch_of_row(row);
    return fired_;
  }
  return std::nullopt;
}

CpSummary cp_vs_data_fraction(std::vector<std::pair<double, CriticalPeriodReport>> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CpSummary s;
  std::size_t detected = 0;
  for (const auto& [f, r] : reports) {
    s.points.emplace_back(f, r.cp_epoch);
    if (r.cp_epoch) {
      ++detected;
    } else {
      s.partial = true;
    }
  }
  if (detected < 2) {
    throw InsufficientDataError("need critical periods at two or more fractions");
  }
  s.monotone = true;
  std::optional<int> prev;
  for (const auto& [f, cp] : s.points) {
    if (!cp) continue;
    if (prev && *cp > *prev) s.monotone = false;
    prev = cp;
  }
  return s;
}

namespace {

std::optional<double> final_accuracy(const TrainingTrace& t, const std::string& label) {
  if (t.epochs.empty()) return std::nullopt;
  auto idx = t.index_of(label);
  if (!idx) return std::nullopt;
  return t.epochs.back().accuracy[*idx];
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

CrossInferenceReport cross_inference_compare(const std::vector<SequentialPair>& pairs,
                                             const MonolingualRefs& refs) {
  if (pairs.empty()) throw InsufficientDataError("no sequential traces to compare");
  const TrainingTrace& first = *pairs.front().switch_at_cp;
  for (const auto& p : pairs) {
    for (const TrainingTrace* t : {p.switch_at_cp, p.switch_at_convergence}) {
      if (!t) throw InsufficientDataError("missing sequential trace");
      if (t->inventory_hash != first.inventory_hash) {
        throw IncompatibleError("sequential traces use different inventories (" +
                                hash_hex(t->inventory_hash) + " vs " +
                                hash_hex(first.inventory_hash) + ")");
      }
      if (t->epochs.empty() || t->epochs.back().phase != 2) {
        throw InsufficientDataError("sequential trace did not reach its second phase");
      }
    }
  }

  CrossInferenceReport report;
  for (int c = 0; c < 3; ++c) report.classes[c].cls = static_cast<VisemeClass>(c);
  std::array<std::vector<double>, 3> cp_means, conv_means, en_refs, cmn_refs;

  for (const auto& label : first.labels) {
    VisemeComparison row;
    row.label = label;
    row.cls = parse_rendered_label(label).cls;
    std::vector<double> cp, conv;
    for (const auto& p : pairs) {
      auto a = final_accuracy(*p.switch_at_cp, label);
      auto b = final_accuracy(*p.switch_at_convergence, label);
      if (a && b) {
        cp.push_back(*a);
        conv.push_back(*b);
      }
    }
    row.at_cp = mean_of(cp);
    row.at_convergence = mean_of(conv);
    if (refs.english) row.mono_english = final_accuracy(*refs.english, label);
    if (refs.mandarin) row.mono_mandarin = final_accuracy(*refs.mandarin, label);
    int c = static_cast<int>(row.cls);
    if (row.at_cp && row.at_convergence) {
      cp_means[c].push_back(*row.at_cp);
      conv_means[c].push_back(*row.at_convergence);
    }
    if (row.mono_english) en_refs[c].push_back(*row.mono_english);
    if (row.mono_mandarin) cmn_refs[c].push_back(*row.mono_mandarin);
    report.visemes.push_back(std::move(row));
  }
  for (int c = 0; c < 3; ++c) {
    auto& cls = report.classes[c];
    cls.visemes = cp_means[c].size();
    cls.at_cp = mean_of(cp_means[c]).value_or(0.0);
    cls.at_convergence = mean_of(conv_means[c]).value_or(0.0);
    cls.drop = cls.at_cp - cls.at_convergence;
    cls.mono_english = mean_of(en_refs[c]);
    cls.mono_mandarin = mean_of(cmn_refs[c]);
  }
  return report;
}

CrossInferenceReport cross_inference_compare(const TrainingTrace& trace_cp,
                                             const TrainingTrace& trace_conv,
                                             const MonolingualRefs& refs) {
  return cross_inference_compare({SequentialPair{&trace_cp, &trace_conv}}, refs);
}

namespace {
nlohmann::json opt(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json();
}
nlohmann::json opt(const std::optional<int>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json();
}
}  // namespace

nlohmann::json to_json(const CriticalPeriodReport& r) {
  return {
      {"cp_epoch", opt(r.cp_epoch)},
      {"surge_fraction", r.surge_fraction},
      {"mean_gain", r.mean_gain},
      {"params",
       {{"surge_threshold", r.params.surge_threshold},
        {"surge_fraction", r.params.surge_fraction},
        {"window", r.params.window}}},
      {"surge_fraction_by_epoch", r.surge_fraction_by_epoch},
      {"mean_gain_by_epoch", r.mean_gain_by_epoch},
  };
}

nlohmann::json to_json(const CpSummary& s) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [f, cp] : s.points) pts.push_back({{"fraction", f}, {"cp_epoch", opt(cp)}});
  return {{"points", pts}, {"monotone", s.monotone}, {"partial", s.partial}};
}

nlohmann::json to_json(const CrossInferenceReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"class", std::string(viseme_class_name(c.cls))},
                       {"visemes", c.visemes},
                       {"switch_at_cp", c.at_cp},
                       {"switch_at_convergence", c.at_convergence},
                       {"drop", c.drop},
                       {"mono_english", opt(c.mono_english)},
                       {"mono_mandarin", opt(c.mono_mandarin)}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& v : r.visemes) {
    rows.push_back({{"label", v.label},
                    {"class", std::string(viseme_class_name(v.cls))},
                    {"switch_at_cp", opt(v.at_cp)},
                    {"switch_at_convergence", opt(v.at_convergence)},
                    {"mono_english", opt(v.mono_english)},
                    {"mono_mandarin", opt(v.mono_mandarin)}});
  }
  return {{"classes", classes}, {"visemes", rows}};
}

}  // namespace visemelab
