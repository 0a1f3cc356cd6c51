#include "visemelab/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "visemelab/text_util.hpp"

namespace visemelab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// White at 0, deep blue at 1.
std::string shade(double a) {
  a = std::clamp(a, 0.0, 1.0);
  auto ch = [a](int lo, int hi) { return static_cast<int>(hi + (lo - hi) * a + 0.5); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", ch(8, 255), ch(48, 255), ch(107, 255));
  return buf;
}

std::string open_svg(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"#ffffff\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start",
                 int size = 10) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

std::string rect(const char* cls, double x, double y, double w, double h, const std::string& fill,
                 const std::string& extra = "") {
  return "<rect class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"" + extra +
         "/>\n";
}

const std::array<const char*, 3> kClassColours = {"#4c72b0", "#dd8452", "#55a868"};

}  // namespace

std::string heatmap_svg(const TrainingTrace& trace, const DetectionParams& params) {
  const double cell = 14.0, left = 60.0, top = 36.0;
  const std::size_t epochs = trace.num_epochs(), visemes = trace.num_visemes();
  const double w = left + cell * static_cast<double>(epochs) + 20.0;
  const double h = top + cell * static_cast<double>(visemes) + 40.0;
  std::string out = open_svg(w, h);
  out += text(left, 16.0, trace.protocol.family() + " at " + format_double(trace.protocol.fraction) +
                              " of the data", "start", 12);
  for (std::size_t v = 0; v < visemes; ++v) {
    double y = top + cell * static_cast<double>(v);
    out += text(left - 4.0, y + cell - 3.0, trace.labels[v], "end");
    for (std::size_t e = 0; e < epochs; ++e) {
      const auto& a = trace.epochs[e].accuracy[v];
      double x = left + cell * static_cast<double>(e);
      std::string title = "<title>" + escape(trace.labels[v]) + " epoch " +
                          std::to_string(e + 1) + ": " + (a ? num(*a) : std::string("absent")) +
                          "</title>";
      out += "<rect class=\"cell\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
             num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" +
             (a ? shade(*a) : std::string("#d9d9d9")) + "\">" + title + "</rect>\n";
    }
  }
  for (std::size_t e = 0; e < epochs; ++e) {
    if ((e + 1) % 5 == 0 || e == 0) {
      out += text(left + cell * (static_cast<double>(e) + 0.5), top + cell * visemes + 12.0,
                  std::to_string(e + 1), "middle");
    }
  }
  out += text(left, top + cell * visemes + 28.0, "epoch");
  if (epochs >= 3) {
    auto rep = detect_critical_period(trace, params);
    if (rep.cp_epoch) {
      double x = left + cell * static_cast<double>(*rep.cp_epoch - 1);
      out += rect("cp-outline", x, top, cell, cell * static_cast<double>(visemes), "none",
                  " stroke=\"#d62728\" stroke-width=\"2\"");
    }
  }
  out += "</svg>\n";
  return out;
}

std::string bars_svg(const CrossInferenceReport& report) {
  const double bar = 6.0, gap = 10.0, left = 40.0, top = 60.0;
  const double group = 4 * bar + gap;
  const double w = left + group * static_cast<double>(report.visemes.size()) + 180.0;
  const double h = top + kBarPlotHeight + 50.0;
  const std::array<const char*, 4> names = {"Monolingual Mandarin", "Monolingual English",
                                            "Switch at critical period",
                                            "Switch at convergence"};
  const std::array<const char*, 4> colours = {"#c44e52", "#4c72b0", "#55a868", "#8172b2"};
  std::string out = open_svg(w, h);
  out += "<g class=\"legend\">\n";
  for (int i = 0; i < 4; ++i) {
    double y = 8.0 + 12.0 * i;
    out += rect("legend-swatch", left, y, 10.0, 10.0, colours[i]);
    out += text(left + 14.0, y + 9.0, names[i]);
  }
  out += "</g>\n";
  const double base = top + kBarPlotHeight;
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(base) + "\" x2=\"" + num(w - 20.0) +
         "\" y2=\"" + num(base) + "\" stroke=\"#000000\"/>\n";
  for (std::size_t i = 0; i < report.visemes.size(); ++i) {
    const auto& v = report.visemes[i];
    double x0 = left + group * static_cast<double>(i);
    const std::array<std::optional<double>, 4> vals = {v.mono_mandarin, v.mono_english, v.at_cp,
                                                       v.at_convergence};
    for (int k = 0; k < 4; ++k) {
      if (!vals[k]) continue;
      double hgt = std::clamp(*vals[k], 0.0, 1.0) * kBarPlotHeight;
      out += rect("bar", x0 + bar * k, base - hgt, bar, hgt, colours[k],
                  " data-series=\"" + std::to_string(k) + "\" data-value=\"" +
                      format_double(*vals[k]) + "\"");
    }
    out += text(x0 + 2 * bar, base + 12.0, v.label, "middle", 9);
  }
  out += "</svg>\n";
  return out;
}

std::string distribution_svg(const VisemeDistribution& dist) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(dist.counts.begin(), dist.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const double bar = 18.0, left = 50.0, top = 20.0, plot = 220.0;
  const double w = left + bar * static_cast<double>(rows.size()) + 20.0;
  const double h = top + plot + 40.0;
  std::uint64_t peak = 1;
  for (const auto& r : rows) peak = std::max(peak, r.second);
  std::string out = open_svg(w, h);
  const double base = top + plot;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double hgt = plot * static_cast<double>(rows[i].second) / static_cast<double>(peak);
    double x = left + bar * static_cast<double>(i);
    int cls = static_cast<int>(parse_rendered_label(rows[i].first).cls);
    out += rect("bar", x + 2.0, base - hgt, bar - 4.0, hgt, kClassColours[cls],
                " data-value=\"" + std::to_string(rows[i].second) + "\"");
    out += text(x + bar / 2.0, base + 12.0, rows[i].first, "middle", 9);
  }
  out += text(left, base + 30.0, "occurrences, weighted by samples per word");
  out += "</svg>\n";
  return out;
}

void render_heatmap(const TrainingTrace& trace, const std::string& path,
                    const DetectionParams& params) {
  write_file_atomic(path, heatmap_svg(trace, params));
}

void render_bars(const CrossInferenceReport& report, const std::string& path) {
  write_file_atomic(path, bars_svg(report));
}

void render_distribution(const VisemeDistribution& dist, const std::string& path) {
  write_file_atomic(path, distribution_svg(dist));
}

}  // namespace visemelab
