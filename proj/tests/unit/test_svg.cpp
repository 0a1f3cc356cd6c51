#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "visemelab/error.hpp"
#include "visemelab/svg.hpp"
#include "visemelab/text_util.hpp"
#include "xml_check.hpp"

using namespace visemelab;

namespace {

std::vector<testing::XmlElement> parse_ok(const std::string& svg) {
  std::vector<testing::XmlElement> els;
  std::string why;
  INFO(why);
  bool ok = testing::well_formed_xml(svg, &els, &why);
  CHECK_MESSAGE(ok, why);
  REQUIRE(!els.empty());
  CHECK(els.front().name == "svg");
  CHECK(els.front().attrs.at("xmlns") == "http://www.w3.org/2000/svg");
  return els;
}

TrainingTrace demo_trace() {
  std::vector<std::vector<double>> rows;
  for (int e = 1; e <= 8; ++e) {
    rows.push_back({e >= 4 ? 0.8 : 0.1, e >= 4 ? 0.7 : 0.2, 0.05 * e, e >= 5 ? 0.9 : 0.3});
  }
  auto t = testing::make_trace(rows);
  t.labels = {"T_E", "p", "<y>", "a&b"};
  t.inventory_hash = inventory_hash(t.labels);
  return t;
}

CrossInferenceReport demo_report() {
  CrossInferenceReport r;
  auto add = [&](const std::string& label, std::optional<double> cp, std::optional<double> conv,
                 std::optional<double> en, std::optional<double> cmn) {
    VisemeComparison v;
    v.label = label;
    v.cls = parse_rendered_label(label).cls;
    v.at_cp = cp;
    v.at_convergence = conv;
    v.mono_english = en;
    v.mono_mandarin = cmn;
    r.visemes.push_back(v);
  };
  add("p", 0.9, 0.8, 0.95, 0.93);
  add("T_E", 0.5, 0.3, 0.9, std::nullopt);
  add("y_M", 0.734, 0.123, std::nullopt, 0.88);
  return r;
}

}  // namespace

TEST_CASE("1x1 heatmap is a single cell of valid markup") {
  auto t = testing::make_trace({{0.5}});
  auto els = parse_ok(heatmap_svg(t));
  CHECK(testing::count_class(els, "cell") == 1);
  CHECK(testing::count_class(els, "cp-outline") == 0);
}

TEST_CASE("heatmap has one cell per epoch and viseme and outlines the CP") {
  auto t = demo_trace();
  auto els = parse_ok(heatmap_svg(t));
  CHECK(testing::count_class(els, "cell") == t.num_epochs() * t.num_visemes());
  CHECK(testing::count_class(els, "cp-outline") == 1);
  for (const auto& e : els) {
    if (e.attrs.count("class") && e.attrs.at("class") == "cp-outline") {
      // Column of epoch 4: left margin 60 plus three 14-px cells.
      CHECK(e.attrs.at("x") == "102.00");
      CHECK(e.attrs.at("stroke") == "#d62728");
    }
  }
  auto flat = testing::make_trace({{0.2, 0.2}, {0.2, 0.2}, {0.2, 0.2}});
  CHECK(testing::count_class(parse_ok(heatmap_svg(flat)), "cp-outline") == 0);
}

TEST_CASE("renderers are pure") {
  auto t = demo_trace();
  CHECK(heatmap_svg(t) == heatmap_svg(t));
  CHECK(bars_svg(demo_report()) == bars_svg(demo_report()));
  auto dir = std::filesystem::temp_directory_path() / "vl_svg_test";
  std::filesystem::create_directories(dir);
  render_heatmap(t, (dir / "a.svg").string());
  render_heatmap(t, (dir / "b.svg").string());
  CHECK(read_text_file((dir / "a.svg").string()) == read_text_file((dir / "b.svg").string()));
  CHECK(read_text_file((dir / "a.svg").string()) == heatmap_svg(t));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable paths raise an I/O error") {
  auto t = demo_trace();
  CHECK_THROWS_AS(render_heatmap(t, "/proc/visemelab/nope/heatmap.svg"), Error);
}

TEST_CASE("an empty report renders the legend only") {
  auto els = parse_ok(bars_svg(CrossInferenceReport{}));
  CHECK(testing::count_class(els, "bar") == 0);
  CHECK(testing::count_class(els, "legend") == 1);
  CHECK(testing::count_class(els, "legend-swatch") == 4);
}

TEST_CASE("bar heights are proportional to accuracies") {
  auto r = demo_report();
  auto els = parse_ok(bars_svg(r));
  CHECK(testing::count_class(els, "bar") == 10);
  for (const auto& e : els) {
    if (!e.attrs.count("class") || e.attrs.at("class") != "bar") continue;
    const double value = std::stod(e.attrs.at("data-value"));
    const double height = std::stod(e.attrs.at("height"));
    CHECK(std::abs(height - value * kBarPlotHeight) <= 0.005 * kBarPlotHeight);
  }
}

TEST_CASE("distribution chart orders bars by count") {
  VisemeDistribution d;
  d.counts = {{"p", 30}, {"T_E", 5}, {"a", 50}};
  d.grand_total = 85;
  auto els = parse_ok(distribution_svg(d));
  std::vector<std::string> values;
  for (const auto& e : els) {
    if (e.attrs.count("class") && e.attrs.at("class") == "bar") values.push_back(e.attrs.at("data-value"));
  }
  CHECK(values == std::vector<std::string>{"50", "30", "5"});
}
