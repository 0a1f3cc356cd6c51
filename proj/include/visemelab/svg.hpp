#pragma once

#include <string>

#include "visemelab/analysis.hpp"
#include "visemelab/corpus.hpp"
#include "visemelab/trace.hpp"

namespace visemelab {

/// Epochs across, visemes down, one <rect class="cell"> per (epoch, viseme);
/// darker is more accurate. The CP column, when one is detected, gets a red
/// <rect class="cp-outline">.
std::string heatmap_svg(const TrainingTrace& trace, const DetectionParams& params = {});

/// Four bars per viseme: monolingual Mandarin, monolingual English, switch at
/// CP, switch at convergence. Bars are <rect class="bar"> with data-value
/// holding the accuracy; missing values draw nothing.
std::string bars_svg(const CrossInferenceReport& report);

/// Occurrence counts per label, largest first, coloured by class.
std::string distribution_svg(const VisemeDistribution& dist);

void render_heatmap(const TrainingTrace& trace, const std::string& path,
                    const DetectionParams& params = {});
void render_bars(const CrossInferenceReport& report, const std::string& path);
void render_distribution(const VisemeDistribution& dist, const std::string& path);

inline constexpr double kBarPlotHeight = 200.0;

}  // namespace visemelab
