#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/scan.hpp"

namespace filippov::io {

enum class MarkerStyle { Stable, Irrelevant, Tangent, Pseudo };

struct SvgMarker {
  State at;
  MarkerStyle style = MarkerStyle::Stable;
  std::string label;
};

struct SvgSeries {
  std::vector<State> points;
  std::string color = "#1f77b4";
  std::string label;
};

struct SvgHeatmap {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<std::size_t> cells;  // row-major indices into `legend`
  std::vector<std::string> legend;
};

struct SvgPlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  Range x_range{0.0, 1.0};
  Range y_range{0.0, 1.0};
  std::vector<SvgSeries> series;
  std::vector<SvgMarker> markers;
  std::optional<double> manifold_x;
  std::optional<Range> sliding_segment;  // y interval drawn on the manifold
  std::optional<SvgHeatmap> heatmap;
};

/// Standalone SVG document; identical specs give identical bytes.
/// Throws DomainError for non-finite coordinates or legend mismatch.
std::string render_svg(const SvgPlotSpec& spec);
void emit_svg(const SvgPlotSpec& spec, const std::string& path);

SvgPlotSpec phase_portrait(const Trajectory& traj, const ModelParams& params);
SvgPlotSpec region_heatmap(const RegionGrid& grid);
SvgPlotSpec basin_heatmap(const BasinGrid& grid, const ModelParams& params);

}  // namespace filippov::io
