#include "filippov/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "filippov/equilibria.hpp"
#include "filippov/errors.hpp"
#include "filippov/sliding.hpp"

namespace filippov::io {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
                                "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#2f4b7c", "#a05195"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite ") + what + " in plot");
}

struct Frame {
  Range xr, yr;
  double px(double x) const { return kLeft + (x - xr.min) / (xr.max - xr.min) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - yr.min) / (yr.max - yr.min) * (kHeight - kTop - kBottom); }
};

const char* marker_color(MarkerStyle s) {
  switch (s) {
    case MarkerStyle::Stable: return "#2ca02c";
    case MarkerStyle::Irrelevant: return "#000000";
    case MarkerStyle::Tangent: return "#d62728";
    case MarkerStyle::Pseudo: return "#2ca02c";
  }
  return "#000000";
}

Range padded(double lo, double hi) {
  if (!(hi > lo)) hi = lo + 1.0;
  return {lo, hi + 0.08 * (hi - lo)};
}

}  // namespace

std::string render_svg(const SvgPlotSpec& spec) {
  require_finite(spec.x_range.min, "x range");
  require_finite(spec.x_range.max, "x range");
  require_finite(spec.y_range.min, "y range");
  require_finite(spec.y_range.max, "y range");
  if (!(spec.x_range.max > spec.x_range.min) || !(spec.y_range.max > spec.y_range.min)) {
    throw DomainError("plot ranges must have max > min");
  }
  const Frame f{spec.x_range, spec.y_range};
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(spec.title) << "</text>\n";

  if (spec.heatmap) {
    const SvgHeatmap& h = *spec.heatmap;
    if (h.nx == 0 || h.ny == 0 || h.cells.size() != h.nx * h.ny) throw DomainError("heatmap size mismatch");
    const double cw = plot_w / static_cast<double>(h.nx);
    const double ch = plot_h / static_cast<double>(h.ny);
    for (std::size_t iy = 0; iy < h.ny; ++iy) {
      for (std::size_t ix = 0; ix < h.nx; ++ix) {
        const std::size_t c = h.cells[iy * h.nx + ix];
        if (c >= h.legend.size()) throw DomainError("heatmap cell refers to a missing legend entry");
        o << "<rect x=\"" << num(kLeft + ix * cw) << "\" y=\"" << num(kTop + plot_h - (iy + 1) * ch)
          << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
          << kPalette[c % std::size(kPalette)] << "\"/>\n";
      }
    }
    for (std::size_t i = 0; i < h.legend.size(); ++i) {
      const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
      o << "<rect x=\"" << num(kWidth - kRight + 15) << "\" y=\"" << num(ly - 10) << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[i % std::size(kPalette)] << "\"/>\n";
      o << "<text x=\"" << num(kWidth - kRight + 32) << "\" y=\"" << num(ly) << "\">" << escape(h.legend[i])
        << "</text>\n";
    }
  }

  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
    << num(plot_h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = spec.x_range.min + (spec.x_range.max - spec.x_range.min) * i / 5.0;
    const double yv = spec.y_range.min + (spec.y_range.max - spec.y_range.min) * i / 5.0;
    o << "<line x1=\"" << num(f.px(xv)) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(f.px(xv))
      << "\" y2=\"" << num(kHeight - kBottom + 5) << "\" stroke=\"#000000\"/>\n";
    o << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(kHeight - kBottom + 18)
      << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(f.py(yv)) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(f.py(yv)) << "\" stroke=\"#000000\"/>\n";
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
      << tick(yv) << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(kTop + plot_h / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

  o << "<g clip-path=\"url(#plot)\">\n";
  o << "<clipPath id=\"plot\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
    << "\" height=\"" << num(plot_h) << "\"/></clipPath>\n";
  for (const auto& s : spec.series) {
    if (s.points.empty()) continue;
    o << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      require_finite(s.points[i].x, "series point");
      require_finite(s.points[i].y, "series point");
      if (i) o << ' ';
      o << num(f.px(s.points[i].x)) << ',' << num(f.py(s.points[i].y));
    }
    o << "\"/>\n";
  }
  if (spec.manifold_x) {
    require_finite(*spec.manifold_x, "manifold position");
    const double mx = f.px(*spec.manifold_x);
    o << "<line x1=\"" << num(mx) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(mx) << "\" y2=\""
      << num(kHeight - kBottom) << "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
    if (spec.sliding_segment) {
      require_finite(spec.sliding_segment->min, "sliding segment");
      require_finite(spec.sliding_segment->max, "sliding segment");
      o << "<line x1=\"" << num(mx) << "\" y1=\"" << num(f.py(spec.sliding_segment->min)) << "\" x2=\"" << num(mx)
        << "\" y2=\"" << num(f.py(spec.sliding_segment->max)) << "\" stroke=\"#d62728\" stroke-width=\"3\"/>\n";
    }
  }
  o << "</g>\n";

  for (const auto& m : spec.markers) {
    require_finite(m.at.x, "marker");
    require_finite(m.at.y, "marker");
    const double cx = f.px(m.at.x);
    const double cy = f.py(m.at.y);
    if (m.style == MarkerStyle::Pseudo) {
      o << "<rect x=\"" << num(cx - 4.5) << "\" y=\"" << num(cy - 4.5) << "\" width=\"9\" height=\"9\" fill=\""
        << marker_color(m.style) << "\" stroke=\"#000000\"/>\n";
    } else {
      o << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4.5\" fill=\"" << marker_color(m.style)
        << "\"/>\n";
    }
    if (!m.label.empty()) {
      o << "<text x=\"" << num(cx + 7) << "\" y=\"" << num(cy - 7) << "\" font-size=\"10\">" << escape(m.label)
        << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void emit_svg(const SvgPlotSpec& spec, const std::string& path) {
  const std::string doc = render_svg(spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc;
  if (!out) throw IoError("error while writing '" + path + "'");
}

namespace {

void add_equilibrium_markers(SvgPlotSpec& spec, const ModelParams& params) {
  for (const auto& r : all_equilibria(params)) {
    if (r.location.y <= 0.0) continue;
    MarkerStyle style = MarkerStyle::Irrelevant;
    if (r.kind == EquilibriumKind::Pseudo) {
      style = r.stability == Stability::Stable ? MarkerStyle::Pseudo : MarkerStyle::Irrelevant;
    } else if (r.placement == Placement::Regular && r.stability == Stability::Stable) {
      style = MarkerStyle::Stable;
    }
    std::string label(r.field == FieldTag::NonHarvest ? "E1" : r.field == FieldTag::Harvest ? "E2" : "Ep");
    spec.markers.push_back({r.location, style, label});
  }
  if (params.S() < params.k1()) {
    for (const auto& t : tangent_points(params)) spec.markers.push_back({t.location, MarkerStyle::Tangent, ""});
  }
  spec.manifold_x = params.S();
  const SlidingBounds sb = sliding_bounds(params);
  if (!sb.empty()) spec.sliding_segment = Range{std::max(sb.y_lower, 0.0), sb.y_upper};
}

}  // namespace

SvgPlotSpec phase_portrait(const Trajectory& traj, const ModelParams& params) {
  SvgPlotSpec spec;
  spec.title = "Phase portrait";
  spec.x_label = "prey x";
  spec.y_label = "predator y";
  double xmax = params.S();
  double ymax = 0.0;
  for (const auto& seg : traj.segments) {
    SvgSeries s;
    s.color = seg.regime == Regime::FlowS1 ? "#1f77b4" : seg.regime == Regime::FlowS2 ? "#ff7f0e" : "#9467bd";
    s.label = std::string(to_string(seg.regime));
    s.points = seg.states;
    for (const auto& p : seg.states) {
      xmax = std::max(xmax, p.x);
      ymax = std::max(ymax, p.y);
    }
    spec.series.push_back(std::move(s));
  }
  add_equilibrium_markers(spec, params);
  for (const auto& m : spec.markers) {
    xmax = std::max(xmax, m.at.x);
    ymax = std::max(ymax, m.at.y);
  }
  spec.x_range = padded(0.0, xmax);
  spec.y_range = padded(0.0, ymax);
  return spec;
}

SvgPlotSpec region_heatmap(const RegionGrid& grid) {
  SvgPlotSpec spec;
  spec.title = "Equilibrium regions";
  spec.x_label = grid.x_axis.name;
  spec.y_label = grid.y_axis.name;
  spec.x_range = {grid.x_axis.min, grid.x_axis.max};
  spec.y_range = {grid.y_axis.min, grid.y_axis.max};
  SvgHeatmap h;
  h.nx = grid.x_axis.n;
  h.ny = grid.y_axis.n;
  std::map<std::string, std::size_t> ids;
  for (const auto& c : grid.cells) {
    const std::string label = c.label();
    auto [it, inserted] = ids.emplace(label, h.legend.size());
    if (inserted) h.legend.push_back(label);
    h.cells.push_back(it->second);
  }
  spec.heatmap = std::move(h);
  return spec;
}

SvgPlotSpec basin_heatmap(const BasinGrid& grid, const ModelParams& params) {
  SvgPlotSpec spec;
  spec.title = "Basins of attraction";
  spec.x_label = "prey x";
  spec.y_label = "predator y";
  spec.x_range = {grid.x_axis.min, grid.x_axis.max};
  spec.y_range = {grid.y_axis.min, grid.y_axis.max};
  SvgHeatmap h;
  h.nx = grid.x_axis.n;
  h.ny = grid.y_axis.n;
  for (auto l : {BasinLabel::ER1, BasinLabel::ER2, BasinLabel::PSEUDO, BasinLabel::UNDETERMINED}) {
    h.legend.emplace_back(to_string(l));
  }
  for (auto l : grid.cells) h.cells.push_back(static_cast<std::size_t>(l));
  spec.heatmap = std::move(h);
  add_equilibrium_markers(spec, params);
  std::erase_if(spec.markers, [&](const SvgMarker& m) {
    return m.at.x < spec.x_range.min || m.at.x > spec.x_range.max || m.at.y < spec.y_range.min ||
           m.at.y > spec.y_range.max;
  });
  return spec;
}

}  // namespace filippov::io
