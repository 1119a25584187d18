#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "filippov/integrator.hpp"

namespace filippov {

/// One sampled axis of a grid; samples sit at cell centres.
struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;

  double value(std::size_t i) const noexcept {
    return min + (static_cast<double>(i) + 0.5) * (max - min) / static_cast<double>(n);
  }
  double cell_width() const noexcept { return (max - min) / static_cast<double>(n); }

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Summary of the equilibria at one (S, p) cell.
struct RegionCode {
  bool undetermined = false;
  bool nh_exists = false;
  Placement nh_placement = Placement::NotApplicable;
  Stability nh_stability = Stability::Inconclusive;
  bool h_exists = false;
  Placement h_placement = Placement::NotApplicable;
  Stability h_stability = Stability::Inconclusive;
  bool pseudo_exists = false;
  Stability pseudo_stability = Stability::Inconclusive;

  friend bool operator==(const RegionCode&, const RegionCode&) = default;

  /// Compact region label such as "ER1+EV2+EP(S)".
  std::string label() const;
};

enum class BasinLabel : std::uint8_t { ER1, ER2, PSEUDO, UNDETERMINED };

std::string_view to_string(BasinLabel label) noexcept;
BasinLabel basin_label_from_string(std::string_view text);

/// Row-major grid: cell (ix, iy) lives at index iy * x_axis.n + ix.
template <class Cell>
struct GridResult {
  AxisSpec x_axis;
  AxisSpec y_axis;
  std::vector<Cell> cells;
  ParamValues base;
  std::vector<std::string> warnings;

  std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * x_axis.n + ix; }
  const Cell& at(std::size_t ix, std::size_t iy) const { return cells.at(index(ix, iy)); }

  friend bool operator==(const GridResult&, const GridResult&) = default;
};

using RegionGrid = GridResult<RegionCode>;
using BasinGrid = GridResult<BasinLabel>;

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct Resolution {
  std::size_t nx = 2;
  std::size_t ny = 2;
};

/// Region codes over S (x axis) and p (y axis). Interior equilibria are
/// solved once per p row since they do not depend on S.
RegionGrid scan_sp_plane(const ModelParams& base, Range s_range, Range p_range, Resolution res);

/// Supremum of p below which the mode has an interior equilibrium, by bisection.
/// Throws NumericalError if existence does not change across the bracket.
double existence_boundary_p(const ModelParams& base, PsiMode mode, Range bracket = {1e-6, 10.0},
                            double tol = 1e-7);

struct CurvePoint {
  double p = 0.0;
  double x = 0.0;
  double y = 0.0;
  bool exists = false;
  bool jump = false;  // continuity check failed between this sample and the previous one
};

/// x*(p) along `samples` evenly spaced p values (endpoints included).
std::vector<CurvePoint> equilibrium_curve(const ModelParams& base, PsiMode mode, Range p_range,
                                          std::size_t samples);

/// Implicit derivative dx*/dp of an interior root of the cubic.
double equilibrium_curve_slope(const ModelParams& params, PsiMode mode, double x) noexcept;

struct BoundaryBifurcation {
  double S = 0.0;
  PsiMode mode = PsiMode::NonHarvest;
  double y = 0.0;
  std::string observed_type;  // "focus", "node", "saddle" or "degenerate" from the eigenvalues
  std::array<std::complex<double>, 2> eigenvalues{};
};

/// Thresholds S in s_range where an interior equilibrium meets the manifold.
std::vector<BoundaryBifurcation> locate_boundary_bifurcations(const ModelParams& base, Range s_range,
                                                              double tol = 1e-9);

/// Attractor label for each initial condition on a cell-centred grid.
BasinGrid compute_basins(const ModelParams& base, Range x_range, Range y_range, Resolution res,
                         const SimOptions& sim);

struct MSweepEntry {
  double m = 0.0;
  RegionGrid grid;
  double both_exist_fraction = 0.0;
};

std::vector<MSweepEntry> scan_m_sweep(const ModelParams& base, const std::vector<double>& m_values,
                                      Range s_range, Range p_range, Resolution res);

double both_exist_fraction(const RegionGrid& grid) noexcept;

}  // namespace filippov
