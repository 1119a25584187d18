#include "filippov/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "filippov/errors.hpp"
#include "parallel.hpp"

namespace filippov {
namespace {

void require_range(const Range& r, const char* what) {
  if (!(r.min > 0.0) || !(r.max > r.min) || !std::isfinite(r.max)) {
    std::ostringstream msg;
    msg << what << " range must satisfy 0 < min < max, got [" << r.min << ", " << r.max << "]";
    throw ParamError(msg.str());
  }
}

void require_resolution(const Resolution& res) {
  if (res.nx < 2 || res.ny < 2) throw ParamError("grid resolution must be at least 2 per axis");
}

char stability_letter(Stability s) {
  switch (s) {
    case Stability::Stable: return 'S';
    case Stability::Unstable: return 'U';
    case Stability::Inconclusive: return 'I';
  }
  return '?';
}

std::string placement_prefix(Placement p) {
  switch (p) {
    case Placement::Regular: return "ER";
    case Placement::Virtual: return "EV";
    case Placement::OnBoundary: return "EB";
    case Placement::NotApplicable: return "E";
  }
  return "E";
}

std::string observed_type(const std::array<std::complex<double>, 2>& ev) {
  if (ev[0].imag() != 0.0) return "focus";
  const double a = ev[0].real();
  const double b = ev[1].real();
  if (a == 0.0 || b == 0.0) return "degenerate";
  return (a > 0.0) == (b > 0.0) ? "node" : "saddle";
}

BasinLabel label_for(const EquilibriumRecord& rec) {
  if (rec.kind == EquilibriumKind::Pseudo) return BasinLabel::PSEUDO;
  if (rec.kind == EquilibriumKind::Interior && rec.placement == Placement::Regular) {
    return rec.field == FieldTag::NonHarvest ? BasinLabel::ER1 : BasinLabel::ER2;
  }
  return BasinLabel::UNDETERMINED;
}

}  // namespace

std::string RegionCode::label() const {
  if (undetermined) return "undetermined";
  std::string out;
  auto append = [&](const std::string& part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (nh_exists) append(placement_prefix(nh_placement) + "1(" + stability_letter(nh_stability) + ")");
  if (h_exists) append(placement_prefix(h_placement) + "2(" + stability_letter(h_stability) + ")");
  if (pseudo_exists) append(std::string("EP(") + stability_letter(pseudo_stability) + ")");
  return out.empty() ? "none" : out;
}

std::string_view to_string(BasinLabel label) noexcept {
  switch (label) {
    case BasinLabel::ER1: return "ER1";
    case BasinLabel::ER2: return "ER2";
    case BasinLabel::PSEUDO: return "PSEUDO";
    case BasinLabel::UNDETERMINED: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

BasinLabel basin_label_from_string(std::string_view text) {
  for (BasinLabel l : {BasinLabel::ER1, BasinLabel::ER2, BasinLabel::PSEUDO, BasinLabel::UNDETERMINED}) {
    if (to_string(l) == text) return l;
  }
  throw ParamError("unknown basin label '" + std::string(text) + "'");
}

RegionGrid scan_sp_plane(const ModelParams& base, Range s_range, Range p_range, Resolution res) {
  require_range(s_range, "S");
  require_range(p_range, "p");
  require_resolution(res);
  RegionGrid grid;
  grid.x_axis = {"S", s_range.min, s_range.max, res.nx};
  grid.y_axis = {"p", p_range.min, p_range.max, res.ny};
  grid.base = base.values();
  grid.cells.resize(res.nx * res.ny);

  detail::parallel_for(res.ny, [&](std::size_t iy) {
    const double p = grid.y_axis.value(iy);
    std::vector<EquilibriumRecord> nh;
    std::vector<EquilibriumRecord> hv;
    std::optional<ModelParams> row;
    try {
      row.emplace(base.with_p(p));
      // interior equilibria do not depend on S: one solve per row
      nh = interior_equilibria(*row, PsiMode::NonHarvest).equilibria;
      hv = interior_equilibria(*row, PsiMode::Harvest).equilibria;
    } catch (const Error&) {
      for (std::size_t ix = 0; ix < res.nx; ++ix) grid.cells[grid.index(ix, iy)].undetermined = true;
      return;
    }
    for (std::size_t ix = 0; ix < res.nx; ++ix) {
      RegionCode& code = grid.cells[grid.index(ix, iy)];
      try {
        const ModelParams cell = row->with_S(grid.x_axis.value(ix));
        if (!nh.empty()) {
          code.nh_exists = true;
          code.nh_placement = placement_of(nh.front().location.x, PsiMode::NonHarvest, cell);
          code.nh_stability = nh.front().stability;
        }
        if (!hv.empty()) {
          code.h_exists = true;
          code.h_placement = placement_of(hv.front().location.x, PsiMode::Harvest, cell);
          code.h_stability = hv.front().stability;
        }
        if (const auto pe = pseudo_equilibrium(cell); pe.record) {
          code.pseudo_exists = true;
          code.pseudo_stability = pe.record->stability;
        }
      } catch (const Error&) {
        code = RegionCode{};
        code.undetermined = true;
      }
    }
  });
  return grid;
}

double existence_boundary_p(const ModelParams& base, PsiMode mode, Range bracket, double tol) {
  auto exists = [&](double p) { return !interior_equilibria(base.with_p(p), mode).equilibria.empty(); };
  double lo = bracket.min;
  double hi = bracket.max;
  if (!(lo > 0.0) || !(hi > lo)) throw ParamError("existence_boundary_p: invalid bracket");
  if (!exists(lo) || exists(hi)) {
    std::ostringstream msg;
    msg << "existence_boundary_p: no loss of the " << to_string(mode) << " interior equilibrium across p in ["
        << lo << ", " << hi << "]";
    throw NumericalError(msg.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (exists(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double equilibrium_curve_slope(const ModelParams& P, PsiMode mode, double x) noexcept {
  const double psi = psi_value(mode);
  const double u = P.exposed();
  const double pred_net = P.r2() - psi * P.predator_harvest_rate();
  // a2 and a3 do not involve p
  const double da0 = P.k1() * P.k2() * u * pred_net;
  const double da1 = P.k1() * P.k2() * u * u * (P.b() * pred_net + 2.0 * P.e() * P.p());
  const double dpoly_dx = cubic_coefficients(P, mode).derivative(x);
  return -(da0 + da1 * x) / dpoly_dx;
}

std::vector<CurvePoint> equilibrium_curve(const ModelParams& base, PsiMode mode, Range p_range,
                                          std::size_t samples) {
  require_range(p_range, "p");
  if (samples < 2) throw ParamError("equilibrium_curve needs at least two samples");
  std::vector<CurvePoint> out;
  out.reserve(samples);
  double prev_slope = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CurvePoint pt;
    pt.p = p_range.min + (p_range.max - p_range.min) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const ModelParams P = base.with_p(pt.p);
    const auto eqs = interior_equilibria(P, mode).equilibria;
    double slope = 0.0;
    if (!eqs.empty()) {
      pt.exists = true;
      pt.x = eqs.front().location.x;
      pt.y = eqs.front().location.y;
      slope = equilibrium_curve_slope(P, mode, pt.x);
      if (!out.empty() && out.back().exists) {
        const double dp = pt.p - out.back().p;
        const double bound = 2.0 * std::max(std::abs(slope), std::abs(prev_slope)) * dp + 1e-12;
        pt.jump = std::abs(pt.x - out.back().x) > bound;
      }
    }
    prev_slope = slope;
    out.push_back(pt);
  }
  return out;
}

std::vector<BoundaryBifurcation> locate_boundary_bifurcations(const ModelParams& base, Range s_range,
                                                              double tol) {
  require_range(s_range, "S");
  std::vector<BoundaryBifurcation> out;
  for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
    const auto at_min = interior_equilibria(base.with_S(s_range.min), mode).equilibria;
    for (const auto& seed : at_min) {
      // x*(S) - S, tracking the root nearest the seed
      auto gap = [&](double S) {
        const auto eqs = interior_equilibria(base.with_S(S), mode).equilibria;
        double best = seed.location.x;
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& e : eqs) {
          if (std::abs(e.location.x - seed.location.x) < dist) {
            dist = std::abs(e.location.x - seed.location.x);
            best = e.location.x;
          }
        }
        return best - S;
      };
      double lo = s_range.min;
      double hi = s_range.max;
      if (!(gap(lo) > 0.0 && gap(hi) < 0.0)) continue;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
      }
      BoundaryBifurcation bif;
      bif.S = 0.5 * (lo + hi);
      bif.mode = mode;
      const State at{seed.location.x, predator_on_nullcline(seed.location.x, base, mode)};
      bif.y = at.y;
      bif.eigenvalues = eigenvalues(field_jacobian(at, base, mode));
      bif.observed_type = observed_type(bif.eigenvalues);
      out.push_back(bif);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.S < b.S; });
  return out;
}

BasinGrid compute_basins(const ModelParams& base, Range x_range, Range y_range, Resolution res,
                         const SimOptions& sim) {
  require_resolution(res);
  if (!(x_range.max > x_range.min) || x_range.min < 0.0 || !(y_range.max > y_range.min) || y_range.min < 0.0) {
    throw ParamError("basin ranges must be nonnegative with min < max");
  }
  sim.validate();
  BasinGrid grid;
  grid.x_axis = {"x", x_range.min, x_range.max, res.nx};
  grid.y_axis = {"y", y_range.min, y_range.max, res.ny};
  grid.base = base.values();
  grid.cells.assign(res.nx * res.ny, BasinLabel::UNDETERMINED);

  detail::parallel_for(grid.cells.size(), [&](std::size_t i) {
    const State start{grid.x_axis.value(i % res.nx), grid.y_axis.value(i / res.nx)};
    try {
      const Trajectory traj = simulate(start, base, sim);
      if (traj.attractor) grid.cells[i] = label_for(*traj.attractor);
    } catch (const Error&) {
      grid.cells[i] = BasinLabel::UNDETERMINED;
    }
  });

  const auto undetermined = std::count(grid.cells.begin(), grid.cells.end(), BasinLabel::UNDETERMINED);
  const double frac = static_cast<double>(undetermined) / static_cast<double>(grid.cells.size());
  if (frac > 0.01) {
    std::ostringstream msg;
    msg << 100.0 * frac << "% of cells are UNDETERMINED; consider a larger t_end";
    grid.warnings.push_back(msg.str());
  }
  return grid;
}

double both_exist_fraction(const RegionGrid& grid) noexcept {
  if (grid.cells.empty()) return 0.0;
  const auto n = std::count_if(grid.cells.begin(), grid.cells.end(),
                               [](const RegionCode& c) { return !c.undetermined && c.nh_exists && c.h_exists; });
  return static_cast<double>(n) / static_cast<double>(grid.cells.size());
}

std::vector<MSweepEntry> scan_m_sweep(const ModelParams& base, const std::vector<double>& m_values, Range s_range,
                                      Range p_range, Resolution res) {
  std::vector<MSweepEntry> out;
  out.reserve(m_values.size());
  for (double m : m_values) {
    if (!(m > 0.0 && m < 1.0)) throw ParamError("refuge values must lie in (0, 1)");
    MSweepEntry entry;
    entry.m = m;
    entry.grid = scan_sp_plane(base.with_m(m), s_range, p_range, res);
    entry.both_exist_fraction = both_exist_fraction(entry.grid);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace filippov
