#include "filippov/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "filippov/errors.hpp"

namespace filippov {
namespace {

double polish(const CubicCoeffs& c, double x) {
  double fx = c(x);
  for (int it = 0; it < 8 && fx != 0.0; ++it) {
    const double d = c.derivative(x);
    if (d == 0.0) break;
    const double next = x - fx / d;
    const double fn = c(next);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = next;
    fx = fn;
  }
  return x;
}

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q != 0.0) r.push_back(c / q);
  r.push_back(q / a);
  return r;
}

EquilibriumRecord make_field_record(State at, PsiMode mode, EquilibriumKind kind, Placement placement,
                                    const ModelParams& P) {
  EquilibriumRecord rec;
  rec.location = at;
  rec.field = field_of(mode);
  rec.kind = kind;
  rec.placement = placement;
  const auto ev = eigenvalues(field_jacobian(at, P, mode));
  rec.eigenvalues.assign(ev.begin(), ev.end());
  rec.stability = stability_from_eigenvalues(ev);
  return rec;
}

double manifold_denominator(const ModelParams& P) noexcept { return 1.0 + P.b() * P.exposed() * P.S(); }

}  // namespace

CubicCoeffs cubic_coefficients(const ModelParams& P, PsiMode mode) noexcept {
  const double psi = psi_value(mode);
  const double u = P.exposed();
  const double r1 = P.r1();
  const double r2 = P.r2();
  const double k1 = P.k1();
  const double k2 = P.k2();
  const double b = P.b();
  const double prey_net = r1 - psi * P.prey_harvest_rate();
  const double pred_net = r2 - psi * P.predator_harvest_rate();
  CubicCoeffs c;
  c.a0 = k1 * k2 * P.p() * u * pred_net - k1 * r2 * prey_net;
  c.a1 = r1 * r2 - 2.0 * k1 * r2 * prey_net * b * u + k1 * k2 * P.p() * u * u * (b * pred_net + P.e() * P.p());
  c.a2 = 2.0 * r1 * r2 * b * u - k1 * r2 * b * b * u * u * prey_net;
  c.a3 = r1 * r2 * b * b * u * u;
  return c;
}

std::vector<double> real_cubic_roots(const CubicCoeffs& c) {
  std::vector<double> roots;
  if (c.a3 == 0.0) {
    roots = quadratic_roots(c.a2, c.a1, c.a0);
  } else {
    const double a = c.a2 / c.a3;
    const double b = c.a1 / c.a3;
    const double d = c.a0 / c.a3;
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
      const double big = -std::copysign(std::cbrt(0.5 * std::abs(q) + std::sqrt(disc)), q);
      const double t = big + (big != 0.0 ? -p / (3.0 * big) : 0.0);
      roots.push_back(t - shift);
    } else if (p == 0.0) {
      roots.push_back(-shift);
    } else {
      const double r = std::sqrt(-p / 3.0);
      const double arg = std::clamp(1.5 * q / (p * r), -1.0, 1.0);
      const double phi = std::acos(arg);
      for (int k = 0; k < 3; ++k) {
        roots.push_back(2.0 * r * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * k / 3.0) - shift);
      }
    }
  }
  for (double& x : roots) x = polish(c, x);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double l, double r) { return std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(l)); }),
              roots.end());
  return roots;
}

std::vector<double> positive_cubic_roots(const CubicCoeffs& c) {
  std::vector<double> roots = real_cubic_roots(c);
  std::erase_if(roots, [](double x) { return !(x > 0.0); });
  return roots;
}

bool descartes_unique(const CubicCoeffs& c) noexcept {
  // with a3 > 0 and a0 < 0 the only three-change pattern is (+, -, +, -)
  return c.a3 > 0.0 && c.a0 < 0.0 && !(c.a2 < 0.0 && c.a1 > 0.0);
}

double predator_on_nullcline(double x, const ModelParams& P, PsiMode mode) noexcept {
  const double u = P.exposed();
  return (P.r1() - psi_value(mode) * P.prey_harvest_rate() - P.r1() * x / P.k1()) * (1.0 + P.b() * u * x) /
         (P.p() * u);
}

InteriorSolution interior_equilibria(const ModelParams& P, PsiMode mode) {
  InteriorSolution out;
  const CubicCoeffs c = cubic_coefficients(P, mode);
  out.uniqueness_certified = descartes_unique(c);
  for (double x : positive_cubic_roots(c)) {
    const double y = predator_on_nullcline(x, P, mode);
    if (!(y > 0.0)) {
      std::ostringstream msg;
      msg << "root x = " << x << " discarded: predator density " << y << " is not positive";
      out.diagnostics.push_back(msg.str());
      continue;
    }
    out.equilibria.push_back(
        make_field_record({x, y}, mode, EquilibriumKind::Interior, placement_of(x, mode, P), P));
  }
  return out;
}

Matrix2 jacobian(const State& eq, const ModelParams& P, PsiMode mode) {
  const Velocity v = eval_field(eq, P, mode);
  if (std::max(std::abs(v.dx_dt), std::abs(v.dy_dt)) > 1e-9) {
    std::ostringstream msg;
    msg << "(" << eq.x << ", " << eq.y << ") is not an equilibrium of the " << to_string(mode)
        << " field (residual " << v.dx_dt << ", " << v.dy_dt << ")";
    throw DomainError(msg.str());
  }
  return field_jacobian(eq, P, mode);
}

bool local_stability_condition(const State& eq, const ModelParams& P) noexcept {
  const double u = P.exposed();
  const double d = 1.0 + P.b() * u * eq.x;
  return P.r1() / P.k1() > P.b() * P.p() * u * u * eq.y / (d * d);
}

bool global_stability_condition(const State& eq, const ModelParams& P) noexcept {
  const double u = P.exposed();
  const double d = 1.0 + P.b() * u * eq.x;
  return P.r1() / P.k1() > P.b() * P.p() * u * u * eq.y / d;
}

EquilibriumRecord classify_equilibrium(EquilibriumRecord eq, const ModelParams& P) {
  if (eq.field == FieldTag::Sliding) {
    throw DomainError("classify_equilibrium: sliding equilibria have no regular/virtual placement");
  }
  const PsiMode mode = eq.field == FieldTag::Harvest ? PsiMode::Harvest : PsiMode::NonHarvest;
  eq.placement = placement_of(eq.location.x, mode, P);
  return eq;
}

std::vector<EquilibriumRecord> boundary_equilibria(const ModelParams& P, double tol) {
  std::vector<EquilibriumRecord> out;
  const SlidingBounds sb = sliding_bounds(P);
  const double S = P.S();
  const double gain = P.e() * P.p() * P.exposed() * S / manifold_denominator(P);
  const double r2k2 = P.r2() / P.k2();

  auto collides = [&](PsiMode mode) {
    for (const auto& rec : interior_equilibria(P, mode).equilibria) {
      if (std::abs(rec.location.x - S) < 1e-9) return true;
    }
    return false;
  };

  const double cond1 = r2k2 * (P.k2() - sb.y_upper) + gain;
  if (sb.y_upper > 0.0 && (std::abs(cond1) <= tol || collides(PsiMode::NonHarvest))) {
    out.push_back(make_field_record({S, sb.y_upper}, PsiMode::NonHarvest, EquilibriumKind::Boundary,
                                    Placement::OnBoundary, P));
  }
  const double cond2 = r2k2 * (P.k2() - sb.y_lower) + gain - P.predator_harvest_rate();
  if (sb.y_lower > 0.0 && (std::abs(cond2) <= tol || collides(PsiMode::Harvest))) {
    out.push_back(make_field_record({S, sb.y_lower}, PsiMode::Harvest, EquilibriumKind::Boundary,
                                    Placement::OnBoundary, P));
  }
  return out;
}

std::string_view to_string(Visibility v) noexcept { return v == Visibility::Visible ? "Visible" : "Invisible"; }

std::vector<TangentPointRecord> tangent_points(const ModelParams& P) {
  if (!(P.S() < P.k1())) throw DomainError("tangent_points requires S < k1");
  const SlidingBounds sb = sliding_bounds(P);
  std::vector<TangentPointRecord> out;
  auto add = [&](double y, PsiMode mode) {
    if (!(y > 0.0)) return;
    const State at{P.S(), y};
    const double psi = psi_value(mode);
    const Velocity v = detail::field_unchecked(at.x, at.y, P, psi);
    const Matrix2 j = field_jacobian(at, P, mode);
    // d2x/dt2 along the field: (grad f) . F
    const double xdd = j[0][0] * v.dx_dt + j[0][1] * v.dy_dt;
    TangentPointRecord rec;
    rec.location = at;
    rec.field = mode;
    rec.x_second_derivative = xdd;
    // visible when the grazing orbit bends back into the field's own region
    const bool visible = mode == PsiMode::NonHarvest ? xdd < 0.0 : xdd > 0.0;
    rec.visibility = visible ? Visibility::Visible : Visibility::Invisible;
    out.push_back(rec);
  };
  add(sb.y_upper, PsiMode::NonHarvest);
  add(sb.y_lower, PsiMode::Harvest);
  return out;
}

std::vector<EquilibriumRecord> all_equilibria(const ModelParams& P) {
  std::vector<EquilibriumRecord> out;
  for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
    for (auto& rec : semi_trivial_equilibria(P, mode)) out.push_back(std::move(rec));
    for (auto& rec : interior_equilibria(P, mode).equilibria) out.push_back(std::move(rec));
  }
  for (auto& rec : boundary_equilibria(P)) out.push_back(std::move(rec));
  try {
    if (auto pe = pseudo_equilibrium(P); pe.record) out.push_back(std::move(*pe.record));
  } catch (const NumericalError&) {
    // degenerate sliding flow: no isolated pseudo-equilibrium
  }
  return out;
}

std::vector<EquilibriumRecord> filippov_equilibria(const ModelParams& P) {
  std::vector<EquilibriumRecord> out;
  for (auto& rec : all_equilibria(P)) {
    const bool relevant = rec.kind == EquilibriumKind::Pseudo || rec.kind == EquilibriumKind::Boundary ||
                          rec.placement == Placement::Regular;
    if (relevant) out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace filippov
