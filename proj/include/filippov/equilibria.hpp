#pragma once

#include <string>
#include <vector>

#include "filippov/model.hpp"
#include "filippov/sliding.hpp"

namespace filippov {

/// a3*x^3 + a2*x^2 + a1*x + a0 whose positive roots are interior prey equilibria.
struct CubicCoeffs {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double operator()(double x) const noexcept { return ((a3 * x + a2) * x + a1) * x + a0; }
  double derivative(double x) const noexcept { return (3.0 * a3 * x + 2.0 * a2) * x + a1; }
};

CubicCoeffs cubic_coefficients(const ModelParams& params, PsiMode mode) noexcept;

/// All distinct real roots, ascending. Closed form (trigonometric or Cardano)
/// followed by Newton polishing against the unnormalized coefficients.
std::vector<double> real_cubic_roots(const CubicCoeffs& c);

/// Real roots strictly greater than zero.
std::vector<double> positive_cubic_roots(const CubicCoeffs& c);

/// Descartes sign patterns that certify exactly one positive root.
bool descartes_unique(const CubicCoeffs& c) noexcept;

/// Predator density paired with prey density x on the prey nullcline.
double predator_on_nullcline(double x, const ModelParams& params, PsiMode mode) noexcept;

struct InteriorSolution {
  std::vector<EquilibriumRecord> equilibria;
  bool uniqueness_certified = false;
  std::vector<std::string> diagnostics;  // discarded roots and why
};

/// Interior equilibria of one subsystem, placed relative to S and with Jacobian stability.
InteriorSolution interior_equilibria(const ModelParams& params, PsiMode mode);

/// Analytic Jacobian at an equilibrium. Throws DomainError when the field
/// residual at `eq` exceeds 1e-9.
Matrix2 jacobian(const State& eq, const ModelParams& params, PsiMode mode);

/// r1/k1 > b p (1-m)^2 y* / (1 + b(1-m)x*)^2, sufficient for local stability.
bool local_stability_condition(const State& eq, const ModelParams& params) noexcept;

/// r1/k1 > b p (1-m)^2 y* / (1 + b(1-m)x*), sufficient for global stability.
bool global_stability_condition(const State& eq, const ModelParams& params) noexcept;

/// Sets placement from the field and the sign of x* - S.
EquilibriumRecord classify_equilibrium(EquilibriumRecord eq, const ModelParams& params);

/// Boundary equilibria (S, y_upper) of the non-harvest field and (S, y_lower)
/// of the harvest field, when the corresponding scalar condition holds within tol.
std::vector<EquilibriumRecord> boundary_equilibria(const ModelParams& params, double tol = 1e-8);

enum class Visibility { Visible, Invisible };

std::string_view to_string(Visibility v) noexcept;

struct TangentPointRecord {
  State location;
  PsiMode field = PsiMode::NonHarvest;
  Visibility visibility = Visibility::Invisible;
  double x_second_derivative = 0.0;
};

/// Tangent points (S, y_upper) for the non-harvest field and (S, y_lower) for
/// the harvest field, with visibility from the sign of d2x/dt2.
/// Points with nonpositive predator density are omitted. Requires S < k1.
std::vector<TangentPointRecord> tangent_points(const ModelParams& params);

/// Every stationary point relevant to the Filippov dynamics: regular trivial,
/// semi-trivial and interior equilibria, boundary equilibria and the pseudo-equilibrium.
std::vector<EquilibriumRecord> filippov_equilibria(const ModelParams& params);

/// All equilibria of both fields (regular and virtual) plus pseudo and boundary ones.
std::vector<EquilibriumRecord> all_equilibria(const ModelParams& params);

}  // namespace filippov
