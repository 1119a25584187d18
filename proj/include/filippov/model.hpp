#pragma once

#include <array>
#include <vector>

#include "filippov/params.hpp"
#include "filippov/types.hpp"

namespace filippov {

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Vector field of the non-harvest (psi = 0) or harvest (psi = 1) subsystem.
/// Throws DomainError for negative or non-finite state components.
Velocity eval_field(const State& state, const ModelParams& params, PsiMode mode);

/// x - S: negative in the non-harvest region, positive in the harvest region.
double switching_value(const State& state, const ModelParams& params) noexcept;

/// Analytic Jacobian of the field (defined for any nonnegative state).
Matrix2 field_jacobian(const State& state, const ModelParams& params, PsiMode mode) noexcept;

/// Trivial equilibrium plus the axial equilibria that have positive coordinates.
std::vector<EquilibriumRecord> semi_trivial_equilibria(const ModelParams& params, PsiMode mode);

/// Eigenvalues of a real 2x2 matrix, ordered by real part then imaginary part.
std::array<std::complex<double>, 2> eigenvalues(const Matrix2& j) noexcept;

/// Stable iff every real part < -tol, Unstable if any > tol, else Inconclusive.
Stability stability_from_eigenvalues(const std::array<std::complex<double>, 2>& ev,
                                     double tol = 1e-8) noexcept;

/// Regular/virtual/on-boundary placement of a stationary point of one field.
Placement placement_of(double x, PsiMode mode, const ModelParams& params,
                       double boundary_tol = 1e-9) noexcept;

namespace detail {

/// Field evaluation without domain checks; used in integrator stages.
inline Velocity field_unchecked(double x, double y, const ModelParams& P, double psi) noexcept {
  const double u = P.exposed();
  const double predation = P.p() * u * x * y / (1.0 + P.b() * u * x);
  return {P.r1() * x * (1.0 - x / P.k1()) - predation - psi * P.prey_harvest_rate() * x,
          P.r2() * y * (1.0 - y / P.k2()) + P.e() * predation - psi * P.predator_harvest_rate() * y};
}

}  // namespace detail

}  // namespace filippov
