#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace filippov {

/// Prey/predator densities.
struct State {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

/// Time derivative of a State.
struct Velocity {
  double dx_dt = 0.0;
  double dy_dt = 0.0;
};

/// Value of the harvesting switch: psi = 0 below the threshold, psi = 1 above.
enum class PsiMode { NonHarvest = 0, Harvest = 1 };

constexpr double psi_value(PsiMode mode) noexcept { return mode == PsiMode::Harvest ? 1.0 : 0.0; }

/// Which vector field an equilibrium belongs to; Sliding for the flow on the manifold.
enum class FieldTag { NonHarvest, Harvest, Sliding };

constexpr FieldTag field_of(PsiMode mode) noexcept {
  return mode == PsiMode::Harvest ? FieldTag::Harvest : FieldTag::NonHarvest;
}

enum class EquilibriumKind { Trivial, SemiTrivial, Interior, Pseudo, Boundary };

enum class Placement { Regular, Virtual, OnBoundary, NotApplicable };

enum class Stability { Stable, Unstable, Inconclusive };

struct EquilibriumRecord {
  State location;
  FieldTag field = FieldTag::NonHarvest;
  EquilibriumKind kind = EquilibriumKind::Interior;
  Placement placement = Placement::NotApplicable;
  Stability stability = Stability::Inconclusive;
  // Two Jacobian eigenvalues for equilibria of a smooth field; one entry
  // (the slope of the sliding flow) for a pseudo-equilibrium.
  std::vector<std::complex<double>> eigenvalues;
};

std::string_view to_string(PsiMode mode) noexcept;
std::string_view to_string(FieldTag field) noexcept;
std::string_view to_string(EquilibriumKind kind) noexcept;
std::string_view to_string(Placement placement) noexcept;
std::string_view to_string(Stability stability) noexcept;

}  // namespace filippov
