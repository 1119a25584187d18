#pragma once

#include <optional>

#include "filippov/model.hpp"

namespace filippov {

/// Predator densities delimiting the sliding segment on x = S.
struct SlidingBounds {
  double y_lower = 0.0;
  double y_upper = 0.0;

  /// No sliding motion is possible when the upper bound is not above max(0, y_lower).
  bool empty() const noexcept;
  bool contains(double y) const noexcept { return y >= y_lower && y <= y_upper; }
};

enum class ManifoldRegime { Crossing, AttractingSliding, EscapingSliding, Tangency1, Tangency2 };

std::string_view to_string(ManifoldRegime regime) noexcept;

/// Normal components of both fields at (S, y).
struct SigmaPair {
  double sigma1 = 0.0;  // dx/dt under the non-harvest field
  double sigma2 = 0.0;  // dx/dt under the harvest field, sigma1 - q1*E*S
};

inline constexpr double kManifoldTol = 1e-12;

SigmaPair sigma_pair(double y, const ModelParams& params);

/// Throws DomainError when require_nonempty is set and the segment is empty.
SlidingBounds sliding_bounds(const ModelParams& params, bool require_nonempty = false);

ManifoldRegime classify_manifold_point(double y, const ModelParams& params);

/// Weight of the non-harvest field in the Filippov convex combination.
/// Affine in y: 0 at y_lower, 1 at y_upper. Throws DomainError outside [y_lower, y_upper].
double filippov_lambda(double y, const ModelParams& params);

/// lambda*F1 + (1 - lambda)*F2 at (S, y); the x-component vanishes on the segment.
Velocity filippov_velocity(double y, const ModelParams& params);

/// dy/dt of the sliding mode at (S, y), from the equivalent control.
/// Throws DomainError outside the closed sliding segment.
double sliding_flow(double y, const ModelParams& params);

/// Analytic d(phi)/dy.
double sliding_flow_slope(double y, const ModelParams& params) noexcept;

struct PseudoEquilibrium {
  double y_candidate = 0.0;                // closed-form y1, always filled
  std::optional<EquilibriumRecord> record;  // present iff y_lower < y1 < y_upper
  bool exists() const noexcept { return record.has_value(); }
};

/// Closed-form pseudo-equilibrium (S, y1). Throws NumericalError on a degenerate denominator.
PseudoEquilibrium pseudo_equilibrium(const ModelParams& params);

struct PseudoStabilityReport {
  Stability verdict = Stability::Inconclusive;
  double slope = 0.0;     // analytic phi'(y1)
  double slope_fd = 0.0;  // central finite difference
};

/// Sign of phi'(y1). Throws DomainError if no pseudo-equilibrium exists and
/// NumericalError if the analytic and finite-difference slopes disagree.
PseudoStabilityReport pseudo_stability(const ModelParams& params);

namespace detail {

/// Sliding flow without the segment check; phi(y) = y * (A + B*y).
double sliding_flow_unchecked(double y, const ModelParams& params) noexcept;
double lambda_unchecked(double y, const ModelParams& params) noexcept;

}  // namespace detail

}  // namespace filippov
