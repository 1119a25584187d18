#include "filippov/sliding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filippov/errors.hpp"

namespace filippov {
namespace {

// 1 + b(1-m)S, the handling-time denominator on the manifold
double manifold_denominator(const ModelParams& P) noexcept {
  return 1.0 + P.b() * P.exposed() * P.S();
}

void require_on_segment(double y, const ModelParams& P, const char* what) {
  const SlidingBounds sb = sliding_bounds(P);
  if (!(y >= sb.y_lower && y <= sb.y_upper)) {
    std::ostringstream msg;
    msg << what << ": y = " << y << " outside the sliding segment [" << sb.y_lower << ", "
        << sb.y_upper << "]";
    throw DomainError(msg.str());
  }
}

// phi(y) = y * (A + B*y)
struct SlidingCoeffs {
  double A = 0.0;
  double B = 0.0;
};

SlidingCoeffs sliding_coeffs(const ModelParams& P) noexcept {
  const double c = manifold_denominator(P);
  const double pu = P.p() * P.exposed();
  const double ratio = P.q2() / P.q1();
  return {P.r2() + P.e() * pu * P.S() / c - ratio * P.r1() * (1.0 - P.S() / P.k1()),
          -P.r2() / P.k2() + ratio * pu / c};
}

}  // namespace

bool SlidingBounds::empty() const noexcept { return !(y_upper > std::max(0.0, y_lower)); }

std::string_view to_string(ManifoldRegime regime) noexcept {
  switch (regime) {
    case ManifoldRegime::Crossing: return "Crossing";
    case ManifoldRegime::AttractingSliding: return "AttractingSliding";
    case ManifoldRegime::EscapingSliding: return "EscapingSliding";
    case ManifoldRegime::Tangency1: return "Tangency1";
    case ManifoldRegime::Tangency2: return "Tangency2";
  }
  return "?";
}

SigmaPair sigma_pair(double y, const ModelParams& P) {
  const double S = P.S();
  const double sigma1 = P.r1() * S * (1.0 - S / P.k1()) -
                        P.p() * P.exposed() * S * y / manifold_denominator(P);
  return {sigma1, sigma1 - P.prey_harvest_rate() * S};
}

SlidingBounds sliding_bounds(const ModelParams& P, bool require_nonempty) {
  const double scale = manifold_denominator(P) / (P.k1() * P.p() * P.exposed());
  const double growth = P.r1() * (P.k1() - P.S());
  SlidingBounds sb{(growth - P.prey_harvest_rate() * P.k1()) * scale, growth * scale};
  if (require_nonempty && sb.empty()) {
    std::ostringstream msg;
    msg << "empty sliding segment (S = " << P.S() << ", k1 = " << P.k1() << ")";
    throw DomainError(msg.str());
  }
  return sb;
}

ManifoldRegime classify_manifold_point(double y, const ModelParams& P) {
  const auto [s1, s2] = sigma_pair(y, P);
  if (std::abs(s1) < kManifoldTol) return ManifoldRegime::Tangency1;
  if (std::abs(s2) < kManifoldTol) return ManifoldRegime::Tangency2;
  if (s1 * s2 > 0.0) return ManifoldRegime::Crossing;
  if (s1 > 0.0) return ManifoldRegime::AttractingSliding;
  return ManifoldRegime::EscapingSliding;
}

double detail::lambda_unchecked(double y, const ModelParams& P) noexcept {
  // sigma2 / (sigma2 - sigma1) rewritten with sigma2 = -(p(1-m)S/c)(y - y_lower)
  // and sigma2 - sigma1 = -q1 E S, which is exact at both ends of the segment.
  const SlidingBounds sb = sliding_bounds(P);
  return (y - sb.y_lower) / (sb.y_upper - sb.y_lower);
}

double filippov_lambda(double y, const ModelParams& P) {
  require_on_segment(y, P, "filippov_lambda");
  return detail::lambda_unchecked(y, P);
}

Velocity filippov_velocity(double y, const ModelParams& P) {
  const double lambda = filippov_lambda(y, P);
  const Velocity f1 = detail::field_unchecked(P.S(), y, P, 0.0);
  const Velocity f2 = detail::field_unchecked(P.S(), y, P, 1.0);
  return {lambda * f1.dx_dt + (1.0 - lambda) * f2.dx_dt, lambda * f1.dy_dt + (1.0 - lambda) * f2.dy_dt};
}

double detail::sliding_flow_unchecked(double y, const ModelParams& P) noexcept {
  const auto [A, B] = sliding_coeffs(P);
  return y * (A + B * y);
}

double sliding_flow(double y, const ModelParams& P) {
  require_on_segment(y, P, "sliding_flow");
  return detail::sliding_flow_unchecked(y, P);
}

double sliding_flow_slope(double y, const ModelParams& P) noexcept {
  const auto [A, B] = sliding_coeffs(P);
  return A + 2.0 * B * y;
}

PseudoEquilibrium pseudo_equilibrium(const ModelParams& P) {
  const double c = manifold_denominator(P);
  const double u = P.exposed();
  const double S = P.S();
  const double k1 = P.k1();
  const double k2 = P.k2();
  const double den = P.q2() * k1 * k2 * P.p() * u - P.q1() * k1 * P.r2() * c;
  if (std::abs(den) < 1e-12) {
    std::ostringstream msg;
    msg << "pseudo-equilibrium denominator degenerate (" << den << ")";
    throw NumericalError(msg.str());
  }
  const double num = P.q2() * k2 * P.r1() * (k1 - S) * c -
                     P.q1() * k1 * k2 * (P.r2() + (P.r2() * P.b() + P.e() * P.p()) * u * S);
  PseudoEquilibrium out;
  out.y_candidate = num / den;
  const SlidingBounds sb = sliding_bounds(P);
  const double y1 = out.y_candidate;
  if (y1 > 0.0 && y1 > sb.y_lower && y1 < sb.y_upper) {
    EquilibriumRecord rec;
    rec.location = {S, y1};
    rec.field = FieldTag::Sliding;
    rec.kind = EquilibriumKind::Pseudo;
    rec.placement = Placement::NotApplicable;
    const double slope = sliding_flow_slope(y1, P);
    rec.eigenvalues = {std::complex<double>(slope, 0.0)};
    rec.stability = std::abs(slope) < 1e-8 ? Stability::Inconclusive
                    : slope < 0.0         ? Stability::Stable
                                          : Stability::Unstable;
    out.record = std::move(rec);
  }
  return out;
}

PseudoStabilityReport pseudo_stability(const ModelParams& P) {
  const PseudoEquilibrium pe = pseudo_equilibrium(P);
  if (!pe.exists()) {
    std::ostringstream msg;
    msg << "no pseudo-equilibrium: y1 = " << pe.y_candidate << " lies outside the sliding segment";
    throw DomainError(msg.str());
  }
  const double y1 = pe.y_candidate;
  PseudoStabilityReport rep;
  rep.slope = sliding_flow_slope(y1, P);
  const double h = 1e-6 * std::max(1.0, y1);
  rep.slope_fd = (detail::sliding_flow_unchecked(y1 + h, P) - detail::sliding_flow_unchecked(y1 - h, P)) /
                 (2.0 * h);
  if (std::abs(rep.slope - rep.slope_fd) > 1e-5 * std::max(1.0, std::abs(rep.slope))) {
    std::ostringstream msg;
    msg << "sliding-flow slope mismatch: analytic " << rep.slope << ", finite difference " << rep.slope_fd;
    throw NumericalError(msg.str());
  }
  if (std::abs(rep.slope) < 1e-8) {
    rep.verdict = Stability::Inconclusive;
  } else {
    rep.verdict = rep.slope < 0.0 ? Stability::Stable : Stability::Unstable;
  }
  return rep;
}

}  // namespace filippov
