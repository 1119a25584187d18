#include "filippov/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filippov/errors.hpp"

namespace filippov {

Velocity eval_field(const State& state, const ModelParams& params, PsiMode mode) {
  if (!(state.x >= 0.0) || !(state.y >= 0.0) || !std::isfinite(state.x) || !std::isfinite(state.y)) {
    std::ostringstream msg;
    msg << "state must be finite and nonnegative, got (" << state.x << ", " << state.y << ")";
    throw DomainError(msg.str());
  }
  return detail::field_unchecked(state.x, state.y, params, psi_value(mode));
}

double switching_value(const State& state, const ModelParams& params) noexcept {
  return state.x - params.S();
}

Matrix2 field_jacobian(const State& s, const ModelParams& P, PsiMode mode) noexcept {
  const double psi = psi_value(mode);
  const double u = P.exposed();
  const double d = 1.0 + P.b() * u * s.x;
  const double pu = P.p() * u;
  Matrix2 j{};
  j[0][0] = P.r1() * (1.0 - 2.0 * s.x / P.k1()) - pu * s.y / (d * d) - psi * P.prey_harvest_rate();
  j[0][1] = -pu * s.x / d;
  j[1][0] = P.e() * pu * s.y / (d * d);
  j[1][1] = P.r2() * (1.0 - 2.0 * s.y / P.k2()) + P.e() * pu * s.x / d - psi * P.predator_harvest_rate();
  return j;
}

std::array<std::complex<double>, 2> eigenvalues(const Matrix2& j) noexcept {
  const double tr = j[0][0] + j[1][1];
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const double half = 0.5 * tr;
  const double skew = 0.5 * (j[0][0] - j[1][1]);
  // same as half^2 - det, but exact for triangular matrices
  const double disc = skew * skew + j[0][1] * j[1][0];
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // avoid cancellation in the smaller-magnitude root
    const double big = half + std::copysign(root, half);
    double l1 = big;
    double l2 = big != 0.0 ? det / big : half - root;
    if (l1 > l2) std::swap(l1, l2);
    return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, -im), std::complex<double>(half, im)};
}

Stability stability_from_eigenvalues(const std::array<std::complex<double>, 2>& ev, double tol) noexcept {
  const double hi = std::max(ev[0].real(), ev[1].real());
  if (hi < -tol) return Stability::Stable;
  if (hi > tol) return Stability::Unstable;
  return Stability::Inconclusive;
}

Placement placement_of(double x, PsiMode mode, const ModelParams& params, double boundary_tol) noexcept {
  const double s = x - params.S();
  if (std::abs(s) < boundary_tol) return Placement::OnBoundary;
  const bool below = s < 0.0;
  if (mode == PsiMode::NonHarvest) return below ? Placement::Regular : Placement::Virtual;
  return below ? Placement::Virtual : Placement::Regular;
}

std::vector<EquilibriumRecord> semi_trivial_equilibria(const ModelParams& P, PsiMode mode) {
  const double psi = psi_value(mode);
  std::vector<EquilibriumRecord> out;
  auto push = [&](State at, EquilibriumKind kind) {
    EquilibriumRecord rec;
    rec.location = at;
    rec.field = field_of(mode);
    rec.kind = kind;
    rec.placement = placement_of(at.x, mode, P);
    const auto ev = eigenvalues(field_jacobian(at, P, mode));
    rec.eigenvalues.assign(ev.begin(), ev.end());
    rec.stability = stability_from_eigenvalues(ev);
    out.push_back(std::move(rec));
  };
  push({0.0, 0.0}, EquilibriumKind::Trivial);
  const double prey_net = P.r1() - psi * P.prey_harvest_rate();
  if (prey_net > 0.0) push({P.k1() * (1.0 - psi * P.prey_harvest_rate() / P.r1()), 0.0}, EquilibriumKind::SemiTrivial);
  const double pred_net = P.r2() - psi * P.predator_harvest_rate();
  if (pred_net > 0.0) push({0.0, P.k2() * (1.0 - psi * P.predator_harvest_rate() / P.r2())}, EquilibriumKind::SemiTrivial);
  return out;
}

}  // namespace filippov
