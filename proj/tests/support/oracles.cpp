#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

double cubic(double x, double a0, double a1, double a2, double a3) { return ((a3 * x + a2) * x + a1) * x + a0; }

double bisect(double lo, double hi, double flo, double a0, double a1, double a2, double a3) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = cubic(mid, a0, a1, a2, a3);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> cubic_roots_by_bisection(double a0, double a1, double a2, double a3, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  // critical points: 3 a3 x^2 + 2 a2 x + a1 = 0
  const double A = 3.0 * a3, B = 2.0 * a2, C = a1;
  if (A != 0.0) {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      cuts.push_back((-B - sq) / (2.0 * A));
      cuts.push_back((-B + sq) / (2.0 * A));
    }
  } else if (B != 0.0) {
    cuts.push_back(-C / B);
  }
  std::erase_if(cuts, [&](double c) { return !(c >= lo && c <= hi); });
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], h = cuts[i + 1];
    const double fl = cubic(l, a0, a1, a2, a3), fh = cubic(h, a0, a1, a2, a3);
    if (fl == 0.0 && l > lo) {
      roots.push_back(l);
    } else if ((fl < 0.0) != (fh < 0.0) && fh != 0.0) {
      roots.push_back(bisect(l, h, fl, a0, a1, a2, a3));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::array<double, 4> cubic_from_nullclines(const ModelParams& P, PsiMode mode) {
  // prey nullcline: y = R (1 - x/K)(1 + c x) / a with R = r1 - psi q1 E,
  // K = k1 R / r1, a = p u, c = b u. Substituting into the predator equation
  // divided by y and multiplying by k2 (1 + c x) gives a cubic in x.
  const double psi = mode == PsiMode::Harvest ? 1.0 : 0.0;
  const double u = 1.0 - P.m();
  const double a = P.p() * u, c = P.b() * u;
  const double R1 = P.r1() - psi * P.q1() * P.E();
  const double R2 = P.r2() - psi * P.q2() * P.E();
  // y(x) = (R1 - r1 x / k1)(1 + c x) / a = (y0 + y1 x + y2 x^2)
  const double y0 = R1 / a;
  const double y1 = (R1 * c - P.r1() / P.k1()) / a;
  const double y2 = -P.r1() * c / (P.k1() * a);
  // predator: R2 (1 + c x) - (r2/k2) y (1 + c x) + e a x = 0, times k2
  const double g = P.r2();
  const double k2 = P.k2();
  // (1 + c x) * y(x) = y0 + (y1 + c y0) x + (y2 + c y1) x^2 + c y2 x^3
  const double w0 = y0, w1 = y1 + c * y0, w2 = y2 + c * y1, w3 = c * y2;
  const double b0 = k2 * R2 - g * w0;
  const double b1 = k2 * R2 * c + k2 * P.e() * a - g * w1;
  const double b2 = -g * w2;
  const double b3 = -g * w3;
  // scaled by k1 a so that the constant term is k1 k2 p u R2 - k1 r2 R1
  const double s = P.k1() * a;
  return {b0 * s, b1 * s, b2 * s, b3 * s};
}

double nullcline_y(double x, const ModelParams& P, PsiMode mode) {
  const double psi = mode == PsiMode::Harvest ? 1.0 : 0.0;
  const double u = 1.0 - P.m();
  return (P.r1() - psi * P.q1() * P.E() - P.r1() * x / P.k1()) * (1.0 + P.b() * u * x) / (P.p() * u);
}

std::array<std::array<double, 2>, 2> fd_jacobian(const State& s, const ModelParams& P, PsiMode mode) {
  std::array<std::array<double, 2>, 2> J{};
  for (int col = 0; col < 2; ++col) {
    const double base = col == 0 ? s.x : s.y;
    const double h = 1e-3 * std::max(1e-2, std::abs(base));
    auto diff = [&](double step) {
      State a = s, b = s;
      (col == 0 ? a.x : a.y) += step;
      (col == 0 ? b.x : b.y) -= step;
      const auto fa = filippov::eval_field(a, P, mode);
      const auto fb = filippov::eval_field(b, P, mode);
      return std::array<double, 2>{(fa.dx_dt - fb.dx_dt) / (2 * step), (fa.dy_dt - fb.dy_dt) / (2 * step)};
    };
    const auto d1 = diff(h);
    const auto d2 = diff(h / 2);
    for (int row = 0; row < 2; ++row) J[row][col] = (4.0 * d2[row] - d1[row]) / 3.0;
  }
  return J;
}

double lambda_from_fields(double y, const ModelParams& P) {
  const auto f1 = filippov::eval_field({P.S(), y}, P, PsiMode::NonHarvest);
  const auto f2 = filippov::eval_field({P.S(), y}, P, PsiMode::Harvest);
  return f2.dx_dt / (f2.dx_dt - f1.dx_dt);
}

double convex_dy(double y, const ModelParams& P) {
  const double l = lambda_from_fields(y, P);
  const auto f1 = filippov::eval_field({P.S(), y}, P, PsiMode::NonHarvest);
  const auto f2 = filippov::eval_field({P.S(), y}, P, PsiMode::Harvest);
  return l * f1.dy_dt + (1.0 - l) * f2.dy_dt;
}

std::array<double, 2> sliding_bounds_closed_form(const ModelParams& P) {
  const double u = 1.0 - P.m();
  const double c = 1.0 + P.b() * u * P.S();
  const double denom = P.k1() * P.p() * u;
  return {(P.r1() * (P.k1() - P.S()) - P.q1() * P.E() * P.k1()) * c / denom, P.r1() * (P.k1() - P.S()) * c / denom};
}

std::optional<double> sliding_root(const ModelParams& P, double lo, double hi) {
  double flo = convex_dy(lo, P), fhi = convex_dy(hi, P);
  if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = convex_dy(mid, P);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

State rk4(State s, const ModelParams& P, PsiMode mode, double duration, int steps) {
  const double h = duration / steps;
  auto f = [&](State z) { return filippov::eval_field(z, P, mode); };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(s);
    const auto k2 = f({s.x + 0.5 * h * k1.dx_dt, s.y + 0.5 * h * k1.dy_dt});
    const auto k3 = f({s.x + 0.5 * h * k2.dx_dt, s.y + 0.5 * h * k2.dy_dt});
    const auto k4 = f({s.x + h * k3.dx_dt, s.y + h * k3.dy_dt});
    s.x += h / 6 * (k1.dx_dt + 2 * k2.dx_dt + 2 * k3.dx_dt + k4.dx_dt);
    s.y += h / 6 * (k1.dy_dt + 2 * k2.dy_dt + 2 * k3.dy_dt + k4.dy_dt);
  }
  return s;
}

double existence_boundary_closed_form(const ModelParams& P, PsiMode mode) {
  // At the boundary the interior equilibrium merges with the predator-axis
  // equilibrium (0, k2 R2 / r2); the prey equation at x -> 0 gives
  // R1 = p u y, hence p = R1 r2 / (u k2 R2).
  const double psi = mode == PsiMode::Harvest ? 1.0 : 0.0;
  const double R1 = P.r1() - psi * P.q1() * P.E();
  const double R2 = P.r2() - psi * P.q2() * P.E();
  return R1 * P.r2() / ((1.0 - P.m()) * P.k2() * R2);
}

ModelParams ParamSampler::draw_around(const ModelParams& base) {
  filippov::ParamValues v = base.values();
  for (double* f : {&v.r1, &v.k1, &v.p, &v.b, &v.q1, &v.E, &v.r2, &v.k2, &v.e, &v.q2}) *f *= uniform(0.5, 1.5);
  v.m = uniform(0.05, 0.95);
  v.S = uniform(0.05, 0.95) * v.k1;
  return ModelParams(v);
}

ModelParams ParamSampler::draw() {
  return draw_around(filippov::preset(uniform(0.0, 1.0) < 0.5 ? "A1" : "A2"));
}

ModelParams ParamSampler::draw_near_a2() { return draw_around(filippov::preset("A2")); }

}  // namespace oracle
