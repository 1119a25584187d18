#pragma once

// Dormand-Prince 5(4) embedded pair for small autonomous systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace filippov::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct DopriStep {
  Vec<N> y{};
  Vec<N> k_end{};    // f(y), reusable as the first stage of the next step
  double error = 0;  // weighted RMS error, accept when <= 1
};

template <std::size_t N, class Rhs>
DopriStep<N> dopri_step(const Rhs& f, const Vec<N>& y0, const Vec<N>& k1, double h, double rtol,
                        double atol) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                   b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  Vec<N> tmp{};
  auto stage = [&](auto&& combine) {
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y0[i] + h * combine(i);
    return f(tmp);
  };
  const Vec<N> k2 = stage([&](std::size_t i) { return a21 * k1[i]; });
  const Vec<N> k3 = stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
  const Vec<N> k4 = stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
  const Vec<N> k5 =
      stage([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
  const Vec<N> k6 = stage(
      [&](std::size_t i) { return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]; });

  DopriStep<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out.y[i] = y0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  }
  out.k_end = f(out.y);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double err =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.k_end[i]);
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(out.y[i]));
    acc += (err / scale) * (err / scale);
  }
  out.error = std::sqrt(acc / static_cast<double>(N));
  return out;
}

/// Step-size factor from the error of the last attempt.
inline double step_factor(double error, bool accepted) {
  if (error == 0.0) return accepted ? 5.0 : 0.2;
  const double f = 0.9 * std::pow(error, -0.2);
  return accepted ? std::clamp(f, 0.2, 5.0) : std::clamp(f, 0.2, 1.0);
}

}  // namespace filippov::detail
