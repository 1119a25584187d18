#include <doctest.h>

#include <cmath>
#include <limits>

#include "filippov/errors.hpp"
#include "filippov/model.hpp"
#include "oracles.hpp"

using namespace filippov;

TEST_CASE("origin is stationary in both fields") {
  for (const char* name : {"A1", "A2"}) {
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      const Velocity v = eval_field({0.0, 0.0}, preset(name), mode);
      CHECK(v.dx_dt == 0.0);
      CHECK(v.dy_dt == 0.0);
    }
  }
}

TEST_CASE("published interior equilibria are near-stationary") {
  const ModelParams P = preset("A1");
  const Velocity v1 = eval_field({0.4005, 1.6917}, P, PsiMode::NonHarvest);
  CHECK(std::abs(v1.dx_dt) < 1e-3);
  CHECK(std::abs(v1.dy_dt) < 1e-3);
  const Velocity v2 = eval_field({0.1416, 1.3856}, P, PsiMode::Harvest);
  CHECK(std::abs(v2.dx_dt) < 1e-3);
  CHECK(std::abs(v2.dy_dt) < 1e-3);
}

TEST_CASE("field rejects states outside the domain") {
  const ModelParams P = preset("A1");
  CHECK_THROWS_AS(eval_field({-1e-3, 1.0}, P, PsiMode::NonHarvest), DomainError);
  CHECK_THROWS_AS(eval_field({1.0, -1e-3}, P, PsiMode::Harvest), DomainError);
  CHECK_THROWS_AS(eval_field({std::numeric_limits<double>::quiet_NaN(), 1.0}, P, PsiMode::Harvest), DomainError);
}

TEST_CASE("switching value is x - S") {
  CHECK(switching_value({0.25, 7.0}, preset("A1").with_S(0.25)) == 0.0);
  CHECK(switching_value({0.4005, 1.6917}, preset("A1").with_S(0.25)) == doctest::Approx(0.1505).epsilon(1e-12));
  CHECK(switching_value({0.2, 4.0}, preset("A2").with_S(4.0)) == doctest::Approx(-3.8).epsilon(1e-12));
}

TEST_CASE("semi-trivial equilibria without harvesting sit at the carrying capacities") {
  const ModelParams P = preset("A2");
  const auto eqs = semi_trivial_equilibria(P, PsiMode::NonHarvest);
  bool prey_axis = false, predator_axis = false, origin = false;
  for (const auto& r : eqs) {
    if (r.location == State{P.k1(), 0.0}) prey_axis = true;
    if (r.location == State{0.0, P.k2()}) predator_axis = true;
    if (r.location == State{0.0, 0.0}) origin = true;
  }
  CHECK(prey_axis);
  CHECK(predator_axis);
  CHECK(origin);
}

TEST_CASE("semi-trivial equilibria with harvesting for A1") {
  const ModelParams P = preset("A1");
  const auto eqs = semi_trivial_equilibria(P, PsiMode::Harvest);
  REQUIRE(eqs.size() == 3);
  bool prey_axis = false, predator_axis = false;
  for (const auto& r : eqs) {
    if (r.location.y == 0.0 && r.location.x > 0.0) {
      CHECK(r.location.x == doctest::Approx(2.0 * 0.7 / 0.9).epsilon(1e-14));
      CHECK(r.location.x == doctest::Approx(1.5556).epsilon(1e-4));
      prey_axis = true;
    }
    if (r.location.x == 0.0 && r.location.y > 0.0) {
      CHECK(r.location.y == doctest::Approx(1.3125).epsilon(1e-14));
      predator_axis = true;
    }
  }
  CHECK(prey_axis);
  CHECK(predator_axis);
}

TEST_CASE("prey-axis equilibrium is omitted when harvesting outpaces growth") {
  const ModelParams P = preset("A1").with("E", 5.0);  // q1 E = 1 > r1
  for (const auto& r : semi_trivial_equilibria(P, PsiMode::Harvest)) {
    CHECK_FALSE((r.location.y == 0.0 && r.location.x > 0.0));
  }
}

TEST_CASE("semi-trivial equilibria are stationary to 1e-12") {
  oracle::ParamSampler sampler(11);
  for (int i = 0; i < 200; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      for (const auto& r : semi_trivial_equilibria(P, mode)) {
        const Velocity v = eval_field(r.location, P, mode);
        CHECK(std::hypot(v.dx_dt, v.dy_dt) < 1e-12);
      }
    }
  }
}

TEST_CASE("full refuge removes the interaction terms") {
  const ModelParams P = preset("A1").with_m(1.0 - 1e-12);
  const State s{1.3, 0.7};
  for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
    const double psi = mode == PsiMode::Harvest ? 1.0 : 0.0;
    const Velocity v = eval_field(s, P, mode);
    const double fx = P.r1() * s.x * (1 - s.x / P.k1()) - psi * P.q1() * P.E() * s.x;
    const double fy = P.r2() * s.y * (1 - s.y / P.k2()) - psi * P.q2() * P.E() * s.y;
    CHECK(std::abs(v.dx_dt - fx) < 1e-11);
    CHECK(std::abs(v.dy_dt - fy) < 1e-11);
  }
}

TEST_CASE("on the manifold the fields differ by the harvest terms") {
  oracle::ParamSampler sampler(5);
  for (int i = 0; i < 100; ++i) {
    const ModelParams P = sampler.draw();
    const double y = sampler.uniform(0.0, 2.0 * P.k2());
    const Velocity a = eval_field({P.S(), y}, P, PsiMode::NonHarvest);
    const Velocity b = eval_field({P.S(), y}, P, PsiMode::Harvest);
    CHECK((a.dx_dt - b.dx_dt) == doctest::Approx(P.q1() * P.E() * P.S()).epsilon(1e-12));
    CHECK((a.dy_dt - b.dy_dt) == doctest::Approx(P.q2() * P.E() * y).epsilon(1e-12));
  }
}

TEST_CASE("analytic field Jacobian matches finite differences away from equilibria") {
  oracle::ParamSampler sampler(23);
  for (int i = 0; i < 100; ++i) {
    const ModelParams P = sampler.draw();
    const State s{sampler.uniform(0.05, P.k1()), sampler.uniform(0.05, P.k2())};
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      const Matrix2 J = field_jacobian(s, P, mode);
      const auto F = oracle::fd_jacobian(s, P, mode);
      double scale = 0.0, err = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          scale = std::max(scale, std::abs(J[r][c]));
          err = std::max(err, std::abs(J[r][c] - F[r][c]));
        }
      }
      CHECK(err <= 1e-8 * scale);
    }
  }
}

TEST_CASE("eigenvalues of 2x2 matrices") {
  SUBCASE("real distinct") {
    const auto ev = eigenvalues(Matrix2{{{1.0, 2.0}, {0.0, 3.0}}});
    CHECK(ev[0] == std::complex<double>(1.0, 0.0));
    CHECK(ev[1] == std::complex<double>(3.0, 0.0));
  }
  SUBCASE("repeated") {
    const auto ev = eigenvalues(Matrix2{{{0.7, 0.0}, {0.0, 0.7}}});
    CHECK(ev[0] == std::complex<double>(0.7, 0.0));
    CHECK(ev[1] == std::complex<double>(0.7, 0.0));
  }
  SUBCASE("complex pair") {
    const auto ev = eigenvalues(Matrix2{{{-1.0, -2.0}, {2.0, -1.0}}});
    CHECK(ev[0].real() == doctest::Approx(-1.0));
    CHECK(std::abs(ev[0].imag()) == doctest::Approx(2.0));
    CHECK(ev[0] == std::conj(ev[1]));
  }
  CHECK(stability_from_eigenvalues({std::complex<double>(-1, 0), std::complex<double>(-1e-9, 0)}) ==
        Stability::Inconclusive);
  CHECK(stability_from_eigenvalues({std::complex<double>(-1, 0), std::complex<double>(-1e-3, 0)}) == Stability::Stable);
  CHECK(stability_from_eigenvalues({std::complex<double>(-1, 0), std::complex<double>(1e-3, 0)}) == Stability::Unstable);
}
