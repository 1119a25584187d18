#include <doctest.h>

#include <cmath>

#include "filippov/equilibria.hpp"
#include "filippov/errors.hpp"
#include "oracles.hpp"

using namespace filippov;

namespace {

State interior(const ModelParams& P, PsiMode mode) {
  const auto sol = interior_equilibria(P, mode);
  REQUIRE(sol.equilibria.size() == 1);
  return sol.equilibria.front().location;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("cubic coefficients match the nullcline elimination") {
  oracle::ParamSampler sampler(101);
  for (int i = 0; i < 500; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      const CubicCoeffs c = cubic_coefficients(P, mode);
      const auto ref = oracle::cubic_from_nullclines(P, mode);
      const double scale = std::max({std::abs(ref[0]), std::abs(ref[1]), std::abs(ref[2]), std::abs(ref[3])});
      CHECK(std::abs(c.a0 - ref[0]) < 1e-12 * scale);
      CHECK(std::abs(c.a1 - ref[1]) < 1e-12 * scale);
      CHECK(std::abs(c.a2 - ref[2]) < 1e-12 * scale);
      CHECK(std::abs(c.a3 - ref[3]) < 1e-12 * scale);
      CHECK(c.a3 > 0.0);
    }
  }
}

TEST_CASE("cubic degenerates toward linear as the refuge fills") {
  const ModelParams P = preset("A1").with_m(1.0 - 1e-12);
  const CubicCoeffs c = cubic_coefficients(P, PsiMode::NonHarvest);
  CHECK(c.a3 > 0.0);
  CHECK(c.a3 < 1e-20);
  CHECK(c.a2 > 0.0);
  CHECK(c.a2 < 1e-10);
}

TEST_CASE("published interior equilibria of A1") {
  const ModelParams P = preset("A1");
  const State e1 = interior(P, PsiMode::NonHarvest);
  CHECK(e1.x == doctest::Approx(0.4005).epsilon(1e-3));
  CHECK(std::abs(e1.x - 0.4005) < 1e-3);
  CHECK(std::abs(e1.y - 1.6917) < 1e-3);
  const State e2 = interior(P, PsiMode::Harvest);
  CHECK(std::abs(e2.x - 0.1416) < 1e-3);
  CHECK(std::abs(e2.y - 1.3856) < 1e-3);
  CHECK(interior_equilibria(P, PsiMode::NonHarvest).uniqueness_certified);
}

TEST_CASE("real cubic roots on known polynomials") {
  SUBCASE("three distinct") {
    const auto r = real_cubic_roots({-6.0, 11.0, -6.0, 1.0});
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("one real") {
    const auto r = real_cubic_roots({-1.0, 1.0, 0.0, 1.0});
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] * r[0] * r[0] + r[0] - 1.0) < 1e-14);
  }
  SUBCASE("triple root") {
    const auto r = real_cubic_roots({-1.0, 3.0, -3.0, 1.0});
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("quadratic fallback") {
    const auto r = real_cubic_roots({2.0, -3.0, 1.0, 0.0});
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == doctest::Approx(2.0));
  }
  CHECK(positive_cubic_roots({6.0, 11.0, 6.0, 1.0}).empty());
}

TEST_CASE("interior equilibria agree with the bisection oracle") {
  oracle::ParamSampler sampler(202);
  for (int i = 0; i < 2000; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      const auto ref = oracle::cubic_from_nullclines(P, mode);
      auto roots = oracle::cubic_roots_by_bisection(ref[0], ref[1], ref[2], ref[3], 0.0, 10.0 * P.k1());
      std::erase_if(roots, [&](double x) { return !(oracle::nullcline_y(x, P, mode) > 0.0); });
      const auto sol = interior_equilibria(P, mode);
      REQUIRE(sol.equilibria.size() == roots.size());
      const CubicCoeffs c = cubic_coefficients(P, mode);
      for (std::size_t k = 0; k < roots.size(); ++k) {
        const State s = sol.equilibria[k].location;
        CHECK(std::abs(s.x - roots[k]) < 1e-8);
        CHECK(std::abs(c(s.x)) < 1e-9 * std::max(1.0, std::abs(c.a0)));
        const Velocity v = eval_field(s, P, mode);
        CHECK(std::hypot(v.dx_dt, v.dy_dt) < 1e-9);
      }
      if (sol.uniqueness_certified) {
        CHECK(oracle::cubic_roots_by_bisection(c.a0, c.a1, c.a2, c.a3, 0.0, 1e6).size() == 1);
      }
    }
  }
}

TEST_CASE("roots with nonpositive predator density are discarded with a diagnostic") {
  oracle::ParamSampler sampler(606);
  int discarded = 0;
  for (int i = 0; i < 5000; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      std::size_t bad = 0;
      for (double x : positive_cubic_roots(cubic_coefficients(P, mode))) {
        if (!(predator_on_nullcline(x, P, mode) > 0.0)) ++bad;
      }
      const auto sol = interior_equilibria(P, mode);
      CHECK(sol.diagnostics.size() == bad);
      for (const auto& r : sol.equilibria) CHECK(r.location.y > 0.0);
      discarded += static_cast<int>(bad);
    }
  }
  // random draws keep q2 E < r2, where every positive root has y* > 0
  CHECK(discarded == 0);

  // strong predator harvesting moves the intersection below the prey axis
  const ModelParams P = preset("A1").with("q2", 1.2);
  const auto roots = positive_cubic_roots(cubic_coefficients(P, PsiMode::Harvest));
  REQUIRE(roots.size() == 1);
  CHECK(predator_on_nullcline(roots[0], P, PsiMode::Harvest) < 0.0);
  const auto sol = interior_equilibria(P, PsiMode::Harvest);
  CHECK(sol.equilibria.empty());
  CHECK(sol.diagnostics.size() == 1);
}

TEST_CASE("Jacobian at the A1 equilibria") {
  const ModelParams P = preset("A1");
  for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
    const State s = interior(P, mode);
    const Matrix2 J = jacobian(s, P, mode);
    const auto F = oracle::fd_jacobian(s, P, mode);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) CHECK(rel_diff(J[r][c], F[r][c]) < 1e-6);
    }
    CHECK(J[0][0] + J[1][1] < 0.0);
    CHECK(J[0][0] * J[1][1] - J[0][1] * J[1][0] > 0.0);
    CHECK(J[0][1] < 0.0);
    CHECK(J[1][0] > 0.0);
  }
  CHECK_THROWS_AS(jacobian({1.0, 1.0}, P, PsiMode::NonHarvest), DomainError);
}

TEST_CASE("off-diagonal Jacobian signs at random interior equilibria") {
  oracle::ParamSampler sampler(303);
  for (int i = 0; i < 300; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      for (const auto& r : interior_equilibria(P, mode).equilibria) {
        const Matrix2 J = jacobian(r.location, P, mode);
        CHECK(J[0][1] < 0.0);
        CHECK(J[1][0] > 0.0);
      }
    }
  }
}

TEST_CASE("stability conditions") {
  const ModelParams A1 = preset("A1");
  CHECK(local_stability_condition(interior(A1, PsiMode::NonHarvest), A1));
  const ModelParams A2 = preset("A2").with_S(4.0);
  CHECK(global_stability_condition(interior(A2, PsiMode::NonHarvest), A2));
  CHECK(global_stability_condition(interior(A2, PsiMode::Harvest), A2));

  const ModelParams full = A1.with_m(1.0 - 1e-12);
  for (const auto& r : interior_equilibria(full, PsiMode::NonHarvest).equilibria) {
    CHECK(local_stability_condition(r.location, full));
  }
}

TEST_CASE("local condition implies stable eigenvalues; global implies local") {
  oracle::ParamSampler sampler(404);
  int local_true = 0;
  for (int i = 0; i < 1000; ++i) {
    const ModelParams P = sampler.draw();
    for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
      for (const auto& r : interior_equilibria(P, mode).equilibria) {
        const bool local = local_stability_condition(r.location, P);
        if (global_stability_condition(r.location, P)) CHECK(local);
        if (local) {
          ++local_true;
          const auto ev = eigenvalues(jacobian(r.location, P, mode));
          CHECK(ev[0].real() < 0.0);
          CHECK(ev[1].real() < 0.0);
        }
      }
    }
  }
  CHECK(local_true > 100);
}

TEST_CASE("placement of the A1 equilibria across S") {
  const auto placement = [](double S, PsiMode mode) {
    return interior_equilibria(preset("A1").with_S(S), mode).equilibria.at(0).placement;
  };
  CHECK(placement(0.1, PsiMode::NonHarvest) == Placement::Virtual);
  CHECK(placement(0.1, PsiMode::Harvest) == Placement::Regular);
  CHECK(placement(0.25, PsiMode::NonHarvest) == Placement::Virtual);
  CHECK(placement(0.25, PsiMode::Harvest) == Placement::Virtual);
  CHECK(placement(0.7, PsiMode::NonHarvest) == Placement::Regular);
  CHECK(placement(0.7, PsiMode::Harvest) == Placement::Virtual);

  const State e1 = interior(preset("A1"), PsiMode::NonHarvest);
  EquilibriumRecord rec;
  rec.location = e1;
  rec.field = FieldTag::NonHarvest;
  rec.kind = EquilibriumKind::Interior;
  CHECK(classify_equilibrium(rec, preset("A1").with_S(e1.x)).placement == Placement::OnBoundary);
  CHECK(classify_equilibrium(rec, preset("A1").with_S(e1.x + 1e-6)).placement == Placement::Regular);
  rec.field = FieldTag::Sliding;
  CHECK_THROWS(classify_equilibrium(rec, preset("A1")));
}

TEST_CASE("boundary equilibria at the two collisions") {
  const ModelParams A1 = preset("A1");
  const State e1 = interior(A1, PsiMode::NonHarvest);
  const State e2 = interior(A1, PsiMode::Harvest);

  const auto at_e2 = boundary_equilibria(A1.with_S(e2.x));
  REQUIRE(at_e2.size() == 1);
  CHECK(at_e2[0].kind == EquilibriumKind::Boundary);
  CHECK(at_e2[0].field == FieldTag::Harvest);
  CHECK(at_e2[0].location.y == doctest::Approx(sliding_bounds(A1.with_S(e2.x)).y_lower).epsilon(1e-9));

  const auto at_e1 = boundary_equilibria(A1.with_S(e1.x));
  REQUIRE(at_e1.size() == 1);
  CHECK(at_e1[0].field == FieldTag::NonHarvest);
  CHECK(at_e1[0].location.y == doctest::Approx(sliding_bounds(A1.with_S(e1.x)).y_upper).epsilon(1e-9));

  // the published four-digit thresholds, with a tolerance matching their rounding
  CHECK(boundary_equilibria(A1.with_S(0.1416), 1e-5).size() == 1);
  CHECK(boundary_equilibria(A1.with_S(0.4005), 1e-5).size() == 1);
  CHECK(boundary_equilibria(A1.with_S(0.25)).empty());
}

TEST_CASE("tangent point visibility across S for A1") {
  const auto vis = [](double S) {
    const auto pts = tangent_points(preset("A1").with_S(S));
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[0].field == PsiMode::NonHarvest);
    REQUIRE(pts[1].field == PsiMode::Harvest);
    return std::pair{pts[0].visibility, pts[1].visibility};
  };
  CHECK(vis(0.1) == std::pair{Visibility::Invisible, Visibility::Visible});
  CHECK(vis(0.25) == std::pair{Visibility::Invisible, Visibility::Invisible});
  CHECK(vis(0.7) == std::pair{Visibility::Visible, Visibility::Invisible});
  CHECK_THROWS_AS(tangent_points(preset("A1").with_S(2.5)), DomainError);
}

TEST_CASE("tangent visibility agrees with a short integration") {
  oracle::ParamSampler sampler(505);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const ModelParams P = sampler.draw();
    for (const auto& t : tangent_points(P)) {
      if (std::abs(t.x_second_derivative) < 1e-3) continue;
      CHECK(t.location.x == P.S());
      const auto b = sliding_bounds(P);
      CHECK(t.location.y == (t.field == PsiMode::NonHarvest ? b.y_upper : b.y_lower));
      const State end = oracle::rk4(t.location, P, t.field, 1e-3, 100);
      const bool stays_in_own_region = t.field == PsiMode::NonHarvest ? end.x < P.S() : end.x > P.S();
      CHECK(stays_in_own_region == (t.visibility == Visibility::Visible));
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("equilibrium listings") {
  const ModelParams P = preset("A1").with_S(0.25);
  const auto all = all_equilibria(P);
  const auto relevant = filippov_equilibria(P);
  CHECK(all.size() == 9);
  bool pseudo = false;
  for (const auto& r : relevant) {
    CHECK(r.placement != Placement::Virtual);
    if (r.kind == EquilibriumKind::Pseudo) pseudo = true;
  }
  CHECK(pseudo);
}
