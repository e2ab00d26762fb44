#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "presym/evolution_space.hpp"
#include "presym/sampling.hpp"

using namespace presym;

TEST_CASE("constraint values and validation") {
  EvolutionPoint p;  // rest state, spin along x
  CHECK(p.constraint_residual() == 0.0);
  CHECK_NOTHROW(p.validate());

  auto rng = make_rng(301);
  for (int i = 0; i < 20; ++i) {
    const EvolutionPoint q = random_point(rng);
    CHECK(q.constraint_residual() < 1e-12);
    CHECK_NOTHROW(q.validate());
  }

  EvolutionPoint bad_i = p;
  bad_i.I *= 1.1;
  oracles::expect_throw_containing<std::invalid_argument>(
      [&] { bad_i.validate(); }, "unit timelike");

  EvolutionPoint bad_j = p;
  bad_j.J *= 0.5;
  oracles::expect_throw_containing<std::invalid_argument>(
      [&] { bad_j.validate(); }, "unit spacelike");

  EvolutionPoint bad_orth = p;
  // Unit spacelike (J.J = -1 exactly) but with a time component, so only the
  // orthogonality constraint is violated.
  bad_orth.J = Vec4(std::sqrt(1.01), 0.0, 0.0, 0.1);
  oracles::expect_throw_containing<std::invalid_argument>(
      [&] { bad_orth.validate(); }, "orthogonal");

  EvolutionPoint past = p;
  past.I = Vec4(0.0, 0.0, 0.0, -1.0);
  oracles::expect_throw_containing<std::invalid_argument>(
      [&] { past.validate(); }, "future-pointing");
}

TEST_CASE("projection onto the constraint set") {
  // Already-valid points are fixed points of the projection.
  auto rng = make_rng(302);
  for (int i = 0; i < 20; ++i) {
    const EvolutionPoint p = random_point(rng);
    const EvolutionPoint q = project_to_V(p);
    CHECK((q.I - p.I).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((q.J - p.J).cwiseAbs().maxCoeff() < 1e-15);
  }

  // A slightly off-manifold pair is restored to the constraints.
  EvolutionPoint off;
  off.I = Vec4(0.0, 0.0, 0.0, 1.001);
  off.J = Vec4(0.0, 0.0, 1.0, 0.001);
  const EvolutionPoint fixed = project_to_V(off);
  CHECK(fixed.constraint_residual() < 1e-15);
  CHECK(mink_norm2(fixed.I) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mink_norm2(fixed.J) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(mink_inner(fixed.I, fixed.J) == doctest::Approx(0.0).epsilon(1e-15));
  // Projection preserves the legs' directions up to the constraint fix.
  CHECK(fixed.I(3) > 0.0);
  CHECK(fixed.J(2) > 0.9);

  // Past-pointing velocity cannot be projected back.
  EvolutionPoint past;
  past.I = Vec4(0.0, 0.0, 0.0, -1.0);
  oracles::expect_throw_containing<std::runtime_error>(
      [&] { project_to_V(past); }, "state left the timelike cone");

  // Spin leg parallel to the velocity leg degenerates under projection.
  EvolutionPoint parallel;
  parallel.J = parallel.I;
  oracles::expect_throw_containing<std::runtime_error>(
      [&] { project_to_V(parallel); }, "degenerate spin direction");
}

TEST_CASE("lab round trip through evolution points") {
  auto rng = make_rng(303);
  for (int i = 0; i < 20; ++i) {
    const LabFrameState in = random_lab_state(rng);
    const EvolutionPoint p = EvolutionPoint::from_lab(in);
    CHECK_NOTHROW(p.validate());
    const LabFrameState out = p.to_lab();
    CHECK((out.r - in.r).norm() < 1e-12);
    CHECK((out.v - in.v).norm() < 1e-12);
    CHECK((out.u - in.u).norm() < 1e-12);
  }
}

TEST_CASE("ambient tangents: stacking and tangency residuals") {
  auto rng = make_rng(304);
  const EvolutionPoint p = random_point(rng);

  const AmbientTangent t{random_vec4(rng, 1.0), random_vec4(rng, 1.0),
                         random_vec4(rng, 1.0)};
  const AmbientTangent back = AmbientTangent::from_stacked(t.stacked());
  CHECK((back.dX - t.dX).norm() == 0.0);
  CHECK((back.dI - t.dI).norm() == 0.0);
  CHECK((back.dJ - t.dJ).norm() == 0.0);

  // Projected random tangents satisfy the linearized constraints.
  for (int i = 0; i < 20; ++i) {
    const AmbientTangent tan = random_tangent(rng, p);
    CHECK(tangency_values(p, tan).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Known non-tangent directions produce the expected residuals.
  AmbientTangent radial;
  radial.dI = p.I;
  const Vec3 tv = tangency_values(p, radial);
  CHECK(tv(0) == doctest::Approx(1.0).epsilon(1e-12));  // <I, dI> = |I|^2 = 1
  CHECK(tv(1) == 0.0);
  CHECK(tv(2) == doctest::Approx(0.0).epsilon(1e-12));  // <J, I> = 0
}

TEST_CASE("constraint gradients pair with tangency residuals") {
  auto rng = make_rng(305);
  for (int i = 0; i < 10; ++i) {
    const EvolutionPoint p = random_point(rng);
    const auto C = constraint_gradients(p);
    const AmbientTangent t{random_vec4(rng, 1.0), random_vec4(rng, 1.0),
                           random_vec4(rng, 1.0)};
    const Eigen::Vector3d via_c = C.transpose() * t.stacked();
    const Vec3 tv = tangency_values(p, t);
    // Columns are scaled so that C^T v = (-2 tv0, 2 tv1, tv2).
    CHECK(via_c(0) == doctest::Approx(-2.0 * tv(0)).epsilon(1e-12));
    CHECK(via_c(1) == doctest::Approx(2.0 * tv(1)).epsilon(1e-12));
    CHECK(via_c(2) == doctest::Approx(tv(2)).epsilon(1e-12));
  }
}

TEST_CASE("tangent basis: orthonormal, annihilated, deterministic") {
  auto rng = make_rng(306);
  for (int i = 0; i < 10; ++i) {
    const EvolutionPoint p = random_point(rng);
    const auto B = tangent_basis(p);
    CHECK((B.transpose() * B - Eigen::Matrix<double, 9, 9>::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK((constraint_gradients(p).transpose() * B).cwiseAbs().maxCoeff() <
          1e-12);
    const auto B2 = tangent_basis(p);
    CHECK((B - B2).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("displacement along a tangent leaves V at second order") {
  auto rng = make_rng(307);
  const EvolutionPoint p = random_point(rng);
  const AmbientTangent t = random_tangent(rng, p);
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  std::vector<double> res;
  for (double e : eps) {
    res.push_back(displace(p, t, e).constraint_residual());
  }
  const double slope = oracles::loglog_slope(eps, res);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}
