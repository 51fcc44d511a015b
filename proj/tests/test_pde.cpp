#include <doctest.h>

#include <cmath>

#include "cutsurf/errors.hpp"
#include "cutsurf/experiments.hpp"
#include "cutsurf/swe.hpp"

using namespace cutsurf;

namespace {

Eigen::VectorXd sample(const SurfaceDiscretization& disc, const std::function<double(const Vec3&)>& f, bool all) {
  const int n = all ? disc.n_total() : disc.n_primary();
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = f(disc.point(i).position);
  return u;
}

double smooth(const Vec3& p) { return std::cos(p.x() - p.y() + p.z()) + p.x() * p.z(); }

}  // namespace

TEST_CASE("error norms") {
  const Eigen::Vector3d exact(1.0, -2.0, 2.0);
  CHECK(error_norms(Eigen::VectorXd(exact), Eigen::VectorXd(exact)).rel_max == 0.0);
  const ErrorNorms twice = error_norms(Eigen::VectorXd(2 * exact), Eigen::VectorXd(exact));
  CHECK(twice.rel_max == doctest::Approx(1.0));
  CHECK(twice.rel_l2 == doctest::Approx(1.0));
  const ErrorNorms one = error_norms(Eigen::VectorXd(exact + Eigen::Vector3d(0, 0.5, 0)), Eigen::VectorXd(exact));
  CHECK(one.rel_max == doctest::Approx(0.25));
  CHECK(one.rel_l2 == doctest::Approx(0.5 / 3.0));
  CHECK_THROWS_AS(error_norms(Eigen::VectorXd(Eigen::VectorXd::Ones(3)), Eigen::VectorXd(Eigen::VectorXd::Zero(3))), std::domain_error);

  Eigen::MatrixXd v(2, 3), w(2, 3);
  v << 3, 0, 4, 0, 1, 0;
  w = v;
  w(1, 1) = 2;
  CHECK(error_norms(w, v).rel_max == doctest::Approx(0.2));

  const AbsoluteNorms a = absolute_norms(Eigen::Vector2d(3.0, -4.0));
  CHECK(a.max == 4.0);
  CHECK(a.l2 == doctest::Approx(5.0 / std::sqrt(2.0)));
}

TEST_CASE("step counts must divide the final time") {
  CHECK(step_count(1.0, 1.0 / 160) == 160);
  CHECK(step_count(0.0, 0.1) == 0);
  CHECK_THROWS_AS(step_count(1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(step_count(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("forward Euler: full point set and reduced primary formulations agree on equilibrated data") {
  const auto sphere = LevelSetSurface::sphere(1.0);
  const auto disc = discretize_box(sphere, 40);
  const auto lb = laplace_beltrami(disc, sphere, LbForm::divergence);
  const Eigen::VectorXd up = sample(disc, smooth, false);
  const double k = 8.0 / (40 * 40), alpha = 0.1;
  const Eigen::VectorXd full = diffusion_full_fe(disc, lb, disc.extend(up), alpha, k, 0.1);
  const Eigen::VectorXd reduced = diffusion_solve_fe(reduced_operator(lb, disc), up, alpha, k, 0.1);
  CHECK((full - disc.extend(reduced)).lpNorm<Eigen::Infinity>() < 1e-12);
  // One explicit step is a single application of the update formula.
  const Eigen::VectorXd u0 = sample(disc, smooth, true);
  const Eigen::VectorXd step = diffusion_step_fe(disc, lb, u0, alpha, k);
  CHECK((step - u0 - k * alpha * disc.extend(lb.apply(u0))).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("BDF2: full and reduced formulations agree, constants and zero diffusion are preserved") {
  const auto s = make_surface("ellipsoid");
  const auto disc = discretize_box(s, 40);
  const auto lb = laplace_beltrami(disc, s, LbForm::divergence);
  const auto lb_red = reduced_operator(lb, disc);
  const Eigen::VectorXd up = sample(disc, smooth, false);
  const Eigen::VectorXd full = diffusion_full_bdf2(disc, lb, disc.extend(up), 0.1, 1.0 / 400, 0.1);
  const Eigen::VectorXd reduced = diffusion_solve_bdf2(lb_red, up, 0.1, 1.0 / 400, 0.1);
  CHECK((full - disc.extend(reduced)).lpNorm<Eigen::Infinity>() < 1e-10);

  const Eigen::VectorXd c = Eigen::VectorXd::Constant(disc.n_total(), 0.7);
  CHECK((diffusion_full_bdf2(disc, lb, c, 0.1, 1.0 / 400, 0.1).array() - 0.7).abs().maxCoeff() < 1e-12);
  const Eigen::VectorXd u0 = sample(disc, smooth, true);
  CHECK((diffusion_full_bdf2(disc, lb, u0, 0.0, 1.0 / 400, 0.1) - u0).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("Poisson with zero and constant forcing") {
  const auto sphere = LevelSetSurface::sphere(1.0);
  const auto disc = discretize_box(sphere, 40);
  const auto lb_red = reduced_operator(laplace_beltrami(disc, sphere, LbForm::divergence), disc);
  const PoissonResult zero = poisson_solve(lb_red, Eigen::VectorXd::Zero(disc.n_primary()));
  CHECK(zero.u.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(zero.beta == 0.0);
  const PoissonResult c = poisson_solve(lb_red, Eigen::VectorXd::Constant(disc.n_primary(), 1.5));
  CHECK(c.u.lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(c.beta == doctest::Approx(1.5));
}

TEST_CASE("advection exact solution solves the transport equation") {
  CHECK(advection_exact(Vec3(0.6, 0.0, 0.8), 0.0) == doctest::Approx(0.36));
  CHECK(advection_exact(Vec3(0.0, 0.0, 1.0), 0.0) == 0.0);
  // Along a trajectory u is constant: du/dt + v.grad u = 0 by central differences.
  const double d = 1e-5;
  for (const Vec3& p : {Vec3(0.6, 0.0, 0.8), Vec3(0.48, -0.6, 0.64), Vec3(-0.36, 0.48, -0.8)}) {
    for (double t : {0.3, 1.7}) {
      const Vec3 v = advection_velocity(p);
      CHECK(std::abs(v.dot(p)) < 1e-15);
      const double dt = (advection_exact(p, t + d) - advection_exact(p, t - d)) / (2 * d);
      const double dv = (advection_exact(p + d * v, t) - advection_exact(p - d * v, t)) / (2 * d);
      CHECK(std::abs(dt + dv) < 1e-7);
    }
  }
}

TEST_CASE("shallow water: a fluid at rest with flat geopotential has zero increments") {
  const auto disc = discretize_box(LevelSetSurface::sphere(1.0), 40);
  const SweParameters params;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(disc.n_total(), 4);
  q.col(0).setConstant(params.phi0());
  for (Difference kind : {Difference::forward, Difference::backward})
    CHECK(swe_rhs(disc, params, q, kind).cwiseAbs().maxCoeff() < 1e-12 * params.phi0());
  q(3, 0) = -1.0;
  CHECK_THROWS_AS(swe_rhs(disc, params, q, Difference::forward), SolverError);
}

TEST_CASE("shallow water steady state: scaled parameters and geostrophic balance") {
  const SweParameters p;
  CHECK(p.u0() == doctest::Approx(2 * std::numbers::pi / 12));
  CHECK(p.omega() == doctest::Approx(7.292e-5 * 86400));
  const Vec3 x = Vec3(0.3, -0.5, 0.6).normalized();
  CHECK(std::abs(williamson2_velocity(p, x).dot(x)) < 1e-14);
  CHECK(williamson2_phi(p, Vec3(1, 0, 0)) == doctest::Approx(p.phi0()));
}

TEST_CASE("comparison map matches fine-grid cut points on the coarse set") {
  const auto s = make_surface("ellipsoid");
  const auto coarse = discretize_box(s, 40);
  const auto fine = discretize_box(s, 80);
  const Eigen::VectorXd on_coarse = transfer_to_coarse(fine, sample(fine, smooth, true), coarse);
  CHECK((on_coarse - sample(coarse, smooth, true)).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("resolvent of the reduced sphere operator preserves constants") {
  const auto sphere = LevelSetSurface::sphere(1.0);
  const auto disc = discretize_box(sphere, 20, 0.45);
  const auto lb_red = reduced_operator(laplace_beltrami(disc, sphere, LbForm::divergence), disc);
  const ResolventReport r = resolvent_report(lb_red, 2.0 * disc.h() * disc.h(), 2.0);
  CHECK(r.invertible);
  CHECK(r.max_rowsum_dev < 1e-10);
  CHECK(r.min_entry > -1e-12);
}
