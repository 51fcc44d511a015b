#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cutsurf/experiments.hpp"
#include "cutsurf/quadrature.hpp"

using namespace cutsurf;

namespace {

const double kTheta = kDefaultPartitionAngleDeg * std::numbers::pi / 180.0;

double bump_oracle(double r) { return std::abs(r) < 1 ? std::exp(r * r / (r * r - 1)) : 0.0; }

}  // namespace

TEST_CASE("partition of unity at random unit normals") {
  std::mt19937_64 rng(20261015);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
    double sum = 0;
    for (int axis = 0; axis < 3; ++axis) {
      const double psi = pou_weight(n, axis, kTheta);
      CHECK(psi >= 0.0);
      sum += psi;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("partition weights at special normals") {
  CHECK(pou_weight(Vec3(0, 0, 1), 2, kTheta) == 1.0);
  CHECK(pou_weight(Vec3(0, 0, -1), 0, kTheta) == 0.0);
  const Vec3 diag = Vec3(1, 1, 1).normalized();
  for (int axis = 0; axis < 3; ++axis) CHECK(pou_weight(diag, axis, kTheta) == doctest::Approx(1.0 / 3));
  const Vec3 n(0, 0.6, 0.8);
  CHECK(pou_weight(n, 0, kTheta) == 0.0);
  const double ratio = bump_oracle(std::acos(0.6) / kTheta) / bump_oracle(std::acos(0.8) / kTheta);
  CHECK(pou_weight(n, 1, kTheta) / pou_weight(n, 2, kTheta) == doctest::Approx(ratio).epsilon(1e-13));
}

TEST_CASE("bump function") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.5) == 0.0);
  CHECK(bump(0.5) == doctest::Approx(std::exp(-1.0 / 3)));
}

TEST_CASE("sphere area and odd moments") {
  const auto disc = discretize_box(LevelSetSurface::sphere(1.0), 80);
  const QuadratureWeights q = quadrature_weights(disc, kTheta);
  const double area = surface_integral(disc, q, [](const Vec3&) { return 1.0; });
  // Frozen from the observed N=40/80/160 errors 7.1e-5, 2.3e-6, 1.2e-8.
  CHECK(std::abs(area - 4 * std::numbers::pi) / (4 * std::numbers::pi) < 5e-6);
  CHECK(std::abs(surface_integral(disc, q, [](const Vec3& p) { return p.z(); })) < 1e-10);
  CHECK(surface_integral(disc, q, [](const Vec3& p) { return p.x() * p.x(); }) ==
        doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-5));
}

TEST_CASE("area error decreases faster than third order") {
  const double e40 = sphere_area_error(40), e80 = sphere_area_error(80), e160 = sphere_area_error(160);
  CHECK(std::log2(e40 / e80) >= 3.0);
  CHECK(std::log2(e80 / e160) >= 3.0);
}

TEST_CASE("quadrature weights are bounded by h^2 / eta") {
  const auto disc = discretize_box(make_surface("cassini"), 80);
  const QuadratureWeights q = quadrature_weights(disc, kTheta);
  const double h2 = disc.h() * disc.h();
  CHECK(q.w.minCoeff() >= 0.0);
  // A cut at a grid node carries the weights of every admissible direction.
  CHECK(q.w.maxCoeff() <= 3 * h2 / disc.eta());
  int above = 0;
  for (int i = 0; i < disc.n_total(); ++i)
    if (disc.point(i).position != disc.grid().node(disc.point(i).closest)) above += q.w[i] > h2 / disc.eta();
  CHECK(above == 0);
}

TEST_CASE("partition angle must lie between the admissibility and covering limits") {
  const auto disc = discretize_box(LevelSetSurface::sphere(1.0), 20);
  CHECK_THROWS_AS(quadrature_weights(disc, 50.0 * std::numbers::pi / 180), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_weights(disc, 64.0 * std::numbers::pi / 180), std::invalid_argument);
}
