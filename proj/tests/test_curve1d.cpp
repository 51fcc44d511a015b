#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cutsurf/curve1d.hpp"
#include "cutsurf/errors.hpp"

using namespace cutsurf;

namespace {

// Unit circle: the line x = c meets it at y = +-sqrt(1 - c^2) with normal (c, y),
// admissible for the y-direction interval iff |y| >= eta.
int circle_count_oracle(const Grid2& g, double eta) {
  int count = 0;
  for (int axis = 0; axis < 2; ++axis)
    for (int i = 0; i <= g.n_cells[1 - axis]; ++i) {
      const double c = g.coord(1 - axis, i);
      if (std::abs(c) >= 1.0) continue;
      if (std::sqrt(1.0 - c * c) >= eta) count += 2;
    }
  return count;
}

double cosine_residual(int n) {
  const auto disc = discretize_curve(LevelSetCurve::circle(1.0), Grid2::box(1.2, n), 0.45);
  Eigen::VectorXd u(disc.n_total());
  for (int i = 0; i < disc.n_total(); ++i) u[i] = std::cos(std::atan2(disc.point(i).position.y(), disc.point(i).position.x()));
  const Eigen::VectorXd lu = lb_curve(disc).apply(u);
  return (lu + u.head(disc.n_primary())).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("circle point count matches the line-intersection oracle") {
  for (int n : {40, 80, 160}) {
    const Grid2 g = Grid2::box(1.2, n);
    const auto disc = discretize_curve(LevelSetCurve::circle(1.0), g, 0.45);
    CHECK(disc.n_total() == circle_count_oracle(g, 0.45));
    CHECK(disc.complete());
  }
}

TEST_CASE("primaries are unique per node and secondaries interpolate across the other chart") {
  const auto disc = discretize_curve(LevelSetCurve::ellipse(1.0, 0.7), Grid2::box(1.2, 80), 0.45);
  std::set<std::array<int, 2>> nodes;
  for (int i = 0; i < disc.n_total(); ++i) {
    const CurvePoint& p = disc.point(i);
    CHECK(std::abs(p.theta) <= 0.5);
    if (p.is_primary()) {
      CHECK(nodes.insert(p.closest).second);
    } else {
      CHECK(disc.point(p.associated_primary).axis != p.axis);
      double sum = 0;
      for (double w : p.interp_coeff) sum += w;
      CHECK(sum == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("thresholds above 1/sqrt(2) leave coverage gaps") {
  const auto disc = discretize_curve(LevelSetCurve::circle(1.0), Grid2::box(1.2, 40), 0.75);
  CHECK_FALSE(disc.complete());
  CHECK_THROWS_AS(lb_curve(disc), DiscretizationError);
  CHECK_THROWS_AS(discretize_curve(LevelSetCurve::circle(1.0), Grid2::box(1.2, 40), 1.0), std::invalid_argument);
}

TEST_CASE("second arclength derivative: annihilates constants, second order on cos") {
  const auto disc = discretize_curve(LevelSetCurve::perturbed_circle(0.2, 3), Grid2::box(1.5, 80), 0.45);
  CHECK(lb_curve(disc).apply(Eigen::VectorXd(Eigen::VectorXd::Ones(disc.n_total()))).lpNorm<Eigen::Infinity>() < 1e-9);
  const double e80 = cosine_residual(80), e160 = cosine_residual(160);
  CHECK(e80 / e160 > 3.0);
  CHECK(e80 / e160 < 5.0);
}

TEST_CASE("resolvent positivity and the M-matrix structure") {
  for (const auto& curve : {LevelSetCurve::circle(1.0), LevelSetCurve::ellipse(1.0, 0.7)}) {
    CAPTURE(curve.name());
    const auto disc = discretize_curve(curve, Grid2::box(1.2, 80), 0.45);
    const auto lb = lb_curve(disc);
    const auto reports = resolvent_positivity(disc, {0.0, 0.75, 2.0});
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].min_entry == 0.0);
    CHECK(reports[0].max_rowsum_dev == 0.0);
    for (const auto& r : reports) {
      CHECK(r.invertible);
      CHECK(r.min_entry >= 0.0);
      CHECK(r.max_rowsum_dev < 1e-10);
    }
    for (double sigma : {0.75, 2.0}) {
      const MMatrixReport m = check_m_matrix(disc, lb, sigma);
      CHECK(m.is_m_matrix);
      CHECK(m.max_offdiag <= 0.0);
      CHECK(m.min_row_sum > 0.0);
      CHECK(block_elimination_gap(disc, lb, sigma) < 1e-10);
    }
    const CurveCoefficientReport c = curve_coefficients(disc);
    CHECK(c.min_primary_c2 >= 0.45 * 0.45);
  }
}

TEST_CASE("resolvent CSV format") {
  std::ostringstream out;
  write_resolvent_csv(out, {{1.0, true, 0.25, 1e-16}});
  CHECK(out.str().rfind("sigma,min_entry,max_rowsum_dev,invertible\n", 0) == 0);
}
