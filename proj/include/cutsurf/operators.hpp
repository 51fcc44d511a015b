#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/geometry.hpp"
#include "cutsurf/sparse.hpp"

namespace cutsurf {

/// Metric of each point's own chart. For a point of Gamma_axis with chart
/// coordinates (xi1, xi2) = (X[chart_axis(axis,0)], X[chart_axis(axis,1)]),
/// the surface is X[axis] = height(xi1, xi2) locally.
struct ChartMetric {
  Eigen::MatrixX2d slope;  ///< d height / d xi_j
  Eigen::VectorXd g;       ///< det g_ij = 1 + slope_1^2 + slope_2^2
  Eigen::MatrixX3d g_inv;  ///< g^11, g^12, g^22
  Eigen::MatrixX3d a;      ///< sqrt(g) g^ij in the same layout
};

/// Metric at every cut point (primary and secondary) from the analytic gradient.
/// Throws DegenerateGradientError if the chart component of the gradient vanishes.
ChartMetric chart_metric(const LevelSetSurface& surface, const SurfaceDiscretization& disc);

enum class LbForm { divergence, nondivergence };
std::string to_string(LbForm form);
/// "div" / "divergence" or "nondiv" / "nondivergence"; throws ConfigError otherwise.
LbForm parse_lb_form(const std::string& text);

/// 3x3 stencil weights indexed by stencil_slot(d1, d2).
using Stencil9 = std::array<double, 9>;

struct MetricSample {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
};

/// Divergence-form weights from a^{ij} at the nine stencil nodes. Uses the
/// (+,+) diagonal when a^{12} >= 0 at the center, the (-,+) diagonal otherwise;
/// half-point coefficients average a node with the center.
Stencil9 divergence_stencil(const std::array<MetricSample, 9>& a, double sqrt_g, double h);

/// Non-divergence weights for g^{ij} and first-order coefficients b_i at the center.
Stencil9 nondivergence_stencil(double g11, double g12, double g22, double b1, double b2, double h);

/// Delta_h as an n_p x n_total operator in divergence form.
SparseOperator lb_divergence_rows(const SurfaceDiscretization& disc, const ChartMetric& metric);

/// Delta_h in non-divergence form. Sphere only (closed-form metric and b_i);
/// throws std::invalid_argument for other surfaces.
SparseOperator lb_nondivergence_rows(const SurfaceDiscretization& disc, const LevelSetSurface& surface);

SparseOperator laplace_beltrami(const SurfaceDiscretization& disc, const LevelSetSurface& surface, LbForm form);

/// A * E_h (n_p x n_p).
SparseOperator reduced_operator(const SparseOperator& a, const SurfaceDiscretization& disc);

using VelocityField = std::function<Vec3(const Vec3&)>;

struct ChartVelocity {
  Eigen::MatrixX2d v;  ///< per primary point, components along the two chart coordinates
  /// max |v.n| / |v| over primary points; above 1e-10 the field is not tangential.
  double max_normal_ratio = 0.0;
};

ChartVelocity advection_coefficients(const SurfaceDiscretization& disc, const VelocityField& velocity);

enum class Difference { forward, backward, centered };

/// Chart difference of every column of `field` (n_total rows) along chart
/// direction `dir` (0 or 1) at the primary points.
Eigen::MatrixXd chart_difference(const SurfaceDiscretization& disc, const Eigen::MatrixXd& field, int dir,
                                 Difference kind);

/// Surface divergence of a Cartesian tangential field (n_total x 3) on a
/// sphere, at primary points, with centered chart differences.
Eigen::VectorXd sphere_surface_divergence(const SurfaceDiscretization& disc, const LevelSetSurface& sphere,
                                          const Eigen::MatrixXd& v);

/// w - (w.n) n; `n` must be a unit vector.
Vec3 tangential_projection(const Vec3& w, const Vec3& n);

/// nu k h sum_i (|D+ u| D+_i u - |D- u| D-_i u) per column of `field`, at primary points.
Eigen::MatrixXd artificial_viscosity(const SurfaceDiscretization& disc, const Eigen::MatrixXd& field, double nu,
                                     double k);

}  // namespace cutsurf
