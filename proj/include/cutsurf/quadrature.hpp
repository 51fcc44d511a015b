#pragma once

#include <functional>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/geometry.hpp"

namespace cutsurf {

constexpr double kDefaultPartitionAngleDeg = 62.5;

/// exp(r^2/(r^2-1)) for |r| < 1, else 0.
double bump(double r);

/// psi_axis(n): share of the partition of unity on the unit sphere assigned to
/// `axis` for unit normal n. theta is the partition angle in radians.
double pou_weight(const Vec3& n, int axis, double theta);

/// Per-point weights psi(n)/|n_axis| h^2 for every stored cut point.
struct QuadratureWeights {
  Eigen::VectorXd w;
  double eta = 0.0;
  double theta = 0.0;
};

/// Requires eta < cos(theta) < 1/sqrt(3); throws std::invalid_argument otherwise.
QuadratureWeights quadrature_weights(const SurfaceDiscretization& disc, double theta);

/// sum_x f(x) w(x) over all cut points; `f` has one value per point.
double surface_integral(const QuadratureWeights& weights, const Eigen::VectorXd& f);
double surface_integral(const SurfaceDiscretization& disc, const QuadratureWeights& weights,
                        const std::function<double(const Vec3&)>& f);

}  // namespace cutsurf
