#pragma once

#include <vector>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/operators.hpp"
#include "cutsurf/pde.hpp"

namespace cutsurf {

/// Shallow water on the unit sphere in scaled units: lengths in planetary
/// radii, time in days. Dimensional inputs are SI.
struct SweParameters {
  double radius_m = 6.37122e6;
  double omega_per_s = 7.292e-5;
  double phi0_m2_s2 = 2.94e4;
  double day_s = 86400.0;
  double alpha = 0.0;  ///< tilt of the flow axis, radians

  double u0() const;     ///< one revolution per 12 days
  double omega() const;
  double phi0() const;
};

/// Columns: geopotential, then the three Cartesian components of momentum (geopotential * velocity).
struct SweState {
  Eigen::MatrixXd q;  ///< n_total x 4

  Eigen::VectorXd phi() const { return q.col(0); }
  Eigen::MatrixXd momentum() const { return q.rightCols(3); }
};

/// Steady zonal flow of the standard test set, rotated by alpha.
Vec3 williamson2_velocity(const SweParameters& p, const Vec3& x);
double williamson2_phi(const SweParameters& p, const Vec3& x);
double coriolis(const SweParameters& p, const Vec3& x);

SweState williamson2(const SurfaceDiscretization& disc, const SweParameters& params);

/// Conservative-form increments at primary points (n_p x 4) with differences
/// of the given kind. Throws SolverError if the geopotential is not positive.
Eigen::MatrixXd swe_rhs(const SurfaceDiscretization& disc, const SweParameters& params, const Eigen::MatrixXd& q,
                        Difference kind);

/// MacCormack with artificial viscosity nu in the corrector. Records carry
/// max_phiv, max_phi, l2_phiv, l2_phi, int_v2 and int_phi relative errors
/// against the steady state.
std::vector<RunRecord> swe_solve(const SurfaceDiscretization& disc, const SweParameters& params, double nu,
                                 double k, const std::vector<double>& output_times);

}  // namespace cutsurf
