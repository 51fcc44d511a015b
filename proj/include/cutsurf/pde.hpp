#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/linalg.hpp"
#include "cutsurf/operators.hpp"
#include "cutsurf/quadrature.hpp"
#include "cutsurf/sparse.hpp"

namespace cutsurf {

struct ErrorNorms {
  double rel_max = 0.0;
  double rel_l2 = 0.0;
};

/// Relative max and root-mean-square errors over all points.
/// Throws std::domain_error when `exact` vanishes identically.
ErrorNorms error_norms(const Eigen::VectorXd& computed, const Eigen::VectorXd& exact);
/// Vector fields: one point per row, Euclidean length per point.
ErrorNorms error_norms(const Eigen::MatrixXd& computed, const Eigen::MatrixXd& exact);

/// Root-mean-square and max of a difference (absolute, not relative).
struct AbsoluteNorms {
  double max = 0.0;
  double l2 = 0.0;
};
AbsoluteNorms absolute_norms(const Eigen::VectorXd& diff);

/// Number of steps of size k reaching t exactly; throws if k does not divide t.
int step_count(double t, double k);

/// One forward Euler step u + k alpha E_h Delta_h u on the full point set.
Eigen::VectorXd diffusion_step_fe(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                  const Eigen::VectorXd& u, double alpha, double k);

/// Forward Euler on primary values with the reduced operator; returns primary values at t_end.
Eigen::VectorXd diffusion_solve_fe(const SparseOperator& lb_red, const Eigen::VectorXd& u0_p, double alpha,
                                   double k, double t_end);

/// BDF2 on primary values, first step backward Euler. Both implicit matrices
/// are factorized once.
Eigen::VectorXd diffusion_solve_bdf2(const SparseOperator& lb_red, const Eigen::VectorXd& u0_p, double alpha,
                                     double k, double t_end);

/// Forward Euler on the full point set; `u0` need not be equilibrated.
Eigen::VectorXd diffusion_full_fe(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                  const Eigen::VectorXd& u0, double alpha, double k, double t_end);

/// BDF2 (backward Euler start) on the full point set. Each implicit step
/// u = w + c E_h z solves the n_p system (I - c Delta_h E_h) z = Delta_h w.
Eigen::VectorXd diffusion_full_bdf2(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                    const Eigen::VectorXd& u0, double alpha, double k, double t_end);

struct PoissonResult {
  Eigen::VectorXd u;  ///< primary values, zero sum
  double beta = 0.0;
};

PoissonResult poisson_solve(const SparseOperator& lb_red, const Eigen::VectorXd& f_p);

std::vector<Eigenpair> eigenvalues_reduced_lb(const SparseOperator& lb_red, int count,
                                              const EigenOptions& options = {});

/// Increments at primary points (n_p x m) for a state on all points (n_total x m).
using MacCormackRhs = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& state, Difference kind)>;
/// Extra corrector increments at primary points computed from the old state.
using CorrectorTerm = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& state)>;

/// Predictor with forward differences, corrector with backward differences;
/// increments are equilibrated to secondary points. Throws SolverError on a
/// non-finite state.
Eigen::MatrixXd maccormack_step(const SurfaceDiscretization& disc, const Eigen::MatrixXd& state,
                                const MacCormackRhs& rhs, double k, const CorrectorTerm& extra = {});

/// One output record of a time-dependent run.
struct RunRecord {
  double time = 0.0;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name) const;
};

/// Rotation with latitude oscillation on the unit sphere.
Vec3 advection_velocity(const Vec3& p);
/// Exact transported state, initial value r^2 = x^2 + y^2.
double advection_exact(const Vec3& p, double t);

/// Advects on the unit sphere centered at the origin; one record per output
/// time with rel_max, rel_l2 and the relative error of the surface integral.
std::vector<RunRecord> advection_solve(const SurfaceDiscretization& disc, double k,
                                       const std::vector<double>& output_times);

/// A full fine-grid field sampled at every point of the coarse discretization.
/// Coarse grid lines are fine grid lines, so a coarse cut point normally is a
/// fine cut point too; otherwise the value is interpolated biquadratically on
/// the chart stencil of the nearest fine primary point.
Eigen::VectorXd transfer_to_coarse(const SurfaceDiscretization& fine, const Eigen::VectorXd& u_fine,
                                   const SurfaceDiscretization& coarse);

struct ResolventReport {
  double sigma = 0.0;  ///< k / h^2
  bool invertible = false;
  double min_entry = 0.0;
  double max_rowsum_dev = 0.0;
};

/// Entrywise scan of (I - k L)^{-1} for a square operator L.
ResolventReport resolvent_report(const SparseOperator& lb_red, double k, double sigma);

}  // namespace cutsurf
