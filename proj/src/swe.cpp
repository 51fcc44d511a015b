#include "cutsurf/swe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "cutsurf/errors.hpp"
#include "cutsurf/quadrature.hpp"

namespace cutsurf {

double SweParameters::u0() const { return 2.0 * std::numbers::pi / 12.0; }
double SweParameters::omega() const { return omega_per_s * day_s; }
double SweParameters::phi0() const { return phi0_m2_s2 * (day_s / radius_m) * (day_s / radius_m); }

Vec3 williamson2_velocity(const SweParameters& p, const Vec3& x) {
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
  return p.u0() * Vec3(-ca * x.y(), ca * x.x() + sa * x.z(), -sa * x.y());
}

double williamson2_phi(const SweParameters& p, const Vec3& x) {
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
  const double s = -sa * x.x() + ca * x.z();
  const double u0 = p.u0();
  return p.phi0() - (p.omega() * u0 + 0.5 * u0 * u0) * s * s;
}

double coriolis(const SweParameters& p, const Vec3& x) {
  return 2.0 * p.omega() * (-std::sin(p.alpha) * x.x() + std::cos(p.alpha) * x.z());
}

SweState williamson2(const SurfaceDiscretization& disc, const SweParameters& params) {
  SweState s;
  s.q.resize(disc.n_total(), 4);
  for (int i = 0; i < disc.n_total(); ++i) {
    const Vec3& x = disc.point(i).position;
    const double phi = williamson2_phi(params, x);
    s.q(i, 0) = phi;
    s.q.block<1, 3>(i, 1) = phi * williamson2_velocity(params, x).transpose();
  }
  return s;
}

Eigen::MatrixXd swe_rhs(const SurfaceDiscretization& disc, const SweParameters& params, const Eigen::MatrixXd& q,
                        Difference kind) {
  if (q.rows() != disc.n_total() || q.cols() != 4) throw std::invalid_argument("swe_rhs: expected n_total x 4");
  if (kind == Difference::centered) throw std::invalid_argument("swe_rhs: one-sided differences only");
  const double h = disc.h();
  const int step = kind == Difference::forward ? 1 : -1;
  const double sgn = static_cast<double>(step);

  Eigen::MatrixXd out(disc.n_primary(), 4);
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const int c1 = chart_axis(p.axis, 0), c2 = chart_axis(p.axis, 1);
    const int q1 = p.chart[stencil_slot(step, 0)];
    const int q2 = p.chart[stencil_slot(0, step)];
    if (q(i, 0) <= 0.0 || q(q1, 0) <= 0.0 || q(q2, 0) <= 0.0) {
      std::ostringstream msg;
      msg << "swe_rhs: non-positive geopotential near primary point " << i;
      throw SolverError(msg.str());
    }
    // One-sided difference (x_q - x_p)/h oriented along +xi.
    auto diff = [&](double at_q, double at_p) { return sgn * (at_q - at_p) / h; };

    const double phi = q(i, 0);
    const Vec3 m = q.block<1, 3>(i, 1).transpose();
    const Vec3 m1 = q.block<1, 3>(q1, 1).transpose();
    const Vec3 m2 = q.block<1, 3>(q2, 1).transpose();

    const Vec3& x = p.position;
    const double z2 = x[p.axis] * x[p.axis];
    const double g1 = x[c1] / z2, g2 = x[c2] / z2;

    out(i, 0) = -(diff(m1[c1], m[c1]) + diff(m2[c2], m[c2])) - g1 * m[c1] - g2 * m[c2];

    // Momentum flux (Phi v_j) v = M_j M / Phi along each chart direction.
    Vec3 flux = (m1[c1] * m1 / q(q1, 0) - m[c1] * m / phi) * (sgn / h) +
           (m2[c2] * m2 / q(q2, 0) - m[c2] * m / phi) * (sgn / h);
    flux[c1] += 0.5 * diff(q(q1, 0) * q(q1, 0), phi * phi);
    flux[c2] += 0.5 * diff(q(q2, 0) * q(q2, 0), phi * phi);
    const Vec3& n = p.normal;
    const Vec3 inc = -tangential_projection(flux, n) - coriolis(params, x) * n.cross(m) -
                     (g1 * m[c1] + g2 * m[c2]) / phi * m;
    out.block<1, 3>(i, 1) = inc.transpose();
  }
  return out;
}

std::vector<RunRecord> swe_solve(const SurfaceDiscretization& disc, const SweParameters& params, double nu,
                                 double k, const std::vector<double>& output_times) {
  const SweState exact = williamson2(disc, params);
  const QuadratureWeights quad = quadrature_weights(disc, kDefaultPartitionAngleDeg * std::numbers::pi / 180.0);
  auto v2 = [](const Eigen::MatrixXd& q) -> Eigen::VectorXd {
    return q.rightCols(3).rowwise().squaredNorm().cwiseQuotient(q.col(0).cwiseProduct(q.col(0)));
  };
  const double int_v2_exact = surface_integral(quad, v2(exact.q));
  const double int_phi_exact = surface_integral(quad, Eigen::VectorXd(exact.q.col(0)));

  auto rhs = [&](const Eigen::MatrixXd& q, Difference kind) { return swe_rhs(disc, params, q, kind); };
  auto viscosity = [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
    Eigen::MatrixXd v = artificial_viscosity(disc, q, nu, k);
    for (int i = 0; i < disc.n_primary(); ++i) {
      const Vec3 w = v.block<1, 3>(i, 1).transpose();
      v.block<1, 3>(i, 1) = tangential_projection(w, disc.point(i).normal).transpose();
    }
    return v;
  };

  Eigen::MatrixXd q = exact.q;
  std::vector<double> times = output_times;
  std::sort(times.begin(), times.end());
  std::vector<RunRecord> out;
  int done = 0;
  for (double t_out : times) {
    const int target = step_count(t_out, k);
    for (; done < target; ++done) {
      try {
        q = maccormack_step(disc, q, rhs, k, viscosity);
      } catch (const SolverError& e) {
        std::ostringstream msg;
        msg << "shallow water run aborted at step " << done + 1 << ": " << e.what();
        throw SolverError(msg.str());
      }
    }
    const ErrorNorms em = error_norms(Eigen::MatrixXd(q.rightCols(3)), Eigen::MatrixXd(exact.q.rightCols(3)));
    const ErrorNorms ep = error_norms(Eigen::VectorXd(q.col(0)), Eigen::VectorXd(exact.q.col(0)));
    const double int_v2 = surface_integral(quad, v2(q));
    const double int_phi = surface_integral(quad, Eigen::VectorXd(q.col(0)));
    out.push_back({t_out,
                   {{"max_phiv", em.rel_max},
                    {"max_phi", ep.rel_max},
                    {"l2_phiv", em.rel_l2},
                    {"l2_phi", ep.rel_l2},
                    {"int_v2", (int_v2 - int_v2_exact) / int_v2_exact},
                    {"int_phi", (int_phi - int_phi_exact) / int_phi_exact}}});
  }
  return out;
}

}  // namespace cutsurf
