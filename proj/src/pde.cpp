#include "cutsurf/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "cutsurf/errors.hpp"

namespace cutsurf {

ErrorNorms error_norms(const Eigen::VectorXd& computed, const Eigen::VectorXd& exact) {
  if (computed.size() != exact.size()) throw std::invalid_argument("error_norms: size mismatch");
  const double emax = exact.lpNorm<Eigen::Infinity>();
  if (emax == 0.0) throw std::domain_error("error_norms: exact field is zero");
  const Eigen::VectorXd d = computed - exact;
  return {d.lpNorm<Eigen::Infinity>() / emax, d.norm() / exact.norm()};
}

ErrorNorms error_norms(const Eigen::MatrixXd& computed, const Eigen::MatrixXd& exact) {
  if (computed.rows() != exact.rows() || computed.cols() != exact.cols())
    throw std::invalid_argument("error_norms: size mismatch");
  const double emax = exact.rowwise().norm().maxCoeff();
  if (emax == 0.0) throw std::domain_error("error_norms: exact field is zero");
  const Eigen::MatrixXd d = computed - exact;
  return {d.rowwise().norm().maxCoeff() / emax, d.norm() / exact.norm()};
}

AbsoluteNorms absolute_norms(const Eigen::VectorXd& diff) {
  if (diff.size() == 0) return {};
  return {diff.lpNorm<Eigen::Infinity>(), diff.norm() / std::sqrt(static_cast<double>(diff.size()))};
}

int step_count(double t, double k) {
  if (!(k > 0) || !(t >= 0)) throw std::invalid_argument("step_count: need k > 0 and t >= 0");
  const double n = std::round(t / k);
  if (std::abs(n * k - t) > 1e-9 * std::max(1.0, t)) {
    std::ostringstream msg;
    msg << "time step " << k << " does not divide t = " << t;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(n);
}

Eigen::VectorXd diffusion_step_fe(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                  const Eigen::VectorXd& u, double alpha, double k) {
  return u + k * alpha * disc.extend(lb.apply(u));
}

Eigen::VectorXd diffusion_solve_fe(const SparseOperator& lb_red, const Eigen::VectorXd& u0_p, double alpha,
                                   double k, double t_end) {
  const int steps = step_count(t_end, k);
  Eigen::VectorXd u = u0_p;
  Eigen::VectorXd du(u.size());
  const SparseMatrix& a = lb_red.matrix();
  for (int n = 0; n < steps; ++n) {
    du.noalias() = a * u;
    u += (k * alpha) * du;
  }
  return u;
}

namespace {

SparseOperator shifted_identity(const SparseOperator& a, double scale) {
  SparseMatrix m(a.rows(), a.cols());
  m.setIdentity();
  m -= scale * a.matrix();
  return SparseOperator(std::move(m));
}

}  // namespace

Eigen::VectorXd diffusion_solve_bdf2(const SparseOperator& lb_red, const Eigen::VectorXd& u0_p, double alpha,
                                     double k, double t_end) {
  const int steps = step_count(t_end, k);
  if (steps == 0) return u0_p;
  const Factorization euler(shifted_identity(lb_red, k * alpha));
  Eigen::VectorXd prev = u0_p;
  Eigen::VectorXd u = euler.solve(u0_p);
  if (steps == 1) return u;
  const Factorization bdf(shifted_identity(lb_red, 2.0 / 3.0 * k * alpha));
  for (int n = 1; n < steps; ++n) {
    Eigen::VectorXd next = bdf.solve((4.0 / 3.0) * u - (1.0 / 3.0) * prev);
    prev = std::move(u);
    u = std::move(next);
  }
  return u;
}

Eigen::VectorXd diffusion_full_fe(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                  const Eigen::VectorXd& u0, double alpha, double k, double t_end) {
  if (u0.size() != disc.n_total()) throw std::invalid_argument("diffusion_full_fe: expected a full field");
  const int steps = step_count(t_end, k);
  Eigen::VectorXd u = u0;
  for (int n = 0; n < steps; ++n) u += (k * alpha) * disc.extend(lb.apply(u));
  return u;
}

Eigen::VectorXd diffusion_full_bdf2(const SurfaceDiscretization& disc, const SparseOperator& lb,
                                    const Eigen::VectorXd& u0, double alpha, double k, double t_end) {
  if (u0.size() != disc.n_total()) throw std::invalid_argument("diffusion_full_bdf2: expected a full field");
  const int steps = step_count(t_end, k);
  if (steps == 0) return u0;
  const SparseOperator red = reduced_operator(lb, disc);
  auto implicit_step = [&](const Factorization& lu, double c, const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return w + c * disc.extend(lu.solve(lb.apply(w)));
  };
  Eigen::VectorXd prev = u0;
  Eigen::VectorXd u = implicit_step(Factorization(shifted_identity(red, k * alpha)), k * alpha, u0);
  if (steps == 1) return u;
  const double c = 2.0 / 3.0 * k * alpha;
  const Factorization bdf(shifted_identity(red, c));
  for (int n = 1; n < steps; ++n) {
    Eigen::VectorXd next = implicit_step(bdf, c, (4.0 / 3.0) * u - (1.0 / 3.0) * prev);
    prev = std::move(u);
    u = std::move(next);
  }
  return u;
}

PoissonResult poisson_solve(const SparseOperator& lb_red, const Eigen::VectorXd& f_p) {
  const BorderedSolution s = bordered_solve(lb_red, f_p);
  return {s.u, s.beta};
}

std::vector<Eigenpair> eigenvalues_reduced_lb(const SparseOperator& lb_red, int count,
                                              const EigenOptions& options) {
  return smallest_eigenvalues(lb_red, count, options);
}

Eigen::MatrixXd maccormack_step(const SurfaceDiscretization& disc, const Eigen::MatrixXd& state,
                                const MacCormackRhs& rhs, double k, const CorrectorTerm& extra) {
  if (state.rows() != disc.n_total()) throw std::invalid_argument("maccormack_step: expected a full field");
  const Eigen::MatrixXd predictor = state + k * disc.extend(rhs(state, Difference::forward));
  Eigen::MatrixXd next = 0.5 * (state + predictor) + (0.5 * k) * disc.extend(rhs(predictor, Difference::backward));
  if (extra) next += disc.extend(extra(state));
  if (!next.allFinite()) throw SolverError("maccormack_step: non-finite state");
  return next;
}

double RunRecord::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics)
    if (key == name) return value;
  throw std::out_of_range("RunRecord: no metric '" + name + "'");
}

Vec3 advection_velocity(const Vec3& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double r2 = x * x + y * y;
  return {x * x * z - y, x + x * y * z, -x * r2};
}

double advection_exact(const Vec3& p, double t) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double r2 = x * x + y * y;
  const double s = z + y * (1.0 - std::cos(t)) + x * std::sin(t);
  const double den = s * s + r2;
  return den == 0.0 ? 0.0 : r2 / den;
}

std::vector<RunRecord> advection_solve(const SurfaceDiscretization& disc, double k,
                                       const std::vector<double>& output_times) {
  const ChartVelocity vel = advection_coefficients(disc, advection_velocity);
  const QuadratureWeights quad = quadrature_weights(disc, kDefaultPartitionAngleDeg * std::numbers::pi / 180.0);
  const int n_p = disc.n_primary();
  auto rhs = [&](const Eigen::MatrixXd& phi, Difference kind) -> Eigen::MatrixXd {
    const Eigen::MatrixXd d1 = chart_difference(disc, phi, 0, kind);
    const Eigen::MatrixXd d2 = chart_difference(disc, phi, 1, kind);
    Eigen::MatrixXd f(n_p, 1);
    f.col(0) = -(vel.v.col(0).cwiseProduct(d1.col(0)) + vel.v.col(1).cwiseProduct(d2.col(0)));
    return f;
  };
  auto exact_at = [&](double t) {
    Eigen::VectorXd e(disc.n_total());
    for (int i = 0; i < disc.n_total(); ++i) e[i] = advection_exact(disc.point(i).position, t);
    return e;
  };

  Eigen::MatrixXd phi(disc.n_total(), 1);
  phi.col(0) = exact_at(0.0);
  std::vector<double> times = output_times;
  std::sort(times.begin(), times.end());
  std::vector<RunRecord> out;
  int done = 0;
  for (double t_out : times) {
    const int target = step_count(t_out, k);
    for (; done < target; ++done) {
      try {
        phi = maccormack_step(disc, phi, rhs, k);
      } catch (const SolverError&) {
        std::ostringstream msg;
        msg << "advection diverged at step " << done + 1;
        throw SolverError(msg.str());
      }
    }
    const Eigen::VectorXd e = exact_at(t_out);
    const ErrorNorms err = error_norms(Eigen::VectorXd(phi.col(0)), e);
    const double i_exact = surface_integral(quad, e);
    const double i_comp = surface_integral(quad, Eigen::VectorXd(phi.col(0)));
    out.push_back({t_out, {{"rel_max", err.rel_max}, {"rel_l2", err.rel_l2}, {"integral", (i_comp - i_exact) / i_exact}}});
  }
  return out;
}

Eigen::VectorXd transfer_to_coarse(const SurfaceDiscretization& fine, const Eigen::VectorXd& u_fine,
                                   const SurfaceDiscretization& coarse) {
  if (u_fine.size() != fine.n_total()) throw std::invalid_argument("transfer_to_coarse: expected a full fine field");
  const Grid3& g = fine.grid();
  const double h = g.h;
  const std::int64_t w = std::max({g.n_cells[0], g.n_cells[1], g.n_cells[2]}) + 1;
  auto key = [&](const GridIndex& q) { return (q[0] * w + q[1]) * w + q[2]; };
  auto line_key = [&](int axis, std::int64_t i1, std::int64_t i2) { return (axis * w + i1) * w + i2; };

  std::unordered_map<std::int64_t, int> primary_at;
  std::unordered_map<std::int64_t, std::vector<int>> on_line;
  primary_at.reserve(static_cast<std::size_t>(fine.n_primary()));
  for (int i = 0; i < fine.n_total(); ++i) {
    const CutPoint& p = fine.point(i);
    if (p.is_primary()) primary_at.emplace(key(p.closest), i);
    on_line[line_key(p.axis, p.base[chart_axis(p.axis, 0)], p.base[chart_axis(p.axis, 1)])].push_back(i);
  }

  // Index of the fine grid line through a coarse frozen coordinate, or -1.
  auto fine_index = [&](int d, double x) -> std::int64_t {
    const double s = (x - g.origin[d]) / h;
    const double r = std::round(s);
    return std::abs(s - r) < 1e-9 ? static_cast<std::int64_t>(r) : -1;
  };

  // Same cut point on a shared grid line; otherwise biquadratic interpolation
  // on the chart stencil of the nearest fine primary with a complete stencil.
  auto matched = [&](const CutPoint& cp) -> int {
    const int c1 = chart_axis(cp.axis, 0), c2 = chart_axis(cp.axis, 1);
    const std::int64_t i1 = fine_index(c1, cp.position[c1]), i2 = fine_index(c2, cp.position[c2]);
    if (i1 < 0 || i2 < 0) return -1;
    const auto it = on_line.find(line_key(cp.axis, i1, i2));
    if (it == on_line.end()) return -1;
    for (int id : it->second)
      if (std::abs(fine.point(id).position[cp.axis] - cp.position[cp.axis]) <= 1e-6 * h) return id;
    return -1;
  };
  auto complete = [](const CutPoint& p) {
    return std::all_of(p.chart.begin(), p.chart.end(), [](int q) { return q >= 0; });
  };

  Eigen::VectorXd out(coarse.n_total());
  for (int c = 0; c < coarse.n_total(); ++c) {
    const CutPoint& cp = coarse.point(c);
    if (const int same = matched(cp); same >= 0) {
      out[c] = u_fine[same];
      continue;
    }
    const Vec3& x = cp.position;
    GridIndex near{};
    for (int d = 0; d < 3; ++d) near[d] = static_cast<int>(std::lround((x[d] - g.origin[d]) / h));
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj)
        for (int dk = -2; dk <= 2; ++dk) {
          const GridIndex q{near[0] + di, near[1] + dj, near[2] + dk};
          if (std::min({q[0], q[1], q[2]}) < 0) continue;
          const auto it = primary_at.find(key(q));
          if (it == primary_at.end() || !complete(fine.point(it->second))) continue;
          const double dist = (fine.point(it->second).position - x).norm();
          if (dist < best_dist) {
            best = it->second;
            best_dist = dist;
          }
        }
    if (best < 0) throw DiscretizationError("transfer_to_coarse: no fine primary point near a coarse point");
    const CutPoint& p = fine.point(best);
    const int c1 = chart_axis(p.axis, 0), c2 = chart_axis(p.axis, 1);
    const auto w1 = quadratic_weights((x[c1] - p.position[c1]) / h);
    const auto w2 = quadratic_weights((x[c2] - p.position[c2]) / h);
    double v = 0.0;
    for (int d1 = -1; d1 <= 1; ++d1)
      for (int d2 = -1; d2 <= 1; ++d2) v += w1[d1 + 1] * w2[d2 + 1] * u_fine[p.chart[stencil_slot(d1, d2)]];
    out[c] = v;
  }
  return out;
}

ResolventReport resolvent_report(const SparseOperator& lb_red, double k, double sigma) {
  ResolventReport rep;
  rep.sigma = sigma;
  const Eigen::Index n = lb_red.rows();
  if (lb_red.cols() != n) throw std::invalid_argument("resolvent_report: operator must be square");
  std::unique_ptr<Factorization> lu;
  try {
    lu = std::make_unique<Factorization>(shifted_identity(lb_red, k));
  } catch (const SingularMatrixError&) {
    rep.invertible = false;
    rep.min_entry = std::numeric_limits<double>::quiet_NaN();
    rep.max_rowsum_dev = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.invertible = true;
  rep.min_entry = std::numeric_limits<double>::infinity();
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
  constexpr Eigen::Index kBlock = 256;
  for (Eigen::Index c0 = 0; c0 < n; c0 += kBlock) {
    const Eigen::Index m = std::min(kBlock, n - c0);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, m);
    for (Eigen::Index j = 0; j < m; ++j) rhs(c0 + j, j) = 1.0;
    const Eigen::MatrixXd cols = lu->solve_block(rhs);
    rep.min_entry = std::min(rep.min_entry, cols.minCoeff());
    rowsum += cols.rowwise().sum();
  }
  rep.max_rowsum_dev = (rowsum.array() - 1.0).abs().maxCoeff();
  return rep;
}

}  // namespace cutsurf
