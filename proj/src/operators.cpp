#include "cutsurf/operators.hpp"

#include <cmath>
#include <sstream>

#include "cutsurf/errors.hpp"

namespace cutsurf {

namespace {

int neighbor(const CutPoint& p, int dir, int step) {
  return dir == 0 ? p.chart[stencil_slot(step, 0)] : p.chart[stencil_slot(0, step)];
}

void missing_neighbor(int id, int slot) {
  std::ostringstream msg;
  msg << "primary point " << id << " lacks the chart neighbor at offset (" << slot / 3 - 1 << ", " << slot % 3 - 1
      << ") used by its stencil";
  throw DiscretizationError(msg.str());
}

}  // namespace

ChartMetric chart_metric(const LevelSetSurface& surface, const SurfaceDiscretization& disc) {
  const int n = disc.n_total();
  ChartMetric m;
  m.slope.resize(n, 2);
  m.g.resize(n);
  m.g_inv.resize(n, 3);
  m.a.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const CutPoint& p = disc.point(i);
    const Vec3 grad = surface.gradient(p.position);
    const double gz = grad[p.axis];
    if (std::abs(gz) < surface.c0()) throw DegenerateGradientError("chart_metric: vanishing chart gradient component");
    const double s1 = -grad[chart_axis(p.axis, 0)] / gz;
    const double s2 = -grad[chart_axis(p.axis, 1)] / gz;
    const double g = 1.0 + s1 * s1 + s2 * s2;
    const double sg = std::sqrt(g);
    m.slope.row(i) << s1, s2;
    m.g[i] = g;
    m.g_inv.row(i) << (1.0 + s2 * s2) / g, -s1 * s2 / g, (1.0 + s1 * s1) / g;
    m.a.row(i) = sg * m.g_inv.row(i);
  }
  return m;
}

std::string to_string(LbForm form) { return form == LbForm::divergence ? "div" : "nondiv"; }

LbForm parse_lb_form(const std::string& text) {
  if (text == "div" || text == "divergence") return LbForm::divergence;
  if (text == "nondiv" || text == "nondivergence") return LbForm::nondivergence;
  throw ConfigError("unknown operator form '" + text + "' (expected div or nondiv)");
}

Stencil9 divergence_stencil(const std::array<MetricSample, 9>& a, double sqrt_g, double h) {
  const MetricSample& c = a[stencil_slot(0, 0)];
  const double sign = c.a12 >= 0.0 ? 1.0 : -1.0;
  // Axis coefficients a^{ii} - sign * a^{12}, averaged with the center.
  auto axis_coeff = [&](int d1, int d2, bool first) {
    const MetricSample& q = a[stencil_slot(d1, d2)];
    const double at_q = (first ? q.a11 : q.a22) - sign * q.a12;
    const double at_c = (first ? c.a11 : c.a22) - sign * c.a12;
    return 0.5 * (at_q + at_c);
  };
  auto diag_coeff = [&](int d1, int d2) { return 0.5 * (a[stencil_slot(d1, d2)].a12 + c.a12); };

  Stencil9 w{};
  auto add = [&](int d1, int d2, double coeff) {
    w[stencil_slot(d1, d2)] += coeff;
    w[stencil_slot(0, 0)] -= coeff;
  };
  add(1, 0, axis_coeff(1, 0, true));
  add(-1, 0, axis_coeff(-1, 0, true));
  add(0, 1, axis_coeff(0, 1, false));
  add(0, -1, axis_coeff(0, -1, false));
  if (sign > 0) {
    add(1, 1, diag_coeff(1, 1));
    add(-1, -1, diag_coeff(-1, -1));
  } else {
    add(-1, 1, -diag_coeff(-1, 1));
    add(1, -1, -diag_coeff(1, -1));
  }
  const double scale = 1.0 / (sqrt_g * h * h);
  for (double& x : w) x *= scale;
  return w;
}

Stencil9 nondivergence_stencil(double g11, double g12, double g22, double b1, double b2, double h) {
  const double sign = g12 >= 0.0 ? 1.0 : -1.0;
  const double h2 = h * h;
  Stencil9 w{};
  auto add = [&](int d1, int d2, double coeff) {
    w[stencil_slot(d1, d2)] += coeff;
    w[stencil_slot(0, 0)] -= coeff;
  };
  add(1, 0, (g11 - sign * g12) / h2);
  add(-1, 0, (g11 - sign * g12) / h2);
  add(0, 1, (g22 - sign * g12) / h2);
  add(0, -1, (g22 - sign * g12) / h2);
  if (sign > 0) {
    add(1, 1, g12 / h2);
    add(-1, -1, g12 / h2);
  } else {
    add(-1, 1, -g12 / h2);
    add(1, -1, -g12 / h2);
  }
  w[stencil_slot(1, 0)] += b1 / (2 * h);
  w[stencil_slot(-1, 0)] -= b1 / (2 * h);
  w[stencil_slot(0, 1)] += b2 / (2 * h);
  w[stencil_slot(0, -1)] -= b2 / (2 * h);
  return w;
}

namespace {

SparseOperator assemble_rows(const SurfaceDiscretization& disc, const std::function<Stencil9(int)>& row_weights) {
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(disc.n_primary()) * 9);
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const Stencil9 w = row_weights(i);
    for (int s = 0; s < 9; ++s) {
      if (w[s] == 0.0) continue;
      if (p.chart[s] < 0) missing_neighbor(i, s);
      entries.emplace_back(i, p.chart[s], w[s]);
    }
  }
  return SparseOperator::from_triplets(disc.n_primary(), disc.n_total(), entries);
}

}  // namespace

SparseOperator lb_divergence_rows(const SurfaceDiscretization& disc, const ChartMetric& metric) {
  if (metric.g.size() != disc.n_total()) throw std::invalid_argument("lb_divergence_rows: metric size mismatch");
  return assemble_rows(disc, [&](int i) {
    const CutPoint& p = disc.point(i);
    // A missing diagonal neighbor takes the center sample; the stencil uses only one diagonal.
    std::array<MetricSample, 9> a;
    for (int s = 0; s < 9; ++s) {
      const auto r = metric.a.row(p.chart[s] >= 0 ? p.chart[s] : i);
      a[s] = {r[0], r[1], r[2]};
    }
    return divergence_stencil(a, std::sqrt(metric.g[i]), disc.h());
  });
}

SparseOperator lb_nondivergence_rows(const SurfaceDiscretization& disc, const LevelSetSurface& surface) {
  if (surface.kind() != SurfaceKind::sphere)
    throw std::invalid_argument("non-divergence form needs closed-form sphere coefficients");
  const double r2 = surface.radius() * surface.radius();
  return assemble_rows(disc, [&](int i) {
    const CutPoint& p = disc.point(i);
    const Vec3 x = p.position - surface.center();
    const double x1 = x[chart_axis(p.axis, 0)], x2 = x[chart_axis(p.axis, 1)];
    return nondivergence_stencil((r2 - x1 * x1) / r2, -x1 * x2 / r2, (r2 - x2 * x2) / r2, -2 * x1 / r2,
                                 -2 * x2 / r2, disc.h());
  });
}

SparseOperator laplace_beltrami(const SurfaceDiscretization& disc, const LevelSetSurface& surface, LbForm form) {
  if (form == LbForm::divergence) return lb_divergence_rows(disc, chart_metric(surface, disc));
  return lb_nondivergence_rows(disc, surface);
}

SparseOperator reduced_operator(const SparseOperator& a, const SurfaceDiscretization& disc) {
  if (a.cols() != disc.n_total()) throw std::invalid_argument("reduced_operator: columns must index all points");
  return SparseOperator(SparseMatrix(a.matrix() * disc.extension().matrix()));
}

ChartVelocity advection_coefficients(const SurfaceDiscretization& disc, const VelocityField& velocity) {
  ChartVelocity out;
  out.v.resize(disc.n_primary(), 2);
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const Vec3 v = velocity(p.position);
    out.v.row(i) << v[chart_axis(p.axis, 0)], v[chart_axis(p.axis, 1)];
    const double norm = v.norm();
    if (norm > 0) out.max_normal_ratio = std::max(out.max_normal_ratio, std::abs(v.dot(p.normal)) / norm);
  }
  return out;
}

Eigen::MatrixXd chart_difference(const SurfaceDiscretization& disc, const Eigen::MatrixXd& field, int dir,
                                 Difference kind) {
  if (field.rows() != disc.n_total()) throw std::invalid_argument("chart_difference: expected a full field");
  if (dir != 0 && dir != 1) throw std::invalid_argument("chart_difference: direction must be 0 or 1");
  const double h = disc.h();
  Eigen::MatrixXd out(disc.n_primary(), field.cols());
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const int plus = neighbor(p, dir, 1), minus = neighbor(p, dir, -1);
    switch (kind) {
      case Difference::forward: out.row(i) = (field.row(plus) - field.row(i)) / h; break;
      case Difference::backward: out.row(i) = (field.row(i) - field.row(minus)) / h; break;
      case Difference::centered: out.row(i) = (field.row(plus) - field.row(minus)) / (2 * h); break;
    }
  }
  return out;
}

Eigen::VectorXd sphere_surface_divergence(const SurfaceDiscretization& disc, const LevelSetSurface& sphere,
                                          const Eigen::MatrixXd& v) {
  if (sphere.kind() != SurfaceKind::sphere) throw std::invalid_argument("sphere_surface_divergence: sphere only");
  if (v.rows() != disc.n_total() || v.cols() != 3) throw std::invalid_argument("sphere_surface_divergence: expected n_total x 3");
  const double h = disc.h();
  Eigen::VectorXd div(disc.n_primary());
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const int c1 = chart_axis(p.axis, 0), c2 = chart_axis(p.axis, 1);
    const Vec3 x = p.position - sphere.center();
    const double z2 = x[p.axis] * x[p.axis];
    const double d1 = (v(neighbor(p, 0, 1), c1) - v(neighbor(p, 0, -1), c1)) / (2 * h);
    const double d2 = (v(neighbor(p, 1, 1), c2) - v(neighbor(p, 1, -1), c2)) / (2 * h);
    div[i] = d1 + d2 + (x[c1] / z2) * v(i, c1) + (x[c2] / z2) * v(i, c2);
  }
  return div;
}

Vec3 tangential_projection(const Vec3& w, const Vec3& n) { return w - w.dot(n) * n; }

Eigen::MatrixXd artificial_viscosity(const SurfaceDiscretization& disc, const Eigen::MatrixXd& field, double nu,
                                     double k) {
  if (field.rows() != disc.n_total()) throw std::invalid_argument("artificial_viscosity: expected a full field");
  const double h = disc.h();
  Eigen::MatrixXd out(disc.n_primary(), field.cols());
  for (int i = 0; i < disc.n_primary(); ++i) {
    const CutPoint& p = disc.point(i);
    const int e = neighbor(p, 0, 1), w = neighbor(p, 0, -1), n = neighbor(p, 1, 1), s = neighbor(p, 1, -1);
    for (Eigen::Index c = 0; c < field.cols(); ++c) {
      const double u = field(i, c);
      const double f1 = (field(e, c) - u) / h, f2 = (field(n, c) - u) / h;
      const double b1 = (u - field(w, c)) / h, b2 = (u - field(s, c)) / h;
      const double fmag = std::hypot(f1, f2), bmag = std::hypot(b1, b2);
      out(i, c) = nu * k * h * (fmag * (f1 + f2) - bmag * (b1 + b2));
    }
  }
  return out;
}

}  // namespace cutsurf
