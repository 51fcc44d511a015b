#include "cutsurf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "cutsurf/errors.hpp"

namespace cutsurf {

double bump(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double e = r2 / (r2 - 1.0);
  return e < -700.0 ? 0.0 : std::exp(e);
}

namespace {

double sigma(const Vec3& n, int axis, double theta) {
  const double c = std::min(1.0, std::abs(n[axis]));
  return bump(std::acos(c) / theta);
}

}  // namespace

double pou_weight(const Vec3& n, int axis, double theta) {
  const double total = sigma(n, 0, theta) + sigma(n, 1, theta) + sigma(n, 2, theta);
  if (total <= 0.0) throw Error("pou_weight: partition angle too small to cover this normal");
  return sigma(n, axis, theta) / total;
}

QuadratureWeights quadrature_weights(const SurfaceDiscretization& disc, double theta) {
  const double c = std::cos(theta);
  if (!(disc.eta() < c && c < 1.0 / std::sqrt(3.0)))
    throw std::invalid_argument("quadrature_weights: need eta < cos(theta) < 1/sqrt(3)");
  QuadratureWeights q;
  q.eta = disc.eta();
  q.theta = theta;
  q.w.resize(disc.n_total());
  const double h2 = disc.h() * disc.h();
  const Grid3& grid = disc.grid();
  for (int i = 0; i < disc.n_total(); ++i) {
    const CutPoint& p = disc.point(i);
    // A cut at a grid node is a member of every admissible Gamma_nu at once.
    const bool at_node = p.position == grid.node(p.closest);
    double w = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      if (axis != p.axis && !(at_node && std::abs(p.normal[axis]) >= disc.eta())) continue;
      w += pou_weight(p.normal, axis, theta) / std::abs(p.normal[axis]);
    }
    q.w[i] = w * h2;
  }
  return q;
}

double surface_integral(const QuadratureWeights& weights, const Eigen::VectorXd& f) {
  if (f.size() != weights.w.size()) throw std::invalid_argument("surface_integral: size mismatch");
  return weights.w.dot(f);
}

double surface_integral(const SurfaceDiscretization& disc, const QuadratureWeights& weights,
                        const std::function<double(const Vec3&)>& f) {
  Eigen::VectorXd v(disc.n_total());
  for (int i = 0; i < disc.n_total(); ++i) v[i] = f(disc.point(i).position);
  return surface_integral(weights, v);
}

}  // namespace cutsurf
