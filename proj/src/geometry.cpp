#include "cutsurf/geometry.hpp"

#include <cmath>
#include <sstream>

#include "cutsurf/errors.hpp"

namespace cutsurf {

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::ellipsoid: return "ellipsoid";
    case SurfaceKind::cassini_oval: return "cassini";
    case SurfaceKind::user_supplied: return "user";
  }
  return "unknown";
}

LevelSetSurface LevelSetSurface::sphere(double radius, const Vec3& center) {
  if (!(radius > 0)) throw std::invalid_argument("sphere radius must be positive");
  LevelSetSurface s;
  s.kind_ = SurfaceKind::sphere;
  s.name_ = "sphere";
  s.params_ = {radius, center.x(), center.y(), center.z()};
  s.center_ = center;
  const double r2 = radius * radius;
  s.phi_ = [center, r2](const Vec3& p) { return (p - center).squaredNorm() - r2; };
  s.grad_ = [center](const Vec3& p) -> Vec3 { return 2.0 * (p - center); };
  return s;
}

LevelSetSurface LevelSetSurface::ellipsoid(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw std::invalid_argument("ellipsoid semi-axes must be positive");
  LevelSetSurface s;
  s.kind_ = SurfaceKind::ellipsoid;
  s.name_ = "ellipsoid";
  s.params_ = {a, b, c};
  const Vec3 w(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
  s.phi_ = [w](const Vec3& p) { return w.dot(p.cwiseProduct(p)) - 1.0; };
  s.grad_ = [w](const Vec3& p) -> Vec3 { return 2.0 * w.cwiseProduct(p); };
  return s;
}

LevelSetSurface LevelSetSurface::cassini_oval(double a, double b) {
  if (!(a > 0 && b > a)) throw std::invalid_argument("cassini oval needs b > a > 0");
  LevelSetSurface s;
  s.kind_ = SurfaceKind::cassini_oval;
  s.name_ = "cassini";
  s.params_ = {a, b};
  const double a2 = a * a;
  const double b4 = b * b * b * b;
  s.phi_ = [a2, b4](const Vec3& p) {
    const double rho2 = p.squaredNorm();
    const double q = rho2 + a2;
    return q * q - 4.0 * a2 * (p.x() * p.x() + p.y() * p.y()) - b4;
  };
  s.grad_ = [a2](const Vec3& p) -> Vec3 {
    const double rho2 = p.squaredNorm();
    return {4.0 * p.x() * (rho2 - a2), 4.0 * p.y() * (rho2 - a2), 4.0 * p.z() * (rho2 + a2)};
  };
  return s;
}

LevelSetSurface LevelSetSurface::user(std::string name, ScalarFn phi, GradientFn gradient,
                                      double fd_step, double c0) {
  if (!phi) throw std::invalid_argument("user surface needs a phi evaluator");
  LevelSetSurface s;
  s.kind_ = SurfaceKind::user_supplied;
  s.name_ = std::move(name);
  s.phi_ = std::move(phi);
  s.grad_ = std::move(gradient);
  s.fd_step_ = fd_step;
  s.c0_ = c0;
  return s;
}

Vec3 LevelSetSurface::gradient(const Vec3& p) const {
  if (grad_) return grad_(p);
  Vec3 g;
  for (int d = 0; d < 3; ++d) {
    Vec3 plus = p, minus = p;
    plus[d] += fd_step_;
    minus[d] -= fd_step_;
    g[d] = (phi_(plus) - phi_(minus)) / (2.0 * fd_step_);
  }
  return g;
}

double LevelSetSurface::radius() const {
  if (kind_ != SurfaceKind::sphere) throw std::logic_error("radius() requires a sphere");
  return params_[0];
}

double eval_phi(const LevelSetSurface& surface, const Vec3& p) { return surface.phi(p); }

Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& p) {
  const Vec3 g = surface.gradient(p);
  const double len = g.norm();
  if (!(len >= surface.c0())) {
    std::ostringstream msg;
    msg << "degenerate gradient |grad phi| = " << len << " at (" << p.x() << ", " << p.y()
        << ", " << p.z() << ")";
    throw DegenerateGradientError(msg.str());
  }
  return g / len;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0) == (f_hi < 0)) throw BracketError("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(hi - lo) <= tol || mid == lo || mid == hi) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw BracketError("bisect: no convergence within iteration cap");
}

Vec3 find_cut(const LevelSetSurface& surface, const Vec3& p_in, const Vec3& p_out, double tol) {
  const double f_in = surface.phi(p_in);
  const double f_out = surface.phi(p_out);
  if (f_in == 0.0) return p_in;
  if (f_out == 0.0) return p_out;
  if (!(f_in < 0.0 && f_out > 0.0)) {
    std::ostringstream msg;
    msg << "find_cut: segment does not bracket the surface (phi_in=" << f_in
        << ", phi_out=" << f_out << ")";
    throw BracketError(msg.str());
  }
  const Vec3 delta = p_out - p_in;
  const double length = delta.norm();
  auto point_at = [&](double s) {
    Vec3 q = p_in;
    for (int d = 0; d < 3; ++d)
      if (delta[d] != 0.0) q[d] = p_in[d] + s * delta[d];
    return q;
  };
  const double s = bisect([&](double t) { return surface.phi(point_at(t)); }, 0.0, 1.0,
                          tol / length);
  return point_at(s);
}

}  // namespace cutsurf
