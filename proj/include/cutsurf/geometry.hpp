#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cutsurf {

using Vec3 = Eigen::Vector3d;

enum class SurfaceKind { sphere, ellipsoid, cassini_oval, user_supplied };

std::string to_string(SurfaceKind kind);

/// A closed surface given as the zero set of phi, with phi < 0 inside.
///
/// The analytic catalog carries closed-form gradients. User surfaces supply
/// phi and optionally grad phi; a missing gradient falls back to central
/// differences with the configured step.
class LevelSetSurface {
 public:
  using ScalarFn = std::function<double(const Vec3&)>;
  using GradientFn = std::function<Vec3(const Vec3&)>;

  static LevelSetSurface sphere(double radius, const Vec3& center = Vec3::Zero());
  static LevelSetSurface ellipsoid(double a, double b, double c);
  /// Cassini oval (x^2+y^2+z^2+a^2)^2 - 4a^2(x^2+y^2) = b^4 rotated about z.
  static LevelSetSurface cassini_oval(double a, double b);
  static LevelSetSurface user(std::string name, ScalarFn phi, GradientFn gradient = {},
                              double fd_step = 1e-6, double c0 = 1e-8);

  double phi(const Vec3& p) const { return phi_(p); }
  Vec3 gradient(const Vec3& p) const;

  SurfaceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& parameters() const { return params_; }
  double c0() const { return c0_; }

  /// Sphere only: center and radius.
  const Vec3& center() const { return center_; }
  double radius() const;

  /// Central-difference step used when no analytic gradient is given.
  void set_fd_step(double step) { fd_step_ = step; }

 private:
  LevelSetSurface() = default;

  SurfaceKind kind_ = SurfaceKind::user_supplied;
  std::string name_;
  std::vector<double> params_;
  Vec3 center_ = Vec3::Zero();
  ScalarFn phi_;
  GradientFn grad_;
  double fd_step_ = 1e-6;
  double c0_ = 1e-8;
};

double eval_phi(const LevelSetSurface& surface, const Vec3& p);

/// Outward unit normal grad phi / |grad phi|.
/// Throws DegenerateGradientError when |grad phi| < c0.
Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& p);

/// Locates the surface crossing on the segment p_in -> p_out by bisection.
/// `tol` is an absolute length tolerance along the segment. Coordinates in
/// which the endpoints agree are copied exactly into the result.
Vec3 find_cut(const LevelSetSurface& surface, const Vec3& p_in, const Vec3& p_out, double tol);

/// Scalar bisection on [lo, hi] for f with f(lo) <= 0 < f(hi) or the reverse.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter = 200);

}  // namespace cutsurf
