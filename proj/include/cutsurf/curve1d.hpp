#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cutsurf/discretization.hpp"
#include "cutsurf/pde.hpp"
#include "cutsurf/sparse.hpp"

namespace cutsurf {

using Vec2 = Eigen::Vector2d;

/// Closed plane curve phi(x, y) = 0, phi < 0 inside.
class LevelSetCurve {
 public:
  using ScalarFn = std::function<double(const Vec2&)>;
  using GradientFn = std::function<Vec2(const Vec2&)>;

  static LevelSetCurve circle(double radius, const Vec2& center = Vec2::Zero());
  static LevelSetCurve ellipse(double a, double b);
  /// r = 1 + amplitude cos(lobes * polar angle).
  static LevelSetCurve perturbed_circle(double amplitude, int lobes);

  double phi(const Vec2& p) const { return phi_(p); }
  Vec2 gradient(const Vec2& p) const { return grad_(p); }
  Vec2 unit_normal(const Vec2& p) const;
  const std::string& name() const { return name_; }

 private:
  LevelSetCurve(std::string name, ScalarFn phi, GradientFn grad)
      : name_(std::move(name)), phi_(std::move(phi)), grad_(std::move(grad)) {}
  std::string name_;
  ScalarFn phi_;
  GradientFn grad_;
};

struct Grid2 {
  Vec2 origin = Vec2::Zero();
  double h = 1.0;
  std::array<int, 2> n_cells{0, 0};

  static Grid2 box(double half_extent, int n);
  double coord(int axis, int i) const { return origin[axis] + h * i; }
  Vec2 node(const std::array<int, 2>& g) const { return {coord(0, g[0]), coord(1, g[1])}; }
};

struct CurvePoint {
  Vec2 position = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  int axis = 0;  ///< interval direction; the chart coordinate is the other axis
  std::array<int, 2> base{};
  std::array<int, 2> closest{};
  PointRole role = PointRole::inadmissible;
  double theta = 0.0;
  int associated_primary = -1;
  std::array<int, 3> chart{-1, -1, -1};  ///< primary: neighbors at chart offsets -1, 0, +1
  std::array<int, 3> interp{-1, -1, -1};
  std::array<double, 3> interp_coeff{0.0, 0.0, 0.0};

  bool is_primary() const { return role == PointRole::primary; }
};

/// Cut points of a plane curve, primaries first, with equilibration data.
class CurveDiscretization {
 public:
  CurveDiscretization(Grid2 grid, double eta, std::vector<CurvePoint> points, std::vector<int> gaps);

  const Grid2& grid() const { return grid_; }
  double h() const { return grid_.h; }
  double eta() const { return eta_; }
  const std::vector<CurvePoint>& points() const { return points_; }
  const CurvePoint& point(int id) const { return points_[static_cast<std::size_t>(id)]; }
  int n_primary() const { return n_primary_; }
  int n_total() const { return static_cast<int>(points_.size()); }
  int n_secondary() const { return n_total() - n_primary_; }

  /// Primary points lacking a chart neighbor. Non-empty only when some arcs
  /// carry no admissible cuts (eta above 1/sqrt(2)).
  const std::vector<int>& gaps() const { return gaps_; }
  bool complete() const { return gaps_.empty(); }

  const SparseOperator& pi_sp() const { return pi_sp_; }
  const SparseOperator& pi_ss() const { return pi_ss_; }
  /// n_total x n_primary; empty when the discretization has gaps.
  const SparseOperator& extension() const { return extension_; }

 private:
  Grid2 grid_;
  double eta_ = 0.0;
  std::vector<CurvePoint> points_;
  std::vector<int> gaps_;
  int n_primary_ = 0;
  SparseOperator pi_sp_, pi_ss_, extension_;
};

CurveDiscretization discretize_curve(const LevelSetCurve& curve, const Grid2& grid, double eta);

/// Metric coefficient c = |d X / d xi|^{-1} = |n_axis| per point.
Eigen::VectorXd curve_metric(const CurveDiscretization& disc);

/// n_p x n_total second arclength derivative c (c u')' in divergence form.
/// The neighbor weights use half-point averages of c; the center weight is
/// minus their sum. Throws DiscretizationError on an incomplete stencil.
SparseOperator lb_curve(const CurveDiscretization& disc);

SparseOperator reduced_curve_operator(const SparseOperator& lb, const CurveDiscretization& disc);

struct CurveCoefficientReport {
  double min_primary_c2 = 0.0;          ///< min over primary points of c^2
  double max_neighbor_jump = 0.0;       ///< max |c^2(neighbor) - c^2(center)|
  double max_average_discrepancy = 0.0; ///< max |2 c_i^2 - c_{i-1}^2 - c_{i+1}^2|
};
CurveCoefficientReport curve_coefficients(const CurveDiscretization& disc);

/// Structural check of the row-eliminated system P A for I - k Delta_h with the
/// interpolation rows, k = sigma h^2.
struct MMatrixReport {
  bool is_m_matrix = false;
  double max_offdiag = 0.0;  ///< largest off-diagonal entry of P A (must be <= 0)
  double min_diag = 0.0;
  double min_row_sum = 0.0;  ///< must be > 0
};
MMatrixReport check_m_matrix(const CurveDiscretization& disc, const SparseOperator& lb, double sigma);

/// max |u_direct - u_block| where u_direct = (I - k Delta_red)^{-1} y and
/// u_block is the primary part of A^{-1} (y, 0), over all unit vectors y.
double block_elimination_gap(const CurveDiscretization& disc, const SparseOperator& lb, double sigma);

std::vector<ResolventReport> resolvent_positivity(const CurveDiscretization& disc, const std::vector<double>& sigmas);

/// CSV rows sigma,min_entry,max_rowsum_dev,invertible with a header line.
void write_resolvent_csv(std::ostream& out, const std::vector<ResolventReport>& reports);

}  // namespace cutsurf
