#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cutsurf/geometry.hpp"
#include "cutsurf/linalg.hpp"
#include "cutsurf/sparse.hpp"

namespace cutsurf {

using GridIndex = std::array<int, 3>;

/// Uniform 3-D grid: node (i,j,k) sits at origin + h (i,j,k), 0 <= i <= n_cells[0].
struct Grid3 {
  Vec3 origin = Vec3::Zero();
  double h = 1.0;
  std::array<int, 3> n_cells{0, 0, 0};

  /// The cube [-half_extent, half_extent]^3 with n cells per side.
  static Grid3 box(double half_extent, int n);

  double coord(int axis, int i) const { return origin[axis] + h * i; }
  Vec3 node(const GridIndex& g) const { return {coord(0, g[0]), coord(1, g[1]), coord(2, g[2])}; }
  bool operator==(const Grid3&) const = default;
};

enum class PointRole : std::uint8_t { primary = 0, secondary = 1, inadmissible = 2 };

/// Axes of the coordinate chart used by points of Gamma_axis, in cyclic order:
/// axis 0 -> (y,z), axis 1 -> (z,x), axis 2 -> (x,y).
constexpr int chart_axis(int axis, int slot) { return (axis + 1 + slot) % 3; }

/// Index into a 3x3 chart stencil for offsets d1, d2 in {-1,0,1}.
constexpr int stencil_slot(int d1, int d2) { return (d1 + 1) * 3 + (d2 + 1); }

struct CutPoint {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  ///< outward unit normal at position
  int axis = 0;                ///< grid-interval direction (0=x, 1=y, 2=z)
  GridIndex base{};            ///< lower node of the interval
  GridIndex closest{};         ///< closest grid node
  PointRole role = PointRole::inadmissible;
  double theta = 0.0;          ///< offset from the closest node along axis, in units of h
  int associated_primary = -1; ///< secondary only
  /// Primary only: ids of the 3x3 chart stencil in Gamma_axis (center = self).
  std::array<int, 9> chart{-1, -1, -1, -1, -1, -1, -1, -1, -1};
  /// Secondary only: q-, p, q+ and their quadratic interpolation weights.
  std::array<int, 3> interp{-1, -1, -1};
  std::array<double, 3> interp_coeff{0.0, 0.0, 0.0};

  bool is_primary() const { return role == PointRole::primary; }
  bool operator==(const CutPoint&) const = default;
};

/// Quadratic interpolation weights at offset theta for nodes -1, 0, +1.
std::array<double, 3> quadratic_weights(double theta);

struct DiscretizeOptions {
  /// Bisection length tolerance in units of h.
  double root_tol = 1e-12;
  /// Axis neighbors are always required; this also requires the four diagonal ones.
  bool require_full_stencil = false;
  /// Largest |offset| along the chart normal axis accepted for a stencil neighbor, in units of h.
  double max_neighbor_offset = 2.5;
};

/// The cut-point set with primary/secondary roles, chart stencils and the
/// equilibration operator. Points are numbered primaries first.
/// Immutable once built; equilibrate() may be called concurrently.
class SurfaceDiscretization {
 public:
  /// Builds the equilibration matrices and factorization from points whose
  /// roles, stencils and interpolation data are already set.
  SurfaceDiscretization(Grid3 grid, double eta, std::vector<CutPoint> points);

  const Grid3& grid() const { return grid_; }
  double h() const { return grid_.h; }
  double eta() const { return eta_; }
  const std::vector<CutPoint>& points() const { return points_; }
  const CutPoint& point(int id) const { return points_[static_cast<std::size_t>(id)]; }
  int n_primary() const { return n_primary_; }
  int n_secondary() const { return static_cast<int>(points_.size()) - n_primary_; }
  int n_total() const { return static_cast<int>(points_.size()); }

  const SparseOperator& pi_sp() const { return pi_sp_; }
  const SparseOperator& pi_ss() const { return pi_ss_; }
  /// E_h: n_total x n_primary, identity on the primary block.
  const SparseOperator& extension() const { return extension_; }

  /// Direct solve (I - Pi_ss) u_s = Pi_sp u_p via the stored factorization.
  Eigen::VectorXd equilibrate(const Eigen::VectorXd& u_p) const;
  /// Column-wise equilibration (e.g. vector fields).
  Eigen::MatrixXd equilibrate(const Eigen::MatrixXd& u_p) const;
  /// E_h u_p using the materialized extension operator.
  Eigen::VectorXd extend(const Eigen::VectorXd& u_p) const { return extension_.apply(u_p); }
  Eigen::MatrixXd extend(const Eigen::MatrixXd& u_p) const { return extension_.apply(u_p); }

  /// max |u_s - Pi_sp u_p - Pi_ss u_s| over secondary rows.
  double equilibration_residual(const Eigen::VectorXd& u) const;

 private:
  Grid3 grid_;
  double eta_ = 0.0;
  std::vector<CutPoint> points_;
  int n_primary_ = 0;
  SparseOperator pi_sp_, pi_ss_, extension_;
  std::shared_ptr<const Factorization> lu_;
};

/// Admissible cut points with primary/secondary roles, primaries first, each
/// block ordered by (axis, base). No stencil or interpolation data.
std::vector<CutPoint> locate_cut_points(const LevelSetSurface& surface, const Grid3& grid, double eta,
                                        const DiscretizeOptions& options = {});

/// Cut points of the surface on `grid`, keeping those with |n_axis| >= eta.
SurfaceDiscretization discretize(const LevelSetSurface& surface, const Grid3& grid, double eta,
                                 const DiscretizeOptions& options = {});

Eigen::VectorXd equilibrate(const SurfaceDiscretization& disc, const Eigen::VectorXd& u_p);

struct LemmaReport {
  double h = 0.0;
  /// max over primary p in Gamma_mu of |n_nu(p)| / |n_mu(p)|, nu != mu.
  double max_normal_ratio = 0.0;
  /// min distance between two primary points.
  double min_primary_separation = 0.0;
  /// max distance from a primary point to the primary owning the closest node of one of
  /// its four axis chart neighbors.
  double max_neighbor_primary_distance = 0.0;
};

LemmaReport check_lemma_invariants(const SurfaceDiscretization& disc, const LevelSetSurface& surface);

/// Portable text dump: versioned header, per-point records, Pi triplets.
void write_discretization(std::ostream& out, const SurfaceDiscretization& disc);
SurfaceDiscretization read_discretization(std::istream& in);
void dump_discretization(const SurfaceDiscretization& disc, const std::string& path);
SurfaceDiscretization load_discretization(const std::string& path);

}  // namespace cutsurf
