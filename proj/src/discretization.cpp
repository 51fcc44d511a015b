#include "cutsurf/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "cutsurf/errors.hpp"

namespace cutsurf {

namespace {

struct NodeKeyer {
  std::array<std::int64_t, 3> n;
  explicit NodeKeyer(const Grid3& g) : n{g.n_cells[0] + 1LL, g.n_cells[1] + 1LL, g.n_cells[2] + 1LL} {}
  std::int64_t node(const GridIndex& g) const { return (g[0] * n[1] + g[1]) * n[2] + g[2]; }
  /// Key of the grid line along `axis` through chart coordinates (a, b).
  std::int64_t line(int axis, int a, int b) const {
    const std::int64_t w = std::max({n[0], n[1], n[2]}) + 3;
    return (axis * w + (a + 1)) * w + (b + 1);
  }
};

std::string describe(const CutPoint& p) {
  std::ostringstream s;
  s << "axis " << p.axis << " at (" << p.position.x() << ", " << p.position.y() << ", "
    << p.position.z() << "), normal (" << p.normal.x() << ", " << p.normal.y() << ", "
    << p.normal.z() << ")";
  return s.str();
}

}  // namespace

Grid3 Grid3::box(double half_extent, int n) {
  if (n <= 0 || !(half_extent > 0)) throw std::invalid_argument("Grid3::box: bad extent or size");
  Grid3 g;
  g.origin = Vec3::Constant(-half_extent);
  g.h = 2.0 * half_extent / n;
  g.n_cells = {n, n, n};
  return g;
}

std::array<double, 3> quadratic_weights(double theta) {
  return {0.5 * (-theta + theta * theta), 1.0 - theta * theta, 0.5 * (theta + theta * theta)};
}

SurfaceDiscretization::SurfaceDiscretization(Grid3 grid, double eta, std::vector<CutPoint> points)
    : grid_(grid), eta_(eta), points_(std::move(points)) {
  n_primary_ = 0;
  while (n_primary_ < static_cast<int>(points_.size()) && points_[n_primary_].is_primary())
    ++n_primary_;
  for (std::size_t i = static_cast<std::size_t>(n_primary_); i < points_.size(); ++i)
    if (points_[i].role != PointRole::secondary)
      throw DiscretizationError("points must be ordered primaries first, then secondaries");

  const int n_p = n_primary_;
  const int n_s = n_secondary();
  std::vector<Triplet> sp, ss;
  for (int r = 0; r < n_s; ++r) {
    const CutPoint& s = points_[n_p + r];
    for (int m = 0; m < 3; ++m) {
      const int id = s.interp[m];
      const double c = s.interp_coeff[m];
      if (id < 0 || id >= n_total()) throw DiscretizationError("secondary point without interpolation stencil: " + describe(s));
      if (id < n_p)
        sp.emplace_back(r, id, c);
      else
        ss.emplace_back(r, id - n_p, c);
    }
  }
  pi_sp_ = SparseOperator::from_triplets(n_s, n_p, sp);
  pi_ss_ = SparseOperator::from_triplets(n_s, n_s, ss);

  if (n_s > 0) {
    SparseMatrix a(n_s, n_s);
    a.setIdentity();
    a -= pi_ss_.matrix();
    lu_ = std::make_shared<const Factorization>(SparseOperator(a));
  }

  // X = (I - Pi_ss)^{-1} Pi_sp as the Neumann series sum_m Pi_ss^m Pi_sp;
  // ||Pi_ss||_inf <= 1/2, so terms below 1e-18 are dropped.
  SparseMatrix x = pi_sp_.matrix();
  SparseMatrix term = pi_sp_.matrix();
  for (int m = 0; m < 200 && term.nonZeros() > 0; ++m) {
    term = (pi_ss_.matrix() * term).pruned(1.0, 1e-18);
    x += term;
  }
  std::vector<Triplet> ext;
  ext.reserve(static_cast<std::size_t>(n_p + x.nonZeros()));
  for (int i = 0; i < n_p; ++i) ext.emplace_back(i, i, 1.0);
  for (Eigen::Index r = 0; r < x.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(x, r); it; ++it)
      ext.emplace_back(static_cast<int>(n_p + it.row()), static_cast<int>(it.col()), it.value());
  extension_ = SparseOperator::from_triplets(n_total(), n_p, ext);
}

Eigen::VectorXd SurfaceDiscretization::equilibrate(const Eigen::VectorXd& u_p) const {
  if (u_p.size() != n_primary_) throw std::invalid_argument("equilibrate: expected a primary-point field");
  Eigen::VectorXd u(n_total());
  u.head(n_primary_) = u_p;
  if (lu_) u.tail(n_secondary()) = lu_->solve(pi_sp_.apply(u_p));
  return u;
}

Eigen::MatrixXd SurfaceDiscretization::equilibrate(const Eigen::MatrixXd& u_p) const {
  if (u_p.rows() != n_primary_) throw std::invalid_argument("equilibrate: expected a primary-point field");
  Eigen::MatrixXd u(n_total(), u_p.cols());
  u.topRows(n_primary_) = u_p;
  for (Eigen::Index c = 0; c < u_p.cols(); ++c)
    if (lu_) u.col(c).tail(n_secondary()) = lu_->solve(pi_sp_.apply(Eigen::VectorXd(u_p.col(c))));
  return u;
}

double SurfaceDiscretization::equilibration_residual(const Eigen::VectorXd& u) const {
  if (u.size() != n_total()) throw std::invalid_argument("equilibration_residual: expected a full field");
  if (n_secondary() == 0) return 0.0;
  const Eigen::VectorXd us = u.tail(n_secondary());
  const Eigen::VectorXd r = us - pi_sp_.apply(Eigen::VectorXd(u.head(n_primary_))) - pi_ss_.apply(us);
  return r.lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd equilibrate(const SurfaceDiscretization& disc, const Eigen::VectorXd& u_p) {
  return disc.equilibrate(u_p);
}

std::vector<CutPoint> locate_cut_points(const LevelSetSurface& surface, const Grid3& grid, double eta,
                                        const DiscretizeOptions& options) {
  if (!(eta < 1.0 / std::sqrt(3.0))) throw std::invalid_argument("discretize: eta must be below 1/sqrt(3)");
  if (!(grid.h > 0)) throw std::invalid_argument("discretize: grid spacing must be positive");
  const double h = grid.h;
  const NodeKeyer keyer(grid);

  std::vector<CutPoint> cuts;
  std::unordered_set<std::int64_t> node_cuts;  // cut points that coincide with grid nodes

  auto on_boundary = [&](const GridIndex& g) {
    for (int d = 0; d < 3; ++d)
      if (g[d] == 0 || g[d] == grid.n_cells[d]) return true;
    return false;
  };

  // Steps 1-3: classify nodes line by line, locate admissible cuts.
  std::vector<double> phi_line;
  for (int axis = 0; axis < 3; ++axis) {
    const int c1 = chart_axis(axis, 0), c2 = chart_axis(axis, 1);
    const int n_axis = grid.n_cells[axis];
    phi_line.resize(static_cast<std::size_t>(n_axis) + 1);
    for (int a = 0; a <= grid.n_cells[c1]; ++a) {
      for (int b = 0; b <= grid.n_cells[c2]; ++b) {
        GridIndex g{};
        g[c1] = a;
        g[c2] = b;
        for (int k = 0; k <= n_axis; ++k) {
          g[axis] = k;
          const double f = surface.phi(grid.node(g));
          phi_line[k] = f;
          if (f <= 0.0 && on_boundary(g))
            throw DiscretizationError("grid box does not strictly contain the surface");
        }
        for (int k = 0; k < n_axis; ++k) {
          const double f0 = phi_line[k];
          const double f1 = phi_line[static_cast<std::size_t>(k) + 1];
          const bool in0 = f0 <= 0.0, in1 = f1 <= 0.0;
          if (in0 == in1) continue;
          GridIndex lo = g, hi = g;
          lo[axis] = k;
          hi[axis] = k + 1;
          const Vec3 p_lo = grid.node(lo), p_hi = grid.node(hi);
          const Vec3 pos = in0 ? find_cut(surface, p_lo, p_hi, options.root_tol * h)
                               : find_cut(surface, p_hi, p_lo, options.root_tol * h);
          const Vec3 n = unit_normal(surface, pos);
          CutPoint cut;
          cut.position = pos;
          cut.normal = n;
          const double t = (pos[axis] - p_lo[axis]) / h;
          const bool at_node = (in0 && f0 == 0.0) || (in1 && f1 == 0.0);
          if (at_node) {
            // The cut is a grid node: file it under the axis of largest |n_nu|.
            const GridIndex node = (in0 && f0 == 0.0) ? lo : hi;
            if (!node_cuts.insert(keyer.node(node)).second) continue;
            int best = 0;
            for (int d = 1; d < 3; ++d)
              if (std::abs(n[d]) > std::abs(n[best])) best = d;
            cut.axis = best;
            cut.closest = node;
            cut.theta = 0.0;
            cut.base = node;
            GridIndex up = node;
            up[best] += 1;
            if (up[best] > grid.n_cells[best] || surface.phi(grid.node(up)) <= 0.0)
              cut.base[best] -= 1;
            cuts.push_back(cut);
            continue;
          }
          if (std::abs(n[axis]) < eta) continue;
          cut.axis = axis;
          cut.base = lo;
          cut.closest = lo;
          cut.theta = t;
          if (t > 0.5) {
            cut.closest = hi;
            cut.theta = t - 1.0;
          }
          cuts.push_back(cut);
        }
      }
    }
  }
  if (cuts.empty()) throw DiscretizationError("surface has no admissible cut points on this grid");

  // Steps 4-5: group by closest node, nearest cut is primary. Ties broken by
  // base index, then axis.
  std::unordered_map<std::int64_t, int> owner;
  owner.reserve(cuts.size());
  auto closer = [&](const CutPoint& a, const CutPoint& b) {
    return std::make_tuple(std::abs(a.theta), a.base, a.axis) < std::make_tuple(std::abs(b.theta), b.base, b.axis);
  };
  for (int i = 0; i < static_cast<int>(cuts.size()); ++i) {
    const auto key = keyer.node(cuts[i].closest);
    auto [it, inserted] = owner.emplace(key, i);
    if (!inserted && closer(cuts[i], cuts[static_cast<std::size_t>(it->second)])) it->second = i;
  }
  for (auto& c : cuts) c.role = PointRole::secondary;
  for (const auto& [key, id] : owner) cuts[id].role = PointRole::primary;

  // Deterministic numbering: primaries first, each block by (axis, base).
  std::sort(cuts.begin(), cuts.end(), [](const CutPoint& a, const CutPoint& b) {
    return std::make_tuple(a.role, a.axis, a.base) < std::make_tuple(b.role, b.axis, b.base);
  });
  return cuts;
}

SurfaceDiscretization discretize(const LevelSetSurface& surface, const Grid3& grid, double eta,
                                 const DiscretizeOptions& options) {
  std::vector<CutPoint> cuts = locate_cut_points(surface, grid, eta, options);
  const double h = grid.h;
  const NodeKeyer keyer(grid);
  const int n_total = static_cast<int>(cuts.size());
  int n_p = 0;
  while (n_p < n_total && cuts[n_p].is_primary()) ++n_p;

  std::unordered_map<std::int64_t, int> primary_at;
  primary_at.reserve(static_cast<std::size_t>(n_p));
  for (int i = 0; i < n_p; ++i) {
    const bool fresh = primary_at.emplace(keyer.node(cuts[i].closest), i).second;
    if (!fresh) throw DiscretizationError("internal: grid node owns two primary points");
  }

  std::unordered_map<std::int64_t, std::vector<int>> lines;
  lines.reserve(cuts.size());
  for (int i = 0; i < n_total; ++i) {
    const CutPoint& c = cuts[i];
    const auto& b = c.base;
    lines[keyer.line(c.axis, b[chart_axis(c.axis, 0)], b[chart_axis(c.axis, 1)])].push_back(i);
  }

  // Step 6: chart stencils for primary points.
  const double max_offset = options.max_neighbor_offset * h;
  for (int i = 0; i < n_p; ++i) {
    CutPoint& p = cuts[i];
    const int c1 = chart_axis(p.axis, 0), c2 = chart_axis(p.axis, 1);
    for (int d1 = -1; d1 <= 1; ++d1) {
      for (int d2 = -1; d2 <= 1; ++d2) {
        int best = -1;
        double best_dist = max_offset;
        const auto it = lines.find(keyer.line(p.axis, p.closest[c1] + d1, p.closest[c2] + d2));
        if (it != lines.end()) {
          for (int id : it->second) {
            const double dist = std::abs(cuts[id].position[p.axis] - p.position[p.axis]);
            if (dist <= best_dist) {
              if (dist == best_dist && best >= 0) continue;
              best = id;
              best_dist = dist;
            }
          }
        }
        const bool axis_slot = d1 == 0 || d2 == 0;
        if (best < 0 && (axis_slot || options.require_full_stencil)) {
          std::ostringstream msg;
          msg << "primary point " << describe(p) << " lacks chart neighbor at offset (" << d1
              << ", " << d2 << "); eta = " << eta << " may be too large for this grid";
          throw DiscretizationError(msg.str());
        }
        p.chart[stencil_slot(d1, d2)] = best;
      }
    }
    if (p.chart[stencil_slot(0, 0)] != i)
      throw DiscretizationError("internal: stencil center is not the primary point");
  }

  // Step 7: interpolation data for secondary points.
  for (int i = n_p; i < n_total; ++i) {
    CutPoint& s = cuts[i];
    const auto it = primary_at.find(keyer.node(s.closest));
    if (it == primary_at.end()) throw DiscretizationError("internal: secondary point without primary");
    const CutPoint& p = cuts[static_cast<std::size_t>(it->second)];
    s.associated_primary = it->second;
    if (p.axis == s.axis) {
      throw DiscretizationError("secondary point " + describe(s) +
                                " shares its chart with its primary; grid too coarse for this surface");
    }
    const bool along_first = chart_axis(p.axis, 0) == s.axis;
    const int minus = along_first ? stencil_slot(-1, 0) : stencil_slot(0, -1);
    const int plus = along_first ? stencil_slot(1, 0) : stencil_slot(0, 1);
    s.interp = {p.chart[minus], it->second, p.chart[plus]};
    if (s.interp[0] < 0 || s.interp[2] < 0)
      throw DiscretizationError("secondary point " + describe(s) + " lacks interpolation neighbors");
    s.interp_coeff = quadratic_weights(s.theta);
  }

  return SurfaceDiscretization(grid, eta, std::move(cuts));
}

LemmaReport check_lemma_invariants(const SurfaceDiscretization& disc, const LevelSetSurface& surface) {
  LemmaReport rep;
  rep.h = disc.h();
  const int n_p = disc.n_primary();
  const NodeKeyer keyer(disc.grid());
  std::unordered_map<std::int64_t, int> primary_at;
  for (int i = 0; i < n_p; ++i) {
    const CutPoint& p = disc.point(i);
    primary_at.emplace(keyer.node(p.closest), i);
    const Vec3 n = unit_normal(surface, p.position);
    const double nm = std::abs(n[p.axis]);
    for (int slot = 0; slot < 2; ++slot) {
      const double nv = std::abs(n[chart_axis(p.axis, slot)]);
      rep.max_normal_ratio = std::max(rep.max_normal_ratio, nv / nm);
    }
  }

  rep.min_primary_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_p; ++i) {
    const CutPoint& p = disc.point(i);
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj)
        for (int dk = -2; dk <= 2; ++dk) {
          const GridIndex g{p.closest[0] + di, p.closest[1] + dj, p.closest[2] + dk};
          if (g[0] < 0 || g[1] < 0 || g[2] < 0) continue;
          const auto it = primary_at.find(keyer.node(g));
          if (it == primary_at.end() || it->second <= i) continue;
          rep.min_primary_separation = std::min(rep.min_primary_separation, (disc.point(it->second).position - p.position).norm());
        }
  }

  for (int i = 0; i < n_p; ++i) {
    const CutPoint& p = disc.point(i);
    for (int slot : {stencil_slot(-1, 0), stencil_slot(1, 0), stencil_slot(0, -1), stencil_slot(0, 1)}) {
      const int q = p.chart[slot];
      if (q < 0) continue;
      const auto it = primary_at.find(keyer.node(disc.point(q).closest));
      if (it == primary_at.end()) continue;
      rep.max_neighbor_primary_distance =
          std::max(rep.max_neighbor_primary_distance, (disc.point(it->second).position - p.position).norm());
    }
  }
  return rep;
}

}  // namespace cutsurf
