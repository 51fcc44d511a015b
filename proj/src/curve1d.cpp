#include "cutsurf/curve1d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <tuple>

#include "cutsurf/errors.hpp"
#include "cutsurf/geometry.hpp"
#include "cutsurf/linalg.hpp"

namespace cutsurf {

LevelSetCurve LevelSetCurve::circle(double radius, const Vec2& center) {
  if (!(radius > 0)) throw std::invalid_argument("circle: radius must be positive");
  return LevelSetCurve(
      "circle", [=](const Vec2& p) { return (p - center).squaredNorm() - radius * radius; },
      [=](const Vec2& p) -> Vec2 { return 2.0 * (p - center); });
}

LevelSetCurve LevelSetCurve::ellipse(double a, double b) {
  if (!(a > 0 && b > 0)) throw std::invalid_argument("ellipse: semi-axes must be positive");
  return LevelSetCurve(
      "ellipse", [=](const Vec2& p) { return p.x() * p.x() / (a * a) + p.y() * p.y() / (b * b) - 1.0; },
      [=](const Vec2& p) -> Vec2 { return {2 * p.x() / (a * a), 2 * p.y() / (b * b)}; });
}

LevelSetCurve LevelSetCurve::perturbed_circle(double amplitude, int lobes) {
  if (!(std::abs(amplitude) < 1)) throw std::invalid_argument("perturbed_circle: |amplitude| must be below 1");
  const double m = lobes;
  return LevelSetCurve(
      "perturbed_circle",
      [=](const Vec2& p) { return p.norm() - (1.0 + amplitude * std::cos(m * std::atan2(p.y(), p.x()))); },
      [=](const Vec2& p) -> Vec2 {
        const double r2 = p.squaredNorm();
        const double r = std::sqrt(r2);
        const double dr = amplitude * m * std::sin(m * std::atan2(p.y(), p.x()));
        // d(theta)/dx = -y/r^2, d(theta)/dy = x/r^2
        return {p.x() / r - dr * p.y() / r2, p.y() / r + dr * p.x() / r2};
      });
}

Vec2 LevelSetCurve::unit_normal(const Vec2& p) const {
  const Vec2 g = grad_(p);
  const double n = g.norm();
  if (n < 1e-8) throw DegenerateGradientError("curve normal: vanishing gradient");
  return g / n;
}

Grid2 Grid2::box(double half_extent, int n) {
  if (n <= 0 || !(half_extent > 0)) throw std::invalid_argument("Grid2::box: bad extent or size");
  Grid2 g;
  g.origin = Vec2::Constant(-half_extent);
  g.h = 2.0 * half_extent / n;
  g.n_cells = {n, n};
  return g;
}

CurveDiscretization::CurveDiscretization(Grid2 grid, double eta, std::vector<CurvePoint> points,
                                         std::vector<int> gaps)
    : grid_(grid), eta_(eta), points_(std::move(points)), gaps_(std::move(gaps)) {
  while (n_primary_ < n_total() && points_[n_primary_].is_primary()) ++n_primary_;
  if (!gaps_.empty()) return;
  const int n_p = n_primary_, n_s = n_secondary();
  std::vector<Triplet> sp, ss;
  for (int r = 0; r < n_s; ++r) {
    const CurvePoint& s = points_[n_p + r];
    for (int m = 0; m < 3; ++m) {
      const int id = s.interp[m];
      if (id < 0) throw DiscretizationError("curve secondary point without interpolation stencil");
      if (id < n_p)
        sp.emplace_back(r, id, s.interp_coeff[m]);
      else
        ss.emplace_back(r, id - n_p, s.interp_coeff[m]);
    }
  }
  pi_sp_ = SparseOperator::from_triplets(n_s, n_p, sp);
  pi_ss_ = SparseOperator::from_triplets(n_s, n_s, ss);
  SparseMatrix x = pi_sp_.matrix(), term = pi_sp_.matrix();
  for (int m = 0; m < 200 && term.nonZeros() > 0; ++m) {
    term = (pi_ss_.matrix() * term).pruned(1.0, 1e-18);
    x += term;
  }
  std::vector<Triplet> ext;
  for (int i = 0; i < n_p; ++i) ext.emplace_back(i, i, 1.0);
  for (Eigen::Index r = 0; r < x.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(x, r); it; ++it)
      ext.emplace_back(static_cast<int>(n_p + it.row()), static_cast<int>(it.col()), it.value());
  extension_ = SparseOperator::from_triplets(n_total(), n_p, ext);
}

CurveDiscretization discretize_curve(const LevelSetCurve& curve, const Grid2& grid, double eta) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("discretize_curve: eta must lie in (0, 1)");
  const double h = grid.h;
  using Index2 = std::array<int, 2>;
  std::vector<CurvePoint> cuts;
  std::map<Index2, bool> node_cut_seen;

  for (int axis = 0; axis < 2; ++axis) {
    const int other = 1 - axis;
    for (int a = 0; a <= grid.n_cells[other]; ++a) {
      for (int k = 0; k < grid.n_cells[axis]; ++k) {
        Index2 lo{}, hi{};
        lo[other] = hi[other] = a;
        lo[axis] = k;
        hi[axis] = k + 1;
        const Vec2 p_lo = grid.node(lo), p_hi = grid.node(hi);
        const double f0 = curve.phi(p_lo), f1 = curve.phi(p_hi);
        if ((f0 <= 0.0) == (f1 <= 0.0)) continue;
        if (lo[other] == 0 || lo[other] == grid.n_cells[other] || k == 0 || k + 1 == grid.n_cells[axis])
          throw DiscretizationError("grid box does not strictly contain the curve");
        CurvePoint c;
        if (f0 == 0.0 || f1 == 0.0) {
          const Index2 node = f0 == 0.0 ? lo : hi;
          if (node_cut_seen[node]) continue;
          node_cut_seen[node] = true;
          c.position = grid.node(node);
          c.normal = curve.unit_normal(c.position);
          c.axis = std::abs(c.normal[0]) >= std::abs(c.normal[1]) ? 0 : 1;
          c.base = c.closest = node;
          c.theta = 0.0;
          cuts.push_back(c);
          continue;
        }
        auto f = [&](double t) { return curve.phi(p_lo + t * (p_hi - p_lo)); };
        const double t = bisect(f, 0.0, 1.0, 1e-12);
        Vec2 pos = p_lo;
        pos[axis] = p_lo[axis] + t * h;
        c.position = pos;
        c.normal = curve.unit_normal(pos);
        if (std::abs(c.normal[axis]) < eta) continue;
        c.axis = axis;
        c.base = c.closest = lo;
        c.theta = t;
        if (t > 0.5) {
          c.closest = hi;
          c.theta = t - 1.0;
        }
        cuts.push_back(c);
      }
    }
  }
  if (cuts.empty()) throw DiscretizationError("curve has no admissible cut points on this grid");

  std::map<Index2, int> owner;
  for (int i = 0; i < static_cast<int>(cuts.size()); ++i) {
    auto [it, fresh] = owner.emplace(cuts[i].closest, i);
    const CurvePoint& cur = cuts[static_cast<std::size_t>(it->second)];
    if (!fresh && std::make_tuple(std::abs(cuts[i].theta), cuts[i].base, cuts[i].axis) <
                      std::make_tuple(std::abs(cur.theta), cur.base, cur.axis))
      it->second = i;
  }
  for (auto& c : cuts) c.role = PointRole::secondary;
  for (const auto& [node, id] : owner) cuts[id].role = PointRole::primary;
  std::sort(cuts.begin(), cuts.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return std::make_tuple(a.role, a.axis, a.base) < std::make_tuple(b.role, b.axis, b.base);
  });
  const int n_total = static_cast<int>(cuts.size());
  int n_p = 0;
  while (n_p < n_total && cuts[n_p].is_primary()) ++n_p;

  std::map<Index2, int> primary_at;
  for (int i = 0; i < n_p; ++i) primary_at.emplace(cuts[i].closest, i);
  // Lines keyed by (axis, chart coordinate index).
  std::map<std::pair<int, int>, std::vector<int>> lines;
  for (int i = 0; i < n_total; ++i) lines[{cuts[i].axis, cuts[i].base[1 - cuts[i].axis]}].push_back(i);

  std::vector<int> gaps;
  for (int i = 0; i < n_p; ++i) {
    CurvePoint& p = cuts[i];
    const int other = 1 - p.axis;
    for (int d = -1; d <= 1; ++d) {
      int best = -1;
      double best_dist = 2.5 * h;
      const auto it = lines.find({p.axis, p.closest[other] + d});
      if (it != lines.end())
        for (int id : it->second) {
          const double dist = std::abs(cuts[id].position[p.axis] - p.position[p.axis]);
          if (dist < best_dist || (dist == best_dist && best < 0)) {
            best = id;
            best_dist = dist;
          }
        }
      p.chart[d + 1] = best;
    }
    if (p.chart[0] < 0 || p.chart[2] < 0) gaps.push_back(i);
  }

  for (int i = n_p; i < n_total; ++i) {
    CurvePoint& s = cuts[i];
    const int pid = primary_at.at(s.closest);
    const CurvePoint& p = cuts[pid];
    s.associated_primary = pid;
    if (p.axis == s.axis) throw DiscretizationError("curve secondary point shares its chart with its primary");
    s.interp = {p.chart[0], pid, p.chart[2]};
    s.interp_coeff = quadratic_weights(s.theta);
  }
  return CurveDiscretization(grid, eta, std::move(cuts), std::move(gaps));
}

Eigen::VectorXd curve_metric(const CurveDiscretization& disc) {
  Eigen::VectorXd c(disc.n_total());
  for (int i = 0; i < disc.n_total(); ++i) c[i] = std::abs(disc.point(i).normal[disc.point(i).axis]);
  return c;
}

SparseOperator lb_curve(const CurveDiscretization& disc) {
  if (!disc.complete()) throw DiscretizationError("lb_curve: discretization has coverage gaps");
  const Eigen::VectorXd c = curve_metric(disc);
  const double h2 = disc.h() * disc.h();
  std::vector<Triplet> entries;
  for (int i = 0; i < disc.n_primary(); ++i) {
    const auto& ch = disc.point(i).chart;
    const double wm = c[i] * 0.5 * (c[i] + c[ch[0]]) / h2;
    const double wp = c[i] * 0.5 * (c[i] + c[ch[2]]) / h2;
    entries.emplace_back(i, ch[0], wm);
    entries.emplace_back(i, ch[2], wp);
    entries.emplace_back(i, i, -(wm + wp));
  }
  return SparseOperator::from_triplets(disc.n_primary(), disc.n_total(), entries);
}

SparseOperator reduced_curve_operator(const SparseOperator& lb, const CurveDiscretization& disc) {
  if (lb.cols() != disc.n_total()) throw std::invalid_argument("reduced_curve_operator: size mismatch");
  return SparseOperator(SparseMatrix(lb.matrix() * disc.extension().matrix()));
}

CurveCoefficientReport curve_coefficients(const CurveDiscretization& disc) {
  const Eigen::VectorXd c = curve_metric(disc);
  CurveCoefficientReport rep;
  rep.min_primary_c2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < disc.n_primary(); ++i) {
    const auto& ch = disc.point(i).chart;
    const double ci = c[i] * c[i];
    rep.min_primary_c2 = std::min(rep.min_primary_c2, ci);
    if (ch[0] < 0 || ch[2] < 0) continue;
    const double cm = c[ch[0]] * c[ch[0]], cp = c[ch[2]] * c[ch[2]];
    rep.max_neighbor_jump = std::max({rep.max_neighbor_jump, std::abs(cm - ci), std::abs(cp - ci)});
    rep.max_average_discrepancy = std::max(rep.max_average_discrepancy, std::abs(2 * ci - cm - cp));
  }
  return rep;
}

namespace {

/// Rows 0..n_p-1: I - k Delta_h; rows n_p..: u_s - Pi_sp u_p - Pi_ss u_s.
SparseMatrix full_system(const CurveDiscretization& disc, const SparseOperator& lb, double k) {
  const int n = disc.n_total();
  std::vector<Triplet> t;
  for (const auto& e : lb.triplets()) t.emplace_back(e.row(), e.col(), -k * e.value());
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  for (int l = disc.n_primary(); l < n; ++l) {
    const CurvePoint& s = disc.point(l);
    for (int m = 0; m < 3; ++m) t.emplace_back(l, s.interp[m], -s.interp_coeff[m]);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

MMatrixReport check_m_matrix(const CurveDiscretization& disc, const SparseOperator& lb, double sigma) {
  const double k = sigma * disc.h() * disc.h();
  const SparseMatrix a = full_system(disc, lb, k);
  Eigen::MatrixXd pa = Eigen::MatrixXd(a);
  for (int l = disc.n_primary(); l < disc.n_total(); ++l) {
    const CurvePoint& s = disc.point(l);
    const int i = s.associated_primary;
    // The interpolation weight that can be negative sits on q+ for theta < 0, on q- otherwise.
    const int j = s.theta < 0 ? s.interp[2] : s.interp[0];
    const double coupling = -a.coeff(i, j);  // k times the neighbor weight of row i
    if (!(coupling > 0)) throw DiscretizationError("check_m_matrix: primary row lacks the neighbor coupling");
    const double r = 1.0 / (8.0 * coupling);
    pa.row(l) += r * pa.row(i);
  }
  MMatrixReport rep;
  rep.max_offdiag = -std::numeric_limits<double>::infinity();
  rep.min_diag = std::numeric_limits<double>::infinity();
  rep.min_row_sum = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < pa.rows(); ++r) {
    const double d = pa(r, r);
    rep.min_diag = std::min(rep.min_diag, d);
    rep.min_row_sum = std::min(rep.min_row_sum, pa.row(r).sum());
    for (Eigen::Index c = 0; c < pa.cols(); ++c)
      if (c != r && pa(r, c) != 0.0) rep.max_offdiag = std::max(rep.max_offdiag, pa(r, c));
  }
  rep.is_m_matrix = rep.min_diag > 0 && rep.max_offdiag <= 1e-14 && rep.min_row_sum > 0;
  return rep;
}

double block_elimination_gap(const CurveDiscretization& disc, const SparseOperator& lb, double sigma) {
  const double k = sigma * disc.h() * disc.h();
  const int n_p = disc.n_primary(), n = disc.n_total();
  const Factorization full(SparseOperator(full_system(disc, lb, k)));
  SparseMatrix red(n_p, n_p);
  red.setIdentity();
  red -= k * reduced_curve_operator(lb, disc).matrix();
  const Factorization reduced((SparseOperator(red)));
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n_p);
  y.topRows(n_p).setIdentity();
  const Eigen::MatrixXd via_full = full.solve_block(y).topRows(n_p);
  const Eigen::MatrixXd direct = reduced.solve_block(Eigen::MatrixXd::Identity(n_p, n_p));
  return (via_full - direct).cwiseAbs().maxCoeff();
}

std::vector<ResolventReport> resolvent_positivity(const CurveDiscretization& disc, const std::vector<double>& sigmas) {
  const SparseOperator red = reduced_curve_operator(lb_curve(disc), disc);
  std::vector<ResolventReport> out;
  for (double s : sigmas) out.push_back(resolvent_report(red, s * disc.h() * disc.h(), s));
  return out;
}

void write_resolvent_csv(std::ostream& out, const std::vector<ResolventReport>& reports) {
  out << "sigma,min_entry,max_rowsum_dev,invertible\n";
  out << std::setprecision(6) << std::scientific;
  for (const auto& r : reports)
    out << r.sigma << ',' << r.min_entry << ',' << r.max_rowsum_dev << ',' << (r.invertible ? 1 : 0) << '\n';
  out << std::defaultfloat;
}

}  // namespace cutsurf
