#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cutsurf/errors.hpp"
#include "cutsurf/experiments.hpp"

using namespace cutsurf;

namespace {

struct ScanResult {
  int n_total = 0;
  int n_primary = 0;
};

// Independent oracle: every interval of the grid, plain bisection on t in
// [0, 1], admissibility by the normal at the root, nearest cut per node.
ScanResult exhaustive_scan(const LevelSetSurface& s, const Grid3& g, double eta) {
  std::map<std::array<int, 3>, double> nearest;
  ScanResult r;
  const int n = g.n_cells[0];
  for (int axis = 0; axis < 3; ++axis)
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k < n; ++k) {
          std::array<int, 3> lo{};
          lo[(axis + 1) % 3] = i;
          lo[(axis + 2) % 3] = j;
          lo[axis] = k;
          std::array<int, 3> hi = lo;
          hi[axis] = k + 1;
          const Vec3 a = g.node(lo), b = g.node(hi);
          const double fa = s.phi(a), fb = s.phi(b);
          if ((fa <= 0) == (fb <= 0)) continue;
          double t0 = 0, t1 = 1;
          for (int it = 0; it < 60; ++it) {
            const double tm = 0.5 * (t0 + t1);
            if ((s.phi(a + tm * (b - a)) <= 0) == (fa <= 0)) t0 = tm; else t1 = tm;
          }
          const double t = 0.5 * (t0 + t1);
          const Vec3 n = s.gradient(a + t * (b - a)).normalized();
          if (std::abs(n[axis]) < eta) continue;
          ++r.n_total;
          std::array<int, 3> closest = t > 0.5 ? hi : lo;
          const double d = t > 0.5 ? 1 - t : t;
          auto [it, fresh] = nearest.emplace(closest, d);
          if (!fresh) it->second = std::min(it->second, d);
        }
  r.n_primary = static_cast<int>(nearest.size());
  return r;
}

double quadratic(const Vec3& p) { return p.x() * p.x() + 2 * p.y() * p.z() - p.z(); }

double secondary_quadratic_error(int n) {
  const auto sphere = LevelSetSurface::sphere(1.0);
  const auto disc = discretize_box(sphere, n);
  Eigen::VectorXd up(disc.n_primary());
  for (int i = 0; i < disc.n_primary(); ++i) up[i] = quadratic(disc.point(i).position);
  const Eigen::VectorXd u = disc.equilibrate(up);
  double err = 0;
  for (int i = disc.n_primary(); i < disc.n_total(); ++i)
    err = std::max(err, std::abs(u[i] - quadratic(disc.point(i).position)));
  return err;
}

}  // namespace

TEST_CASE("unit sphere N=80 point counts match an exhaustive interval scan") {
  const auto sphere = LevelSetSurface::sphere(1.0);
  const Grid3 grid = Grid3::box(kBoxHalfExtent, 80);
  const auto disc = discretize(sphere, grid, 0.45);
  const ScanResult oracle = exhaustive_scan(sphere, grid, 0.45);
  CHECK(disc.n_total() == oracle.n_total);
  CHECK(disc.n_primary() == oracle.n_primary);
}

TEST_CASE("small sphere centered at a node: the six axis crossings are primary") {
  const Grid3 grid = Grid3::box(kBoxHalfExtent, 40);
  const double h = grid.h;
  const Vec3 c = grid.node({20, 20, 20});
  const auto cuts = locate_cut_points(LevelSetSurface::sphere(2.5 * h, c), grid, 0.45);
  int found = 0;
  for (const auto& p : cuts) {
    const Vec3 d = (p.position - c) / h;
    int zeros = 0;
    for (int k = 0; k < 3; ++k) zeros += d[k] == 0.0;
    if (zeros != 2) continue;
    ++found;
    CHECK(p.is_primary());
    CHECK(std::abs(std::abs(p.theta) - 0.5) < 1e-9);
    CHECK(std::abs(d.norm() - 2.5) < 1e-9);
  }
  CHECK(found == 6);
}

TEST_CASE("eta near 1/sqrt(3) fails loudly for lack of chart neighbors") {
  CHECK_THROWS_AS(discretize_box(LevelSetSurface::sphere(1.0), 20, 0.57), DiscretizationError);
  CHECK_THROWS_AS(discretize_box(LevelSetSurface::sphere(1.0), 20, 0.6), std::invalid_argument);
}

TEST_CASE("structural invariants of the ellipsoid discretization") {
  const auto surface = make_surface("ellipsoid");
  const auto disc = discretize_box(surface, 40);
  const double h = disc.h();
  std::set<std::array<int, 3>> owners;
  for (int i = 0; i < disc.n_total(); ++i) {
    const CutPoint& p = disc.point(i);
    CHECK(std::abs(p.theta) <= 0.5);
    CHECK(std::abs(p.normal[p.axis]) >= disc.eta());
    for (int slot = 0; slot < 2; ++slot) {
      const int d = chart_axis(p.axis, slot);
      CHECK(p.position[d] == disc.grid().coord(d, p.base[d]));
    }
    CHECK(std::abs(p.position[p.axis] - disc.grid().coord(p.axis, p.closest[p.axis]) - p.theta * h) < 1e-12);
    if (p.is_primary()) {
      CHECK(owners.insert(p.closest).second);
      CHECK(p.chart[stencil_slot(0, 0)] == i);
      int neighbors = 0;
      for (int q : p.chart)
        if (q >= 0 && q != i) {
          CHECK(disc.point(q).axis == p.axis);
          ++neighbors;
        }
      CHECK(neighbors >= 3);
    } else {
      const CutPoint& a = disc.point(p.associated_primary);
      CHECK(a.is_primary());
      CHECK(a.closest == p.closest);
      CHECK(a.axis != p.axis);
      CHECK(p.interp[1] == p.associated_primary);
      CHECK(disc.point(p.interp[0]).axis == a.axis);
      CHECK(disc.point(p.interp[2]).axis == a.axis);
    }
  }
}

TEST_CASE("equilibration matrices: row structure and diagonal dominance") {
  const auto disc = discretize_box(make_surface("ellipsoid"), 40);
  const int n_p = disc.n_primary();
  std::vector<int> count(disc.n_secondary(), 0);
  std::vector<double> abs_sum(disc.n_secondary(), 0.0), sum(disc.n_secondary(), 0.0);
  for (const auto& t : disc.pi_ss().triplets()) {
    CHECK(t.row() != t.col());
    ++count[t.row()];
    abs_sum[t.row()] += std::abs(t.value());
    sum[t.row()] += t.value();
  }
  for (const auto& t : disc.pi_sp().triplets()) sum[t.row()] += t.value();
  for (int r = 0; r < disc.n_secondary(); ++r) {
    CHECK(count[r] <= 2);
    CHECK(abs_sum[r] <= 0.5 + 1e-15);
    CHECK(1.0 - abs_sum[r] >= 0.5 - 1e-15);
    CHECK(std::abs(sum[r] - 1.0) < 1e-14);
    const CutPoint& s = disc.point(n_p + r);
    const auto w = quadratic_weights(s.theta);
    for (int k = 0; k < 3; ++k) CHECK(s.interp_coeff[k] == doctest::Approx(w[k]).epsilon(1e-15));
  }
}

TEST_CASE("quadratic weights at theta = 1/2") {
  const auto w = quadratic_weights(0.5);
  CHECK(w[0] == doctest::Approx(-0.125));
  CHECK(w[1] == doctest::Approx(0.75));
  CHECK(w[2] == doctest::Approx(0.375));
}

TEST_CASE("constants equilibrate to constants") {
  const auto disc = discretize_box(LevelSetSurface::sphere(1.0), 40);
  const Eigen::VectorXd u = disc.equilibrate(Eigen::VectorXd(Eigen::VectorXd::Constant(disc.n_primary(), 3.5)));
  CHECK((u.array() - 3.5).abs().maxCoeff() < 1e-13);
  CHECK(disc.equilibration_residual(u) < 1e-13);
}

TEST_CASE("Jacobi iteration of the interpolation relations agrees with the direct solve") {
  const auto disc = discretize_box(make_surface("ellipsoid"), 40);
  Eigen::VectorXd up(disc.n_primary());
  for (int i = 0; i < disc.n_primary(); ++i) up[i] = std::sin(3 * disc.point(i).position.x()) + disc.point(i).position.z();
  const Eigen::VectorXd direct = disc.equilibrate(up);
  const Eigen::VectorXd rhs = disc.pi_sp().apply(up);
  Eigen::VectorXd us = Eigen::VectorXd::Zero(disc.n_secondary());
  for (int it = 0; it < 200; ++it) us = rhs + disc.pi_ss().apply(us);
  CHECK((us - direct.tail(disc.n_secondary())).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(disc.equilibration_residual(direct) < 1e-12);
}

TEST_CASE("secondary values of a quadratic are accurate to third order") {
  const double e40 = secondary_quadratic_error(40);
  const double e80 = secondary_quadratic_error(80);
  CHECK(e80 < 1e-3);
  CHECK(e40 / e80 > 6.0);
}

TEST_CASE("lemma thresholds on sphere and ellipsoid with constants fitted on the coarse grid") {
  for (const char* name : {"sphere", "ellipsoid"}) {
    CAPTURE(name);
    const auto s = make_surface(name);
    const auto coarse = discretize_box(s, 80);
    const auto fine = discretize_box(s, 160);
    const LemmaReport rc = check_lemma_invariants(coarse, s), rf = check_lemma_invariants(fine, s);
    const double hc = rc.h, hf = rf.h;
    // Fitted constants from N=80, with a factor 2 slack on N=160.
    const double c_ratio = std::max(0.0, (rc.max_normal_ratio - 1.0) / hc);
    const double c_sep = std::max(0.0, (std::sqrt(0.5) * hc - rc.min_primary_separation) / (hc * hc));
    const double c_nbr = std::max(0.0, (rc.max_neighbor_primary_distance - 1.5 * std::sqrt(2.0) * hc) / (hc * hc));
    CHECK(c_ratio < 2.0);
    CHECK(c_sep < 2.0);
    CHECK(rf.max_normal_ratio <= 1.0 + 2.0 * c_ratio * hf);
    CHECK(rf.min_primary_separation >= std::sqrt(0.5) * hf - 2.0 * c_sep * hf * hf);
    CHECK(rf.max_neighbor_primary_distance <= 1.5 * std::sqrt(2.0) * hf + 2.0 * c_nbr * hf * hf);
  }
}

TEST_CASE("unit sphere N=80 minimum primary separation") {
  const auto s = LevelSetSurface::sphere(1.0);
  const auto disc = discretize_box(s, 80);
  CHECK(check_lemma_invariants(disc, s).min_primary_separation >= 0.70 * disc.h());
}

TEST_CASE("serialization round trip and corrupted input") {
  const auto disc = discretize_box(LevelSetSurface::sphere(1.0), 40);
  std::stringstream buf;
  write_discretization(buf, disc);
  const std::string text = buf.str();
  std::istringstream in(text);
  const auto back = read_discretization(in);
  CHECK(back.grid() == disc.grid());
  CHECK(back.eta() == disc.eta());
  CHECK(back.n_primary() == disc.n_primary());
  REQUIRE(back.n_total() == disc.n_total());
  bool same = true;
  for (int i = 0; i < disc.n_total(); ++i) same = same && back.point(i) == disc.point(i);
  CHECK(same);
  CHECK((back.pi_ss().matrix() - disc.pi_ss().matrix()).norm() == 0.0);
  CHECK((back.pi_sp().matrix() - disc.pi_sp().matrix()).norm() == 0.0);

  std::string bad_header = text;
  bad_header[0] = 'X';
  std::istringstream in_bad(bad_header);
  CHECK_THROWS_AS(read_discretization(in_bad), FormatError);

  std::string bad_version = text;
  bad_version.replace(bad_version.find(" 1"), 2, " 9");
  std::istringstream in_version(bad_version);
  CHECK_THROWS_AS(read_discretization(in_version), FormatError);

  std::istringstream in_short(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_discretization(in_short), FormatError);
}
