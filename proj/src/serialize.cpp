#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cutsurf/discretization.hpp"
#include "cutsurf/errors.hpp"

namespace cutsurf {

namespace {

constexpr const char* kMagic = "cutsurf-disc";
constexpr int kVersion = 1;

// Hex floats round-trip bit-exactly; std::istream cannot parse them portably.
void put(std::ostream& out, double v) { out << ' ' << std::hexfloat << v << std::defaultfloat; }

double get_double(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw FormatError("discretization dump: truncated record");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw FormatError("discretization dump: bad number '" + tok + "'");
  return v;
}

int get_int(std::istream& in) {
  long long v = 0;
  if (!(in >> v)) throw FormatError("discretization dump: truncated record");
  return static_cast<int>(v);
}

void expect(std::istream& in, const std::string& word) {
  std::string tok;
  if (!(in >> tok) || tok != word)
    throw FormatError("discretization dump: expected '" + word + "', got '" + tok + "'");
}

}  // namespace

void write_discretization(std::ostream& out, const SurfaceDiscretization& disc) {
  const Grid3& g = disc.grid();
  out << kMagic << ' ' << kVersion << '\n';
  out << "grid";
  for (int d = 0; d < 3; ++d) put(out, g.origin[d]);
  put(out, g.h);
  out << ' ' << g.n_cells[0] << ' ' << g.n_cells[1] << ' ' << g.n_cells[2] << '\n';
  out << "eta";
  put(out, disc.eta());
  out << '\n';
  out << "points " << disc.n_total() << ' ' << disc.n_primary() << '\n';
  for (const CutPoint& p : disc.points()) {
    for (int d = 0; d < 3; ++d) put(out, p.position[d]);
    for (int d = 0; d < 3; ++d) put(out, p.normal[d]);
    out << ' ' << p.axis;
    for (int v : p.base) out << ' ' << v;
    for (int v : p.closest) out << ' ' << v;
    out << ' ' << static_cast<int>(p.role);
    put(out, p.theta);
    out << ' ' << p.associated_primary;
    for (int v : p.chart) out << ' ' << v;
    for (int v : p.interp) out << ' ' << v;
    for (double c : p.interp_coeff) put(out, c);
    out << '\n';
  }
  out << "pi_sp ";
  disc.pi_sp().write_triplets(out);
  out << "pi_ss ";
  disc.pi_ss().write_triplets(out);
  out << "end\n";
}

SurfaceDiscretization read_discretization(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic)
    throw FormatError("discretization dump: missing or corrupted header");
  if (version != kVersion) {
    std::ostringstream msg;
    msg << "discretization dump: version " << version << " not supported (expected " << kVersion << ")";
    throw FormatError(msg.str());
  }
  Grid3 g;
  expect(in, "grid");
  for (int d = 0; d < 3; ++d) g.origin[d] = get_double(in);
  g.h = get_double(in);
  for (int d = 0; d < 3; ++d) g.n_cells[d] = get_int(in);
  expect(in, "eta");
  const double eta = get_double(in);
  expect(in, "points");
  const int n_total = get_int(in);
  const int n_primary = get_int(in);
  if (n_total < 0 || n_primary < 0 || n_primary > n_total)
    throw FormatError("discretization dump: inconsistent point counts");

  std::vector<CutPoint> points(static_cast<std::size_t>(n_total));
  for (CutPoint& p : points) {
    for (int d = 0; d < 3; ++d) p.position[d] = get_double(in);
    for (int d = 0; d < 3; ++d) p.normal[d] = get_double(in);
    p.axis = get_int(in);
    for (int& v : p.base) v = get_int(in);
    for (int& v : p.closest) v = get_int(in);
    const int role = get_int(in);
    if (role < 0 || role > 2) throw FormatError("discretization dump: bad point role");
    p.role = static_cast<PointRole>(role);
    p.theta = get_double(in);
    p.associated_primary = get_int(in);
    for (int& v : p.chart) v = get_int(in);
    for (int& v : p.interp) v = get_int(in);
    for (double& c : p.interp_coeff) c = get_double(in);
  }
  expect(in, "pi_sp");
  const SparseOperator pi_sp = SparseOperator::read_triplets(in);
  expect(in, "pi_ss");
  const SparseOperator pi_ss = SparseOperator::read_triplets(in);
  expect(in, "end");

  SurfaceDiscretization disc(g, eta, std::move(points));
  if (disc.n_primary() != n_primary) throw FormatError("discretization dump: primary count mismatch");
  // The stored matrices are redundant with the point records; they guard against corruption.
  const auto same = [](const SparseOperator& a, const SparseOperator& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.matrix() - b.matrix()).cwiseAbs().sum() <= 1e-15 * (1.0 + a.matrix().cwiseAbs().sum());
  };
  if (!same(pi_sp, disc.pi_sp()) || !same(pi_ss, disc.pi_ss()))
    throw FormatError("discretization dump: stored interpolation matrices disagree with point records");
  return disc;
}

void dump_discretization(const SurfaceDiscretization& disc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_discretization(out, disc);
  if (!out) throw FormatError("write to '" + path + "' failed");
}

SurfaceDiscretization load_discretization(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_discretization(in);
}

}  // namespace cutsurf
