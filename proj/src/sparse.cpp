#include "cutsurf/sparse.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "cutsurf/errors.hpp"

namespace cutsurf {

SparseOperator SparseOperator::from_triplets(Eigen::Index rows, Eigen::Index cols,
                                             const std::vector<Triplet>& entries) {
  SparseMatrix m(rows, cols);
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
      throw std::out_of_range("sparse triplet index out of range");
  }
  m.setFromTriplets(entries.begin(), entries.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(Eigen::Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return SparseOperator(std::move(m));
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != m_.cols()) throw std::invalid_argument("SparseOperator::apply: size mismatch");
  return m_ * x;
}

Eigen::MatrixXd SparseOperator::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != m_.cols()) throw std::invalid_argument("SparseOperator::apply: size mismatch");
  return m_ * x;
}

std::vector<Triplet> SparseOperator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(m_.nonZeros()));
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m_, r); it; ++it)
      if (it.value() != 0.0) out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  return out;
}

double SparseOperator::norm_inf() const {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m_, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

void SparseOperator::write_triplets(std::ostream& out) const {
  const auto entries = triplets();
  out << rows() << ' ' << cols() << ' ' << entries.size() << '\n';
  out << std::setprecision(17);
  for (const auto& t : entries) out << t.row() << ' ' << t.col() << ' ' << t.value() << '\n';
}

SparseOperator SparseOperator::read_triplets(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  std::size_t count = 0;
  if (!(in >> rows >> cols >> count)) throw FormatError("triplet file: bad header");
  std::vector<Triplet> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    long r = 0, c = 0;
    std::string value;
    if (!(in >> r >> c >> value)) throw FormatError("triplet file: truncated");
    entries.emplace_back(static_cast<int>(r), static_cast<int>(c), std::stod(value));
  }
  return from_triplets(rows, cols, entries);
}

}  // namespace cutsurf
