#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cutsurf {

using Triplet = Eigen::Triplet<double>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-major sparse matrix: rows are output points, columns input points.
/// Duplicate (row, col) entries are summed on assembly.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(Eigen::Index rows, Eigen::Index cols) : m_(rows, cols) {}
  explicit SparseOperator(SparseMatrix m) : m_(std::move(m)) { m_.makeCompressed(); }

  static SparseOperator from_triplets(Eigen::Index rows, Eigen::Index cols,
                                      const std::vector<Triplet>& entries);
  static SparseOperator identity(Eigen::Index n);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  Eigen::Index nonzeros() const { return m_.nonZeros(); }

  const SparseMatrix& matrix() const { return m_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

  /// Entries in row-major order, explicit zeros skipped.
  std::vector<Triplet> triplets() const;

  double coeff(Eigen::Index r, Eigen::Index c) const { return m_.coeff(r, c); }

  /// Max absolute row sum.
  double norm_inf() const;

  /// Coordinate-triplet text: header "rows cols nnz" then "row col value" lines.
  void write_triplets(std::ostream& out) const;
  static SparseOperator read_triplets(std::istream& in);

 private:
  SparseMatrix m_;
};

}  // namespace cutsurf
