#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "cutsurf/sparse.hpp"

namespace cutsurf {

/// Reusable sparse LU factorization of a square operator.
///
/// solve() applies up to two passes of iterative refinement and checks
/// ||Ax - b||_inf <= 1e-10 (||A||_inf ||x||_inf + ||b||_inf).
/// Immutable after construction; concurrent solves are safe.
class Factorization {
 public:
  /// Throws SingularMatrixError (with the failing column when known).
  explicit Factorization(const SparseOperator& a);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  Eigen::Index size() const;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Column-by-column solve without refinement checks.
  Eigen::MatrixXd solve_block(const Eigen::MatrixXd& b) const;

  /// Number of solve() calls served.
  std::size_t reuse_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Factorization factorize(const SparseOperator& a);

struct BorderedSolution {
  Eigen::VectorXd u;
  double beta = 0.0;
};

/// Solves [A 1; 1^T 0][u; beta] = [f; 0]. Throws SingularMatrixError if the
/// bordered system is singular (null space of A not one-dimensional).
BorderedSolution bordered_solve(const SparseOperator& a, const Eigen::VectorXd& f);

struct Eigenpair {
  std::complex<double> value;
  double residual = 0.0;  ///< ||A v - lambda v|| / ||v||
};

struct EigenOptions {
  /// Shift for shift-invert; a NaN picks 1e-4 ||A||_inf.
  double shift = std::numeric_limits<double>::quiet_NaN();
  int extra = 12;          ///< Ritz values computed beyond `count` before re-sorting
  double tolerance = 1e-13;
  int max_restarts = 3000;
  Eigen::Index dense_threshold = 400;  ///< n at or below which a dense solver is used
};

/// The `count` eigenvalues of smallest magnitude, ascending by magnitude.
/// Uses shift-invert Arnoldi around a small shift with a sparse LU.
std::vector<Eigenpair> smallest_eigenvalues(const SparseOperator& a, int count,
                                            const EigenOptions& options = {});

}  // namespace cutsurf
