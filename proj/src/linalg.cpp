#include "cutsurf/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <arpack/arpack.hpp>

#include "cutsurf/errors.hpp"

namespace cutsurf {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Factorization::Impl {
  ColMatrix a;
  double a_norm = 0.0;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  mutable std::atomic<std::size_t> solves{0};
};

Factorization::Factorization(const SparseOperator& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorize: matrix must be square");
  impl_->a = ColMatrix(a.matrix());
  impl_->a.makeCompressed();
  impl_->a_norm = a.norm_inf();
  impl_->lu.analyzePattern(impl_->a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "factorize: singular matrix (" << impl_->lu.lastErrorMessage() << ")";
    throw SingularMatrixError(msg.str());
  }
  // SparseLU only flags exact zero pivots; catch rank deficiency showing up as
  // round-off sized pivots via the log-determinant.
  const double logdet = impl_->lu.logAbsDeterminant();
  if (!std::isfinite(logdet)) throw SingularMatrixError("factorize: singular matrix (zero pivot)");
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Eigen::Index Factorization::size() const { return impl_->a.rows(); }

std::size_t Factorization::reuse_count() const { return impl_->solves.load(); }

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  if (b.size() != size()) throw std::invalid_argument("Factorization::solve: size mismatch");
  ++impl_->solves;
  Eigen::VectorXd x = impl_->lu.solve(b);
  auto bound = [&](const Eigen::VectorXd& v) {
    return 1e-10 * (impl_->a_norm * v.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  };
  Eigen::VectorXd r = b - impl_->a * x;
  for (int pass = 0; pass < 2 && r.lpNorm<Eigen::Infinity>() > 1e-3 * bound(x); ++pass) {
    x += impl_->lu.solve(r);
    r = b - impl_->a * x;
  }
  if (!x.allFinite() || r.lpNorm<Eigen::Infinity>() > bound(x)) {
    std::ostringstream msg;
    msg << "Factorization::solve: residual " << r.lpNorm<Eigen::Infinity>()
        << " exceeds bound " << bound(x) << " (matrix numerically singular?)";
    throw SingularMatrixError(msg.str());
  }
  return x;
}

Eigen::MatrixXd Factorization::solve_block(const Eigen::MatrixXd& b) const {
  if (b.rows() != size()) throw std::invalid_argument("Factorization::solve_block: size mismatch");
  return impl_->lu.solve(b);
}

Factorization factorize(const SparseOperator& a) { return Factorization(a); }

BorderedSolution bordered_solve(const SparseOperator& a, const Eigen::VectorXd& f) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || f.size() != n) throw std::invalid_argument("bordered_solve: size mismatch");
  std::vector<Triplet> entries = a.triplets();
  entries.reserve(entries.size() + 2 * static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(n), 1.0);
    entries.emplace_back(static_cast<int>(n), static_cast<int>(i), 1.0);
  }
  const auto bordered = SparseOperator::from_triplets(n + 1, n + 1, entries);
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = f;
  rhs[n] = 0.0;
  const Factorization lu(bordered);
  const Eigen::VectorXd x = lu.solve(rhs);
  return {x.head(n), x[n]};
}

namespace {

std::vector<Eigenpair> dense_eigenvalues(const SparseOperator& a, int count) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(a.matrix());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, true);
  if (solver.info() != Eigen::Success) throw SolverError("dense eigensolver did not converge");
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    return std::abs(values[x]) < std::abs(values[y]);
  });
  std::vector<Eigenpair> out;
  const Eigen::MatrixXcd ac = dense.cast<std::complex<double>>();
  for (int i = 0; i < count; ++i) {
    const auto idx = order[i];
    const Eigen::VectorXcd v = vectors.col(idx);
    const double res = (ac * v - values[idx] * v).norm() / v.norm();
    out.push_back({values[idx], res});
  }
  return out;
}

}  // namespace

std::vector<Eigenpair> smallest_eigenvalues(const SparseOperator& a, int count,
                                            const EigenOptions& options) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("smallest_eigenvalues: matrix must be square");
  if (count <= 0 || count > n) throw std::invalid_argument("smallest_eigenvalues: bad count");
  if (n <= options.dense_threshold || count + options.extra + 2 >= n) return dense_eigenvalues(a, count);

  const double shift = std::isnan(options.shift) ? 1e-4 * a.norm_inf() : options.shift;
  std::vector<Triplet> entries = a.triplets();
  for (Eigen::Index i = 0; i < n; ++i)
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), -shift);
  const Factorization lu(SparseOperator::from_triplets(n, n, entries));

  const a_int nn = static_cast<a_int>(n);
  const a_int nev = static_cast<a_int>(std::min<Eigen::Index>(count + options.extra, n - 2));
  const a_int ncv = static_cast<a_int>(std::min<Eigen::Index>(std::max<a_int>(2 * nev + 1, nev + 40), n));
  const a_int lworkl = 3 * ncv * ncv + 6 * ncv;
  std::vector<double> resid(static_cast<std::size_t>(n), 0.0);
  // Deterministic start vector instead of ARPACK's internal random one.
  for (Eigen::Index i = 0; i < n; ++i)
    resid[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(ncv));
  std::vector<double> workd(3 * static_cast<std::size_t>(n));
  std::vector<double> workl(static_cast<std::size_t>(lworkl));
  a_int iparam[11] = {0};
  a_int ipntr[14] = {0};
  iparam[0] = 1;
  iparam[2] = options.max_restarts;
  iparam[6] = 1;
  a_int ido = 0;
  a_int info = 1;

  while (true) {
    arpack::naupd(ido, arpack::bmat::identity, nn, arpack::which::largest_magnitude, nev,
                  options.tolerance, resid.data(), ncv, v.data(), nn, iparam, ipntr, workd.data(),
                  workl.data(), lworkl, info);
    if (ido != -1 && ido != 1) break;
    Eigen::Map<const Eigen::VectorXd> x(workd.data() + ipntr[0] - 1, n);
    Eigen::Map<Eigen::VectorXd> y(workd.data() + ipntr[1] - 1, n);
    y = lu.solve_block(x);
  }
  if (info < 0) {
    std::ostringstream msg;
    msg << "eigensolver: naupd error " << info;
    throw SolverError(msg.str());
  }
  if (info == 1) throw SolverError("eigensolver: iteration cap reached before convergence");

  std::vector<a_int> select(static_cast<std::size_t>(ncv), 0);
  std::vector<double> dr(static_cast<std::size_t>(nev) + 1), di(static_cast<std::size_t>(nev) + 1);
  std::vector<double> z(static_cast<std::size_t>(n) * (static_cast<std::size_t>(nev) + 1));
  std::vector<double> workev(3 * static_cast<std::size_t>(ncv));
  a_int info_eupd = 0;
  arpack::neupd(1, arpack::howmny::ritz_vectors, select.data(), dr.data(), di.data(), z.data(), nn,
                0.0, 0.0, workev.data(), arpack::bmat::identity, nn,
                arpack::which::largest_magnitude, nev, options.tolerance, resid.data(), ncv,
                v.data(), nn, iparam, ipntr, workd.data(), workl.data(), lworkl, info_eupd);
  if (info_eupd != 0) {
    std::ostringstream msg;
    msg << "eigensolver: neupd error " << info_eupd;
    throw SolverError(msg.str());
  }
  const a_int converged = iparam[4];

  std::vector<Eigenpair> pairs;
  const auto& m = a.matrix();
  for (a_int i = 0; i < converged; ++i) {
    const std::complex<double> mu(dr[i], di[i]);
    const std::complex<double> lambda = shift + 1.0 / mu;
    Eigen::Map<const Eigen::VectorXd> re(z.data() + static_cast<std::size_t>(i) * n, n);
    double res = 0.0;
    if (mu.imag() == 0.0) {
      res = (m * re - lambda.real() * re).norm() / re.norm();
    } else {
      // Complex pair: columns i, i+1 hold real and imaginary parts.
      const bool first = (i + 1 < converged) && di[i] > 0;
      const a_int base = first ? i : i - 1;
      Eigen::Map<const Eigen::VectorXd> vr(z.data() + static_cast<std::size_t>(base) * n, n);
      Eigen::Map<const Eigen::VectorXd> vi(z.data() + static_cast<std::size_t>(base + 1) * n, n);
      Eigen::VectorXcd vec = vr.cast<std::complex<double>>() +
                             std::complex<double>(0, first ? 1 : -1) * vi.cast<std::complex<double>>();
      const Eigen::VectorXcd av = m.cast<std::complex<double>>() * vec;
      res = (av - lambda * vec).norm() / vec.norm();
    }
    pairs.push_back({lambda, res});
  }
  if (static_cast<int>(pairs.size()) < count) throw SolverError("eigensolver: too few converged Ritz values");
  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& x, const Eigenpair& y) {
    return std::abs(x.value) < std::abs(y.value);
  });
  pairs.resize(static_cast<std::size_t>(count));
  return pairs;
}

}  // namespace cutsurf
