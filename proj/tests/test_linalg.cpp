#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cutsurf/errors.hpp"
#include "cutsurf/linalg.hpp"

using namespace cutsurf;

namespace {

SparseOperator periodic_laplacian(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, -2.0);
    t.emplace_back(i, (i + 1) % n, 1.0);
    t.emplace_back(i, (i + n - 1) % n, 1.0);
  }
  return SparseOperator::from_triplets(n, n, t);
}

// Magnitudes of the periodic second-difference spectrum, ascending.
std::vector<double> periodic_spectrum(int n) {
  std::vector<double> m;
  for (int k = 0; k < n; ++k) m.push_back(2.0 - 2.0 * std::cos(2 * std::numbers::pi * k / n));
  std::sort(m.begin(), m.end());
  return m;
}

void check_periodic(int n, int count) {
  const auto pairs = smallest_eigenvalues(periodic_laplacian(n), count);
  const auto exact = periodic_spectrum(n);
  REQUIRE(static_cast<int>(pairs.size()) == count);
  for (int i = 0; i < count; ++i) {
    CHECK(std::abs(pairs[i].value.imag()) < 1e-10);
    CHECK(pairs[i].value.real() == doctest::Approx(-exact[i]).epsilon(1e-9).scale(1.0));
    CHECK(pairs[i].residual < 1e-8);
  }
}

}  // namespace

TEST_CASE("factorization solves and counts reuse") {
  const auto a = SparseOperator::from_triplets(3, 3, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 1, 3.0}, {2, 0, 1.0}, {2, 2, 2.0}});
  const Factorization lu(a);
  const Eigen::Vector3d x(1.0, -2.0, 0.5);
  const Eigen::VectorXd b = a.apply(Eigen::VectorXd(x));
  CHECK((lu.solve(b) - x).norm() < 1e-14);
  CHECK((lu.solve(2 * b) - 2 * x).norm() < 1e-14);
  CHECK(lu.reuse_count() == 2);
  Eigen::MatrixXd block(3, 2);
  block << b, -b;
  const Eigen::MatrixXd xs = lu.solve_block(block);
  CHECK((xs.col(0) - x).norm() < 1e-14);
  CHECK((xs.col(1) + x).norm() < 1e-14);
  CHECK((factorize(SparseOperator::identity(5)).solve(Eigen::VectorXd::LinSpaced(5, 1, 5)) -
         Eigen::VectorXd::LinSpaced(5, 1, 5)).norm() == 0.0);
}

TEST_CASE("repeated solves are bitwise identical") {
  const auto a = periodic_laplacian(50);
  std::vector<Triplet> t;
  for (const auto& e : a.triplets()) t.push_back(e);
  for (int i = 0; i < 50; ++i) t.emplace_back(i, i, -0.5);
  const Factorization lu(SparseOperator::from_triplets(50, 50, t));
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(50, -1, 1);
  const Eigen::VectorXd x1 = lu.solve(b), x2 = lu.solve(b);
  CHECK(std::equal(x1.data(), x1.data() + x1.size(), x2.data()));
}

TEST_CASE("singular matrices are reported") {
  const auto s = SparseOperator::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}});
  CHECK_THROWS_AS(Factorization{s}, SingularMatrixError);
  CHECK_THROWS_AS(Factorization{SparseOperator(3, 3)}, SingularMatrixError);
}

TEST_CASE("bordered solve fixes the constant null space") {
  const auto a = periodic_laplacian(40);
  const auto r = bordered_solve(a, Eigen::VectorXd::Ones(40));
  CHECK(r.u.lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(r.beta == doctest::Approx(1.0));

  Eigen::VectorXd f(40);
  for (int i = 0; i < 40; ++i) f[i] = std::sin(2 * std::numbers::pi * i / 40) + 0.3;
  const auto s = bordered_solve(a, f);
  CHECK(std::abs(s.u.sum()) < 1e-12);
  CHECK(s.beta == doctest::Approx(0.3));
  CHECK((a.apply(s.u) + Eigen::VectorXd::Constant(40, s.beta) - f).lpNorm<Eigen::Infinity>() < 1e-12);

  const auto one = bordered_solve(SparseOperator(1, 1), Eigen::VectorXd::Constant(1, 2.5));
  CHECK(one.u[0] == 0.0);
  CHECK(one.beta == doctest::Approx(2.5));

  CHECK_THROWS_AS(bordered_solve(SparseOperator(2, 2), Eigen::VectorXd::Ones(2)), SingularMatrixError);
}

TEST_CASE("eigenvalues of a diagonal matrix, ascending by magnitude") {
  std::vector<Triplet> t;
  const double d[] = {-3.0, 0.5, -0.25, 7.0, 2.0};
  for (int i = 0; i < 5; ++i) t.emplace_back(i, i, d[i]);
  const auto pairs = smallest_eigenvalues(SparseOperator::from_triplets(5, 5, t), 3);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].value.real() == doctest::Approx(-0.25));
  CHECK(pairs[1].value.real() == doctest::Approx(0.5));
  CHECK(pairs[2].value.real() == doctest::Approx(2.0));
}

TEST_CASE("periodic second difference: dense and shift-invert paths match the closed form") {
  check_periodic(64, 9);
  check_periodic(1000, 9);
}
