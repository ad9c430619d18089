#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "translin/linalg.hpp"
#include "translin/rng.hpp"

#include <Eigen/LU>

#include <cmath>

using namespace translin;

namespace {

// Independent oracles. They assemble and solve the optimality systems
// directly with dense LU, never touching the SVD code path under test.

// min ||a - a0||^2 subject to A^T a = y via the stationarity system
//   [ I   A ] [a     ]   [a0]
//   [ A^T 0 ] [lambda] = [y ].
Vector kkt_oracle(const Matrix& a, const Vector& y, const Vector& a0) {
  const Index d = a.rows(), n = a.cols();
  Matrix kkt = Matrix::Zero(d + n, d + n);
  kkt.topLeftCorner(d, d) = Matrix::Identity(d, d);
  kkt.topRightCorner(d, n) = a;
  kkt.bottomLeftCorner(n, d) = a.transpose();
  Vector rhs(d + n);
  rhs.head(d) = a0;
  rhs.tail(n) = y;
  const Vector solution = Eigen::FullPivLU<Matrix>(kkt).solve(rhs);
  return solution.head(d);
}

// Normal equations (A A^T) x = A y solved by LU.
Vector normal_equations_oracle(const Matrix& a, const Vector& y) {
  const Matrix gram = a * a.transpose();
  return Eigen::FullPivLU<Matrix>(gram).solve(a * y);
}

}  // namespace

TEST_CASE("regime classifier marks the threshold band") {
  CHECK(classify_regime(10, 5) == Regime::Overparameterized);
  CHECK(classify_regime(5, 10) == Regime::Underparameterized);
  CHECK(classify_regime(10, 10) == Regime::Threshold);
  CHECK(classify_regime(10, 9) == Regime::Threshold);
  CHECK(classify_regime(9, 10) == Regime::Threshold);
  CHECK(classify_regime(11, 9) == Regime::Overparameterized);
}

TEST_CASE("min_norm_fit on single constraint") {
  Matrix a(2, 1);
  a << 1, 0;
  Vector y(1);
  y << 2;
  const Vector got = min_norm_fit<double>(a, y);
  CHECK(got[0] == doctest::Approx(2.0));
  CHECK(got[1] == doctest::Approx(0.0));
}

TEST_CASE("min_norm_fit with unit-vector columns") {
  Matrix a = Matrix::Zero(3, 2);
  a(0, 0) = 1;
  a(1, 1) = 1;
  Vector y(2);
  y << 1, 2;
  const Vector got = min_norm_fit<double>(a, y);
  CHECK(got[0] == doctest::Approx(1.0));
  CHECK(got[1] == doctest::Approx(2.0));
  CHECK(got[2] == doctest::Approx(0.0));
}

TEST_CASE("min_norm_fit matches the KKT oracle on random systems") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.normal_matrix(20, 5);
    const Vector y = rng.normal_vector(5);
    const Vector got = min_norm_fit<double>(a, y);
    const Vector want = kkt_oracle(a, y, Vector::Zero(20));
    CHECK((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
    // Residual contract.
    CHECK((a.transpose() * got - y).norm() <= 1e-8 * (1.0 + y.norm()));
  }
}

TEST_CASE("min_norm_fit output is orthogonal to the null space of A^T") {
  Rng rng(13);
  const Matrix a = rng.normal_matrix(12, 4);
  const Vector y = rng.normal_vector(4);
  const Vector got = min_norm_fit<double>(a, y);
  const Matrix kernel = Eigen::FullPivLU<Matrix>(a.transpose()).kernel();
  REQUIRE(kernel.cols() == 8);
  for (Index j = 0; j < kernel.cols(); ++j) {
    const Vector z = kernel.col(j).normalized();
    CHECK(std::abs(got.dot(z)) <= 1e-9 * (1.0 + got.norm()));
  }
}

TEST_CASE("min_norm_fit rejects rank-deficient input") {
  Matrix a(3, 2);
  a.col(0) << 1, 2, 3;
  a.col(1) = 2.0 * a.col(0);
  Vector y(2);
  y << 1, 2;
  CHECK_THROWS_AS(min_norm_fit<double>(a, y), SingularMatrixError);
}

TEST_CASE("min_norm_fit_from_init touches only the constrained coordinate") {
  Matrix a(2, 1);
  a << 1, 0;
  Vector y(1);
  y << 2;
  Vector a0(2);
  a0 << 0, 1;
  const Vector got = min_norm_fit_from_init<double>(a, y, a0);
  CHECK(got[0] == doctest::Approx(2.0));
  CHECK(got[1] == doctest::Approx(1.0));
}

TEST_CASE("min_norm_fit_from_init returns a feasible init unchanged") {
  Rng rng(17);
  const Matrix a = rng.normal_matrix(10, 3);
  Vector a0 = rng.normal_vector(10);
  const Vector y = a.transpose() * a0;
  const Vector got = min_norm_fit_from_init<double>(a, y, a0);
  CHECK((got - a0).norm() <= 1e-10 * (1.0 + a0.norm()));
}

TEST_CASE("min_norm_fit_from_init matches the QP oracle") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.normal_matrix(15, 6);
    const Vector y = rng.normal_vector(6);
    const Vector a0 = rng.normal_vector(15);
    const Vector got = min_norm_fit_from_init<double>(a, y, a0);
    const Vector want = kkt_oracle(a, y, a0);
    CHECK((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
  }
}

TEST_CASE("min_norm_fit_from_init with zero init equals min_norm_fit") {
  Rng rng(23);
  const Matrix a = rng.normal_matrix(9, 4);
  const Vector y = rng.normal_vector(4);
  const Vector plain = min_norm_fit<double>(a, y);
  const Vector from_zero = min_norm_fit_from_init<double>(a, y, Vector::Zero(9));
  CHECK((plain - from_zero).norm() <= 1e-12 * (1.0 + plain.norm()));
}

TEST_CASE("least_squares_fit on the identity") {
  const Matrix a = Matrix::Identity(2, 2);
  Vector y(2);
  y << 1, 2;
  const Vector got = least_squares_fit<double>(a, y);
  CHECK(got[0] == doctest::Approx(1.0));
  CHECK(got[1] == doctest::Approx(2.0));
}

TEST_CASE("least_squares_fit interpolates consistent overdetermined systems") {
  Rng rng(29);
  const Matrix a = rng.normal_matrix(4, 30);
  const Vector truth = rng.normal_vector(4);
  const Vector y = a.transpose() * truth;
  const Vector got = least_squares_fit<double>(a, y);
  CHECK((got - truth).norm() <= 1e-9 * (1.0 + truth.norm()));
  CHECK((a.transpose() * got - y).norm() <= 1e-9 * (1.0 + y.norm()));
}

TEST_CASE("least_squares_fit matches the normal-equations oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.normal_matrix(5, 50);
    const Vector y = rng.normal_vector(50);
    const Vector got = least_squares_fit<double>(a, y);
    const Vector want = normal_equations_oracle(a, y);
    CHECK((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
  }
}

TEST_CASE("projection_residual splits orthogonally") {
  Rng rng(37);
  const Matrix a = rng.normal_matrix(10, 4);

  SUBCASE("vector in the column space has zero residual") {
    const Vector v = a * rng.normal_vector(4);
    const auto parts = projection_residual<double>(a, v);
    CHECK(parts.resid.norm() <= 1e-9 * (1.0 + v.norm()));
  }

  SUBCASE("vector orthogonal to the columns has zero projection") {
    const Matrix kernel = Eigen::FullPivLU<Matrix>(a.transpose()).kernel();
    const Vector v = kernel.col(0);
    const auto parts = projection_residual<double>(a, v);
    CHECK(parts.proj.norm() <= 1e-9 * (1.0 + v.norm()));
  }

  SUBCASE("pythagoras and idempotence on a random vector") {
    const Vector v = rng.normal_vector(10);
    const auto parts = projection_residual<double>(a, v);
    CHECK((parts.proj + parts.resid - v).norm() <= 1e-12 * (1.0 + v.norm()));
    CHECK(std::abs(parts.proj.dot(parts.resid)) <= 1e-10 * v.squaredNorm());
    const double lhs = parts.proj.squaredNorm() + parts.resid.squaredNorm();
    CHECK(std::abs(lhs - v.squaredNorm()) <= 1e-10 * v.squaredNorm());
    const auto again = projection_residual<double>(a, parts.proj);
    CHECK((again.proj - parts.proj).norm() <= 1e-10 * (1.0 + parts.proj.norm()));
  }
}

TEST_CASE("float instantiation stays usable") {
  MatrixX<float> a(3, 1);
  a << 1.f, 0.f, 0.f;
  VectorX<float> y(1);
  y << 4.f;
  const VectorX<float> got = min_norm_fit<float>(a, y);
  CHECK(got[0] == doctest::Approx(4.f));
}
