#include <doctest.h>

#include <cmath>

#include "precess/spectral.hpp"
#include "test_util.hpp"

using namespace precess;
using precess::testing::random_hermitian;

namespace {

Matrix diag(std::initializer_list<double> vals) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(vals.size()),
                          static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) m(i, i) = v, ++i;
  return m;
}

// The four-level observable X(x+, x-) written out by hand, used as a
// nontrivial fixture with known spectrum {-x-, -x+, x+, x-}.
Matrix four_level_x(double xp, double xm) {
  Matrix m = Matrix::Zero(4, 4);
  const double a = std::sqrt(xp * xm), b = xm - xp;
  m(0, 1) = a;
  m(1, 2) = b;
  m(2, 3) = a;
  return (m + m.adjoint()).eval();
}

}  // namespace

TEST_CASE("hermiticity check") {
  CHECK(is_hermitian(diag({1, 2, 3})));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, 1);
  CHECK_FALSE(is_hermitian(m));
  m(1, 0) = Complex(0, -1);
  CHECK(is_hermitian(m));
  CHECK(hermiticity_error(m) == doctest::Approx(0.0));
}

TEST_CASE("eig_hermitian on a diagonal matrix") {
  const EigenSystem es = eig_hermitian(diag({3, -1, 1, -3}));
  REQUIRE(es.values.size() == 4);
  CHECK(es.values[0] == doctest::Approx(-3).epsilon(1e-12));
  CHECK(es.values[1] == doctest::Approx(-1).epsilon(1e-12));
  CHECK(es.values[2] == doctest::Approx(1).epsilon(1e-12));
  CHECK(es.values[3] == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}

TEST_CASE("eig_hermitian reconstructs the matrix") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_hermitian(5, rng);
    const EigenSystem es = eig_hermitian(m);
    const Matrix rebuilt =
        es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK((rebuilt - m).norm() <= 1e-12 * std::max(1.0, m.norm()));
    CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(5, 5)).norm() <= 1e-12);
  }
}

TEST_CASE("four-level fixture eigenstructure") {
  const Matrix x = four_level_x(1.0, 3.0);
  const EigenSystem es = eig_hermitian(x);
  CHECK(es.values[0] == doctest::Approx(-3).epsilon(1e-12));
  CHECK(es.values[1] == doctest::Approx(-1).epsilon(1e-12));
  CHECK(es.values[2] == doctest::Approx(1).epsilon(1e-12));
  CHECK(es.values[3] == doctest::Approx(3).epsilon(1e-12));

  // Eigenvector of the top eigenvalue +3 is proportional to (1, sqrt3, sqrt3, 1).
  Vector expected(4);
  const double s3 = std::sqrt(3.0);
  expected << 1.0, s3, s3, 1.0;
  expected /= expected.norm();
  const Vector got = es.vectors.col(3);
  const double overlap = std::abs((expected.adjoint() * got)(0, 0));
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("heaviside on diagonal matrices") {
  const Matrix t = heaviside(diag({2, -5}));
  CHECK(std::abs(t(0, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(t(1, 1) - Complex(0, 0)) <= 1e-14);

  // Zero eigenvalues map to 1/2.
  const Matrix z = heaviside(diag({0, 1, -1}));
  CHECK(std::abs(z(0, 0) - Complex(0.5, 0)) <= 1e-14);
  CHECK(std::abs(z(1, 1) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(z(2, 2) - Complex(0, 0)) <= 1e-14);
}

TEST_CASE("heaviside zero cut scales with the matrix") {
  // 1e-12 is below the absolute cut for a matrix with entries of order 1.
  const Matrix t = heaviside(diag({1e-12, 1.0}));
  CHECK(std::abs(t(0, 0) - Complex(0.5, 0)) <= 1e-14);
  // ... but a genuinely positive eigenvalue survives.
  const Matrix u = heaviside(diag({1e-3, 1.0}));
  CHECK(std::abs(u(0, 0) - Complex(1, 0)) <= 1e-14);
}

TEST_CASE("heaviside properties on random Hermitian matrices") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_hermitian(6, rng);
    const Matrix t = heaviside(m);
    CHECK(is_hermitian(t, 1e-12));
    // Theta(M) commutes with M.
    CHECK((t * m - m * t).norm() <= 1e-10 * std::max(1.0, m.norm()));
    // Theta(M) + Theta(-M) = 1 (kernel halves add up).
    CHECK((t + heaviside((-m).eval()) - Matrix::Identity(6, 6)).norm() <= 1e-10);
    // Idempotent up to the kernel contribution: eigenvalues in {0, 1/2, 1}.
    for (double lam : eig_hermitian(t).values) {
      const double d = std::min({std::abs(lam), std::abs(lam - 0.5), std::abs(lam - 1.0)});
      CHECK(d <= 1e-12);
    }
  }
}

TEST_CASE("sign_op") {
  const Matrix s = sign_op(diag({2, -5}));
  CHECK(std::abs(s(0, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(s(1, 1) - Complex(-1, 0)) <= 1e-14);
  CHECK(sign_op(Matrix::Zero(3, 3)).norm() <= 1e-14);

  // The four-level spectrum is symmetric, so sgn is traceless.
  const Matrix x = four_level_x(0.7, 1.9);
  CHECK(std::abs(sign_op(x).trace()) <= 1e-12);
}

TEST_CASE("evolve_heisenberg basics") {
  std::mt19937_64 rng(31);
  const Matrix m = random_hermitian(4, rng);
  const Matrix h = random_hermitian(4, rng);

  CHECK((evolve_heisenberg(m, h, 0.0) - m).norm() <= 1e-12);
  // H commutes with itself: evolution is trivial.
  CHECK((evolve_heisenberg(h, h, 1.7) - h).norm() <= 1e-10);
  // Group property: evolving by s then t equals evolving by s + t.
  const Matrix two_step = evolve_heisenberg(evolve_heisenberg(m, h, 0.4), h, 0.9);
  CHECK((two_step - evolve_heisenberg(m, h, 1.3)).norm() <= 1e-10);
  // Hermiticity and spectrum are preserved.
  const Matrix mt = evolve_heisenberg(m, h, 2.3);
  CHECK(is_hermitian(mt, 1e-12));
  CHECK((eig_hermitian(mt).values - eig_hermitian(m).values).norm() <= 1e-10);
}

TEST_CASE("evolve_heisenberg rotates the four-level pair") {
  const Matrix x = four_level_x(1.0, 3.0);
  Matrix y = Matrix::Zero(4, 4);
  const double a = std::sqrt(3.0), b = 2.0;
  y(0, 1) = Complex(0, -a);
  y(1, 2) = Complex(0, -b);
  y(2, 3) = Complex(0, -a);
  y = (y + y.adjoint()).eval();
  const Matrix h = diag({0, 1, 2, 3});

  const double t = 2.0 * M_PI / 3.0;
  const Matrix expected = std::cos(t) * x + std::sin(t) * y;
  CHECK((evolve_heisenberg(x, h, t) - expected).norm() <= 1e-12);
}

TEST_CASE("direct_sum") {
  const Matrix s = direct_sum(diag({1, 2}), diag({-1}));
  REQUIRE(s.rows() == 3);
  CHECK(std::abs(s(0, 0) - Complex(1, 0)) <= 1e-15);
  CHECK(std::abs(s(1, 1) - Complex(2, 0)) <= 1e-15);
  CHECK(std::abs(s(2, 2) - Complex(-1, 0)) <= 1e-15);
  CHECK(s.norm() == doctest::Approx(std::sqrt(6.0)));

  // Spectrum of a direct sum is the union of the block spectra.
  std::mt19937_64 rng(5);
  const Matrix a = random_hermitian(3, rng), b = random_hermitian(2, rng);
  RealVector merged(5);
  merged << eig_hermitian(a).values, eig_hermitian(b).values;
  std::sort(merged.begin(), merged.end());
  CHECK((eig_hermitian(direct_sum(a, b)).values - merged).norm() <= 1e-10);
}

TEST_CASE("kron") {
  std::mt19937_64 rng(13);
  const Matrix a = random_hermitian(3, rng);
  CHECK((kron(a, Matrix::Identity(1, 1)) - a).norm() <= 1e-15);

  const Matrix k = kron(a, Matrix::Identity(2, 2));
  REQUIRE(k.rows() == 6);
  CHECK(std::abs(k.trace() - 2.0 * a.trace()) <= 1e-12);
  // Each eigenvalue of a appears twice in a (x) 1_2.
  const RealVector base = eig_hermitian(a).values;
  const RealVector doubled = eig_hermitian(k).values;
  for (int i = 0; i < 3; ++i) {
    CHECK(doubled[2 * i] == doctest::Approx(base[i]).epsilon(1e-10));
    CHECK(doubled[2 * i + 1] == doctest::Approx(base[i]).epsilon(1e-10));
  }
  // Mixed product rule on a small instance.
  const Matrix b = random_hermitian(2, rng);
  CHECK((kron(a, b) * kron(a, b) - kron((a * a).eval(), (b * b).eval())).norm() <= 1e-10);
}
