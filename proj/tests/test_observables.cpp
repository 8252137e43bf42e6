#include <doctest.h>

#include <cmath>

#include "precess/observables.hpp"
#include "test_util.hpp"

using namespace precess;

TEST_CASE("four-level observables match the closed form") {
  const PrecessingPair pair = make_four_level(1.0, 3.0);
  REQUIRE(pair.dim() == 4);
  const double a = 2.0, b = std::sqrt(3.0);
  CHECK(std::abs(pair.x(1, 2) - Complex(a, 0)) <= 1e-15);
  CHECK(std::abs(pair.x(0, 1) - Complex(b, 0)) <= 1e-15);
  CHECK(std::abs(pair.x(2, 3) - Complex(b, 0)) <= 1e-15);
  CHECK(std::abs(pair.x(0, 2)) <= 1e-15);
  CHECK(std::abs(pair.y(1, 2) - Complex(0, -a)) <= 1e-15);
  CHECK(std::abs(pair.y(0, 1) - Complex(0, -b)) <= 1e-15);

  // At x+ = 1, x- = 3 the observable is exactly 2 J_x for spin 3/2.
  CHECK((pair.x - 2.0 * spin_jx(1.5)).norm() <= 1e-12);
  CHECK((pair.y - 2.0 * spin_jy(1.5)).norm() <= 1e-12);

  // Evolver is the four-level ladder Hamiltonian diag(0,1,2,3).
  const auto& cont = std::get<ContinuousEvolver>(pair.evolver);
  for (int n = 0; n < 4; ++n)
    CHECK(std::abs(cont.hamiltonian(n, n) - Complex(n, 0)) <= 1e-15);
}

TEST_CASE("four-level eigenvectors for random parameters") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double xp = 0.1 + 2.0 * unif(rng);
    const double xm = xp * (1.1 + 4.0 * unif(rng));
    const Matrix x = make_four_level(xp, xm).x;
    const double sp = std::sqrt(xp), sm = std::sqrt(xm);
    const auto eigvec = [&](double v0, double v1, double v2, double v3) {
      Vector v(4);
      v << v0, v1, v2, v3;
      return (v / v.norm()).eval();
    };
    const std::vector<std::pair<double, Vector>> pairs = {
        {xm, eigvec(sp, sm, sm, sp)},
        {-xm, eigvec(sp, -sm, sm, -sp)},
        {xp, eigvec(sm, sp, -sp, -sm)},
        {-xp, eigvec(sm, -sp, -sp, sm)},
    };
    for (const auto& [lambda, v] : pairs)
      CHECK((x * v - lambda * v).norm() <= 1e-10 * xm);
    for (size_t i = 0; i < pairs.size(); ++i)
      for (size_t j = i + 1; j < pairs.size(); ++j)
        CHECK(std::abs((pairs[i].second.adjoint() * pairs[j].second)(0, 0)) <= 1e-12);
  }
}

TEST_CASE("make_four_level validates parameters") {
  CHECK_THROWS_AS(make_four_level(3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_four_level(-1.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(make_four_level(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("spin matrices") {
  const Matrix jx = spin_jx(1.5);
  CHECK(std::abs(jx(0, 1) - Complex(std::sqrt(3.0) / 2.0, 0)) <= 1e-14);
  CHECK(std::abs(jx(1, 2) - Complex(1.0, 0)) <= 1e-14);
  CHECK(std::abs(jx(2, 3) - Complex(std::sqrt(3.0) / 2.0, 0)) <= 1e-14);
  CHECK(std::abs(spin_jz(0.5)(0, 0) - Complex(0.5, 0)) <= 1e-15);
  CHECK(std::abs(spin_jz(0.5)(1, 1) - Complex(-0.5, 0)) <= 1e-15);

  for (double j : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const Matrix x = spin_jx(j), y = spin_jy(j), z = spin_jz(j);
    const Complex i(0, 1);
    CHECK((x * y - y * x - i * z).norm() <= 1e-12);
    CHECK((y * z - z * y - i * x).norm() <= 1e-12);
    // Casimir J^2 = j(j+1) 1
    const Matrix casimir = x * x + y * y + z * z;
    const Eigen::Index dim = casimir.rows();
    CHECK((casimir - j * (j + 1) * Matrix::Identity(dim, dim)).norm() <= 1e-12);
  }
}

TEST_CASE("make_spin precesses and rejects bad j") {
  for (double j : {0.5, 1.0, 1.5, 2.5}) {
    const PrecessingPair pair = make_spin(j);
    CHECK(verify_precession(pair).pass);
    CHECK(pair.dim() == static_cast<Eigen::Index>(std::lround(2 * j)) + 1);
  }
  CHECK_THROWS_AS(make_spin(0.7), std::invalid_argument);
  CHECK_THROWS_AS(make_spin(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_spin(0.0), std::invalid_argument);
}

TEST_CASE("spin rotation identity at arbitrary angle") {
  const double j = 2.0;
  const Matrix x = spin_jx(j), y = spin_jy(j), h = (-spin_jz(j)).eval();
  for (double t : {0.3, 1.0, 2.0 * M_PI / 3.0, 5.5}) {
    const Matrix rotated = evolve_heisenberg(x, h, t);
    CHECK((rotated - std::cos(t) * x - std::sin(t) * y).norm() <= 1e-12);
  }
}

TEST_CASE("clock default parameters") {
  CHECK(clock_default_x_plus(60, 1.0) == doctest::Approx(std::cos(7.0 * M_PI / 15.0)).epsilon(1e-15));
  CHECK(clock_default_x_plus(12, 1.0) == doctest::Approx(std::cos(2.0 * M_PI * 2.0 / 12.0)).epsilon(1e-15));
  CHECK(clock_default_x_plus(12, 2.5) == doctest::Approx(2.5 * std::cos(M_PI / 3.0)).epsilon(1e-15));
}

TEST_CASE("make_clock structure") {
  const int n = 12;
  const PrecessingPair pair = make_clock(n, 1.0);
  REQUIRE(pair.dim() == n + 4);
  CHECK(pair.discrete());
  CHECK(verify_precession(pair).pass);

  // The clock block is a circulant with eigenvalues cos(2*pi*m/N).
  const Matrix block = pair.x.topLeftCorner(n, n);
  RealVector expected(n);
  for (int m = 0; m < n; ++m) expected[m] = std::cos(2.0 * M_PI * m / n);
  std::sort(expected.begin(), expected.end());
  CHECK((eig_hermitian(block).values - expected).norm() <= 1e-12);

  // Off-diagonal coupling between the clock and the appended block vanishes.
  CHECK(pair.x.topRightCorner(n, 4).norm() <= 1e-15);
  CHECK(pair.y.bottomLeftCorner(4, n).norm() <= 1e-15);
}

TEST_CASE("make_clock validates arguments") {
  CHECK_THROWS_AS(make_clock(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_clock(8, 1.0), std::invalid_argument);  // not a multiple of 6
  CHECK_THROWS_AS(make_clock(12, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_clock(12, 1.0, 2.0, 1.0), std::invalid_argument);  // x+ >= x-
}

TEST_CASE("discrete step advances the clock by a third of a turn") {
  const int n = 6;
  const PrecessingPair pair = make_clock(n, 1.0);
  const Matrix u = std::get<DiscreteEvolver>(pair.evolver).step;
  CHECK((u.adjoint() * u - Matrix::Identity(n + 4, n + 4)).norm() <= 1e-12);

  for (int m : {0, 1, 4}) {
    const Vector psi = clock_fourier_state(n, m);
    // <psi| C_x |psi> = cos(2*pi*m/N)
    const double ev = std::real((psi.adjoint() * pair.x * psi)(0, 0));
    CHECK(ev == doctest::Approx(std::cos(2.0 * M_PI * m / n)).epsilon(1e-12));
    // One application of the step shifts the hand: psi_m -> psi_{m - N/3 mod N}
    const Vector shifted = clock_fourier_state(n, ((m - n / 3) % n + n) % n);
    CHECK(((u * psi) - shifted).norm() <= 1e-12);
  }
}

TEST_CASE("clock_fourier_state bounds") {
  CHECK_THROWS_AS(clock_fourier_state(6, -1), std::invalid_argument);
  CHECK_THROWS_AS(clock_fourier_state(6, 6), std::invalid_argument);
  CHECK(clock_fourier_state(6, 2).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("optimal_state placement") {
  const PrecessingPair four = make_four_level(1.0, 3.0);
  const Vector s4 = optimal_state(four);
  CHECK(std::abs(s4[0] - Complex(1.0 / std::sqrt(2.0), 0)) <= 1e-15);
  CHECK(std::abs(s4[3] + Complex(1.0 / std::sqrt(2.0), 0)) <= 1e-15);
  CHECK(std::abs(s4[1]) + std::abs(s4[2]) <= 1e-15);

  const PrecessingPair clock = make_clock(6, 1.0);
  const Vector sc = optimal_state(clock);
  CHECK(sc.head(6).norm() <= 1e-15);
  CHECK(std::abs(sc[6] - Complex(1.0 / std::sqrt(2.0), 0)) <= 1e-15);

  CHECK_THROWS_AS(optimal_state(make_spin(1.5)), std::invalid_argument);
}

TEST_CASE("verify_precession flags a broken pair") {
  PrecessingPair pair = make_four_level(1.0, 3.0);
  CHECK(verify_precession(pair).pass);
  pair.y = (-pair.y).eval();  // reverses the sense of rotation
  const PrecessionReport rep = verify_precession(pair);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1.0);
}

TEST_CASE("raw pairs are validated at construction") {
  const PrecessingPair four = make_four_level(1.0, 3.0);
  const auto& cont = std::get<ContinuousEvolver>(four.evolver);
  // A faithful raw copy is accepted ...
  const PrecessingPair raw =
      make_precessing_pair(RawSpec{four.x, four.y, ContinuousEvolver{cont.hamiltonian, 1.0}});
  CHECK(raw.family == Family::raw);
  CHECK(verify_precession(raw).pass);
  // ... but swapping X and Y (wrong handedness) is rejected.
  CHECK_THROWS_AS(
      make_precessing_pair(RawSpec{four.y, four.x, ContinuousEvolver{cont.hamiltonian, 1.0}}),
      std::invalid_argument);
}

TEST_CASE("propagator group property") {
  for (const PrecessingPair& pair : {make_four_level(1.0, 2.72), make_clock(6, 1.0)}) {
    const Matrix u1 = pair.propagator(1);
    CHECK((pair.propagator(2) - u1 * u1).norm() <= 1e-12);
    // Three probing steps complete a full period on the observables.
    CHECK((pair.x_at(3) - pair.x).norm() <= 1e-9);
  }
}
