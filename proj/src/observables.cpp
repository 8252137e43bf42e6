#include "precess/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace precess {

namespace {

const Complex kI(0.0, 1.0);

Matrix matrix_power(const Matrix& u, int k) {
  Matrix result = Matrix::Identity(u.rows(), u.cols());
  for (int i = 0; i < k; ++i) result = result * u;
  return result;
}

}  // namespace

Matrix PrecessingPair::propagator(int k) const {
  if (const auto* cont = std::get_if<ContinuousEvolver>(&evolver)) {
    const double t = kProbingAngle * k / cont->omega;
    const Eigen::SelfAdjointEigenSolver<Matrix> es(cont->hamiltonian);
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
      phases[i] = std::exp(-kI * es.eigenvalues()[i] * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  return matrix_power(std::get<DiscreteEvolver>(evolver).step, k);
}

Matrix PrecessingPair::x_at(int k) const {
  const Matrix u = propagator(k);
  Matrix result = u.adjoint() * x * u;
  return ((result + result.adjoint()) / 2.0).eval();
}

Matrix PrecessingPair::y_at(int k) const {
  const Matrix u = propagator(k);
  Matrix result = u.adjoint() * y * u;
  return ((result + result.adjoint()) / 2.0).eval();
}

PrecessingPair make_four_level(double x_plus, double x_minus) {
  if (!(x_minus > x_plus && x_plus > 0))
    throw std::invalid_argument("make_four_level: requires x_minus > x_plus > 0");
  const double a = x_minus - x_plus;
  const double b = std::sqrt(x_plus * x_minus);
  Matrix x = Matrix::Zero(4, 4);
  x(1, 2) = x(2, 1) = a;
  x(0, 1) = x(1, 0) = b;
  x(2, 3) = x(3, 2) = b;
  Matrix y = Matrix::Zero(4, 4);
  y(1, 2) = -kI * a;
  y(2, 1) = kI * a;
  y(0, 1) = -kI * b;
  y(1, 0) = kI * b;
  y(2, 3) = -kI * b;
  y(3, 2) = kI * b;
  Matrix h = Matrix::Zero(4, 4);
  for (int n = 0; n < 4; ++n) h(n, n) = n;
  PrecessingPair pair{std::move(x), std::move(y), ContinuousEvolver{std::move(h), 1.0},
                      Family::four_level,
                      "four_level(x+=" + std::to_string(x_plus) + ",x-=" + std::to_string(x_minus) + ")"};
  const auto report = verify_precession(pair, 1e-9);
  if (!report.pass)
    throw std::logic_error("make_four_level: precession check failed at construction");
  return pair;
}

Matrix spin_jz(double j) {
  const int dim = static_cast<int>(std::lround(2 * j)) + 1;
  Matrix jz = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) jz(i, i) = j - i;
  return jz;
}

namespace {

// J+ in the m = j..-j basis: J+|j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
Matrix spin_jplus(double j) {
  const int dim = static_cast<int>(std::lround(2 * j)) + 1;
  Matrix jp = Matrix::Zero(dim, dim);
  for (int i = 1; i < dim; ++i) {
    const double m = j - i;
    jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return jp;
}

}  // namespace

Matrix spin_jx(double j) {
  const Matrix jp = spin_jplus(j);
  return ((jp + jp.adjoint()) / 2.0).eval();
}

Matrix spin_jy(double j) {
  const Matrix jp = spin_jplus(j);
  return ((jp - jp.adjoint()) / (2.0 * kI)).eval();
}

PrecessingPair make_spin(double j) {
  const double two_j = 2 * j;
  if (!(j > 0) || std::abs(two_j - std::lround(two_j)) > 1e-12)
    throw std::invalid_argument("make_spin: j must be a positive half-integer");
  PrecessingPair pair{spin_jx(j), spin_jy(j), ContinuousEvolver{(-spin_jz(j)).eval(), 1.0},
                      Family::spin, "spin(j=" + std::to_string(j) + ")"};
  const auto report = verify_precession(pair, 1e-9);
  if (!report.pass)
    throw std::logic_error("make_spin: precession check failed at construction");
  return pair;
}

double clock_default_x_plus(int divisions, double l) {
  const int m = (divisions + 3) / 4 - 1;  // ceil(N/4) - 1
  return l * std::cos(2.0 * M_PI * m / divisions);
}

PrecessingPair make_clock(int divisions, double l, std::optional<double> x_plus,
                          std::optional<double> x_minus) {
  if (divisions <= 0 || divisions % 6 != 0)
    throw std::invalid_argument("make_clock: N must be a positive multiple of 6");
  if (!(l > 0)) throw std::invalid_argument("make_clock: l must be > 0");
  const double xp = x_plus.value_or(clock_default_x_plus(divisions, l));
  const double xm = x_minus.value_or(l);
  if (!(xm > xp && xp > 0))
    throw std::invalid_argument("make_clock: requires x_minus > x_plus > 0");

  const int n = divisions;
  Matrix shift = Matrix::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) shift(i + 1, i) = 1.0;
  shift(0, n - 1) = 1.0;
  const Matrix cx_block = (l / 2.0) * (shift.adjoint() + shift);
  const Matrix cy_block = (l / (2.0 * kI)) * (shift.adjoint() - shift);

  const PrecessingPair four = make_four_level(xp, xm);
  Matrix cx = direct_sum(cx_block, four.x);
  Matrix cy = direct_sum(cy_block, four.y);

  // U = exp(-i(2*pi/3) sum_n n|n><n|) acting blockwise on the direct sum
  Matrix u = Matrix::Zero(n + 4, n + 4);
  for (int i = 0; i < n; ++i) u(i, i) = std::exp(-kI * (kProbingAngle * i));
  for (int i = 0; i < 4; ++i) u(n + i, n + i) = std::exp(-kI * (kProbingAngle * i));

  PrecessingPair pair{std::move(cx), std::move(cy), DiscreteEvolver{std::move(u)}, Family::clock,
                      "clock(N=" + std::to_string(divisions) + ",l=" + std::to_string(l) + ")"};
  const auto report = verify_precession(pair, 1e-9);
  if (!report.pass)
    throw std::logic_error("make_clock: precession check failed at construction");
  return pair;
}

PrecessingPair make_precessing_pair(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> PrecessingPair {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FourLevelSpec>) {
          return make_four_level(s.x_plus, s.x_minus);
        } else if constexpr (std::is_same_v<T, SpinSpec>) {
          return make_spin(s.j);
        } else if constexpr (std::is_same_v<T, ClockSpec>) {
          return make_clock(s.divisions, s.l, s.x_plus, s.x_minus);
        } else {
          PrecessingPair pair{s.x, s.y, s.evolver, Family::raw, "raw"};
          const auto report = verify_precession(pair, 1e-9);
          if (!report.pass)
            throw std::invalid_argument("raw pair does not precess uniformly (residual " +
                                        std::to_string(report.max_residual) + ")");
          return pair;
        }
      },
      spec);
}

Vector clock_fourier_state(int divisions, int n) {
  if (n < 0 || n >= divisions)
    throw std::invalid_argument("clock_fourier_state: n out of range");
  Vector state = Vector::Zero(divisions + 4);
  const double norm = 1.0 / std::sqrt(static_cast<double>(divisions));
  for (int np = 0; np < divisions; ++np)
    state[np] = norm * std::exp(kI * (2.0 * M_PI * n * np / divisions));
  return state;
}

Vector optimal_state(const PrecessingPair& pair) {
  Eigen::Index offset;
  if (pair.family == Family::four_level) {
    offset = 0;
  } else if (pair.family == Family::clock) {
    offset = pair.dim() - 4;
  } else {
    throw std::invalid_argument("optimal_state: supported for four_level and clock families only");
  }
  Vector state = Vector::Zero(pair.dim());
  state[offset] = 1.0 / std::sqrt(2.0);
  state[offset + 3] = -1.0 / std::sqrt(2.0);
  return state;
}

PrecessionReport verify_precession(const PrecessingPair& pair, double tol) {
  if (pair.x.rows() != pair.y.rows() || pair.x.rows() != pair.x.cols() ||
      pair.y.rows() != pair.y.cols())
    throw std::invalid_argument("verify_precession: X and Y must be square with equal dims");
  const double scale = std::max(1e-300, pair.x.norm());
  double max_residual = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double c = std::cos(kProbingAngle * k);
    const double s = std::sin(kProbingAngle * k);
    max_residual = std::max(max_residual, (pair.x_at(k) - c * pair.x - s * pair.y).norm());
    max_residual = std::max(max_residual, (pair.y_at(k) - c * pair.y + s * pair.x).norm());
  }
  return {max_residual, max_residual <= tol * scale};
}

}  // namespace precess
