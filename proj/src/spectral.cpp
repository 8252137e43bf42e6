#include "precess/spectral.hpp"

#include <stdexcept>

namespace precess {

double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const Matrix& m, double tol) { return hermiticity_error(m) <= tol; }

EigenSystem eig_hermitian(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square with dim >= 1");
  const double err = hermiticity_error(m);
  if (err > 1e-12)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian (relative asymmetry " +
                                std::to_string(err) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

Matrix apply_step(const Matrix& m, double zero_tol, double zero_value) {
  const EigenSystem es = eig_hermitian(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double cut = zero_tol * scale;
  RealVector f(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lambda = es.values[i];
    f[i] = lambda > cut ? 1.0 : (lambda < -cut ? 0.0 : zero_value);
  }
  Matrix result = es.vectors * f.asDiagonal() * es.vectors.adjoint();
  return ((result + result.adjoint()) / 2.0).eval();
}

}  // namespace

Matrix heaviside(const Matrix& m, double zero_tol) {
  if (zero_tol < 0) throw std::invalid_argument("heaviside: zero_tol must be >= 0");
  return apply_step(m, zero_tol, 0.5);
}

Matrix sign_op(const Matrix& m, double zero_tol) {
  return (2.0 * heaviside(m, zero_tol) - Matrix::Identity(m.rows(), m.cols())).eval();
}

Matrix evolve_heisenberg(const Matrix& m, const Matrix& h, double t) {
  if (m.rows() != h.rows() || m.cols() != h.cols())
    throw std::invalid_argument("evolve_heisenberg: dimension mismatch");
  const EigenSystem es = eig_hermitian(h);
  Vector phases(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    phases[i] = std::exp(Complex(0.0, es.values[i] * t));
  const Matrix u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
  Matrix result = u * m * u.adjoint();
  return ((result + result.adjoint()) / 2.0).eval();
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix result = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  result.topLeftCorner(a.rows(), a.cols()) = a;
  result.bottomRightCorner(b.rows(), b.cols()) = b;
  return result;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix result(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      result.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return result;
}

}  // namespace precess
