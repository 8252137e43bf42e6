#pragma once

#include <Eigen/Dense>
#include <complex>

namespace precess {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultZeroTol = 1e-9;

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, one per eigenvalue
};

// max |M_ij - conj(M_ji)| relative to the largest entry magnitude
double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-12);

// Throws std::invalid_argument when the input is not Hermitian within tol.
EigenSystem eig_hermitian(const Matrix& m);

// Spectral projector onto positive eigenvalues plus half the kernel
// projector, with the convention that |lambda| <= zero_tol*max(1,|M|_inf)
// counts as zero.
Matrix heaviside(const Matrix& m, double zero_tol = kDefaultZeroTol);

// 2*heaviside(m) - identity; eigenvalues in {-1, 0, 1}
Matrix sign_op(const Matrix& m, double zero_tol = kDefaultZeroTol);

// e^{iHt} M e^{-iHt}
Matrix evolve_heisenberg(const Matrix& m, const Matrix& h, double t);

Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace precess
