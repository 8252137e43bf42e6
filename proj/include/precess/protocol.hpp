#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "precess/observables.hpp"

namespace precess {

struct SpectrumInfo {
  std::vector<double> outcomes;     // strictly ascending after dedup
  std::optional<double> x_plus;     // smallest positive outcome
  std::optional<double> x_minus;    // magnitude of the most negative outcome
  bool has_zero = false;
};

// Union of the eigenvalues of X_0, X_1, X_2, deduplicated; throws
// std::runtime_error if the union disagrees with eig(X_0) beyond tolerance
// (broken precession in a raw pair).
SpectrumInfo spectrum(const PrecessingPair& pair, double zero_tol = kDefaultZeroTol);
SpectrumInfo spectrum_from_values(std::vector<double> values, double zero_tol = kDefaultZeroTol);

inline constexpr double kClassicalBound = 2.0 / 3.0;

// (1 + x+/x-)^{-1} when x+ < x- or 0 is not in the spectrum; 1/2 otherwise
// (including one-sided spectra). Throws std::invalid_argument on an empty
// spectrum with no zero.
double general_bound(const SpectrumInfo& spec);

struct ScoreReport {
  double p3;
  std::array<double, 3> per_time;  // <Theta(X_k)>
  double classical_bound = kClassicalBound;
  double general_bound;
  bool violates_classical;
  bool saturates_general;
};

ScoreReport p3_score(const PrecessingPair& pair, const Vector& state);
ScoreReport p3_score(const PrecessingPair& pair, const Matrix& rho);

// Q3 = (1/3) sum_k Theta(X_k)
Matrix score_operator(const PrecessingPair& pair, double zero_tol = kDefaultZeroTol);

// Largest eigenvalue of Q3 and its eigenvector.
std::pair<double, Vector> max_p3(const PrecessingPair& pair);

// max over states of |sum_k <X_k>|
double check_mean_sum_zero(const PrecessingPair& pair, const std::vector<Vector>& states);

struct WitnessReport {
  int distinct_levels;
  double p3_min;
  double p3_max;
  bool trivial;  // p3_min = p3_max = 1/2 within 1e-9
};

// Requires a continuous evolver; throws std::invalid_argument otherwise.
WitnessReport dimension_witness(const PrecessingPair& pair);

// Brute-force maximum of P3 over the N deterministic pointer positions of a
// classical clock with N divisions.
double classical_clock_max_p3(int divisions);

// Real-Hilbert-space encoding: M -> M (x) |i><i| + conj(M) (x) |-i><-i|,
// doubling the dimension; entries are real in the computational basis.
PrecessingPair embed_real(const PrecessingPair& pair);
Matrix embed_real_state(const Matrix& rho);
Matrix embed_real_state(const Vector& psi);

// Grassmannian embedding: M -> M (x) 1_n, rho -> rho (x) 1_n / n.
PrecessingPair embed_grassmann(const PrecessingPair& pair, int n);
Matrix embed_grassmann_state(const Matrix& rho, int n);
Matrix embed_grassmann_state(const Vector& psi, int n);

// Deterministic Haar-like random pure state from a seeded substream.
Vector random_state(Eigen::Index dim, std::uint64_t seed);

}  // namespace precess
