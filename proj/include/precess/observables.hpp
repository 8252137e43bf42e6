#pragma once

#include <optional>
#include <string>
#include <variant>

#include "precess/spectral.hpp"

namespace precess {

inline constexpr double kProbingAngle = 2.0 * M_PI / 3.0;

// Continuous evolution: X(t) = e^{iHt} X e^{-iHt}, probed at t_k = 2*pi*k/(3*omega).
struct ContinuousEvolver {
  Matrix hamiltonian;
  double omega = 1.0;
};

// Discrete evolution: one application of `step` advances by a third of a period,
// X_k = step^{dagger k} X step^k.
struct DiscreteEvolver {
  Matrix step;
};

using Evolver = std::variant<ContinuousEvolver, DiscreteEvolver>;

enum class Family { four_level, spin, clock, raw };

struct PrecessingPair {
  Matrix x;
  Matrix y;
  Evolver evolver;
  Family family = Family::raw;
  std::string label;

  Eigen::Index dim() const { return x.rows(); }
  bool discrete() const { return std::holds_alternative<DiscreteEvolver>(evolver); }

  // Propagator U_k with X_k = U_k^dagger X U_k
  Matrix propagator(int k) const;
  Matrix x_at(int k) const;
  Matrix y_at(int k) const;
};

struct FourLevelSpec {
  double x_plus;
  double x_minus;
};
struct SpinSpec {
  double j;
};
struct ClockSpec {
  int divisions;
  double l = 1.0;
  std::optional<double> x_plus;   // defaults to l*cos(2*pi*(ceil(N/4)-1)/N)
  std::optional<double> x_minus;  // defaults to l
};
struct RawSpec {
  Matrix x;
  Matrix y;
  Evolver evolver;
};
using FamilySpec = std::variant<FourLevelSpec, SpinSpec, ClockSpec, RawSpec>;

double clock_default_x_plus(int divisions, double l);

PrecessingPair make_four_level(double x_plus, double x_minus);
PrecessingPair make_spin(double j);
PrecessingPair make_clock(int divisions, double l, std::optional<double> x_plus = {},
                          std::optional<double> x_minus = {});
PrecessingPair make_precessing_pair(const FamilySpec& spec);

// Standard angular momentum matrices, hbar = 1, basis m = j..-j
Matrix spin_jx(double j);
Matrix spin_jy(double j);
Matrix spin_jz(double j);

// Eigenstate of the clock block of C_x with eigenvalue l*cos(2*pi*n/N),
// padded with zeros on the appended four-level block.
Vector clock_fourier_state(int divisions, int n);

// (|0> - |3>)/sqrt(2) on the four-level block; supported for the
// four-level and clock families.
Vector optimal_state(const PrecessingPair& pair);

struct PrecessionReport {
  double max_residual;
  bool pass;
};

// Residual of X_k = cos(2*pi*k/3) X_0 + sin(2*pi*k/3) Y_0 (and the Y row),
// Frobenius norms, relative to |X_0|.
PrecessionReport verify_precession(const PrecessingPair& pair, double tol = 1e-9);

}  // namespace precess
