#include "precess/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace precess {

namespace {

const Complex kI(0.0, 1.0);

std::vector<double> dedup_sorted(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > tol)
      out.push_back(v);
    else
      out.back() = (out.back() + v) / 2.0;  // merge into cluster mean
  }
  return out;
}

double real_expectation(const Matrix& op, const Vector& psi) {
  return std::real(Complex(psi.adjoint() * op * psi));
}

}  // namespace

SpectrumInfo spectrum_from_values(std::vector<double> values, double zero_tol) {
  if (values.empty()) throw std::invalid_argument("spectrum: no outcomes");
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double tol = zero_tol * scale;
  SpectrumInfo info;
  info.outcomes = dedup_sorted(std::move(values), tol);
  for (double v : info.outcomes) {
    if (std::abs(v) <= tol) {
      info.has_zero = true;
    } else if (v > 0) {
      if (!info.x_plus) info.x_plus = v;  // outcomes ascend: first positive is the smallest
    } else {
      if (!info.x_minus) info.x_minus = -v;  // first entry is the most negative outcome
    }
  }
  return info;
}

SpectrumInfo spectrum(const PrecessingPair& pair, double zero_tol) {
  std::vector<double> all;
  std::vector<double> at_zero;
  for (int k = 0; k < 3; ++k) {
    const EigenSystem es = eig_hermitian(pair.x_at(k));
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      all.push_back(es.values[i]);
      if (k == 0) at_zero.push_back(es.values[i]);
    }
  }
  double scale = 1.0;
  for (double v : all) scale = std::max(scale, std::abs(v));
  const double tol = std::max(zero_tol, 1e-9) * scale;
  const auto union_outcomes = dedup_sorted(all, tol);
  const auto base_outcomes = dedup_sorted(at_zero, tol);
  if (union_outcomes.size() != base_outcomes.size())
    throw std::runtime_error("spectrum: outcome set is not time independent (broken precession)");
  for (std::size_t i = 0; i < union_outcomes.size(); ++i)
    if (std::abs(union_outcomes[i] - base_outcomes[i]) > 2 * tol)
      throw std::runtime_error("spectrum: outcome set is not time independent (broken precession)");
  return spectrum_from_values(std::move(all), zero_tol);
}

double general_bound(const SpectrumInfo& spec) {
  const bool has_pos = spec.x_plus.has_value();
  const bool has_neg = spec.x_minus.has_value();
  if (!has_pos && !has_neg && !spec.has_zero)
    throw std::invalid_argument("general_bound: invalid spectrum");
  if (!has_pos || !has_neg) return 0.5;  // one-sided spectrum
  const double ratio = *spec.x_plus / *spec.x_minus;
  if (ratio < 1.0 || !spec.has_zero) return 1.0 / (1.0 + ratio);
  return 0.5;
}

Matrix score_operator(const PrecessingPair& pair, double zero_tol) {
  Matrix q3 = Matrix::Zero(pair.dim(), pair.dim());
  for (int k = 0; k < 3; ++k) q3 += heaviside(pair.x_at(k), zero_tol);
  return (q3 / 3.0).eval();
}

namespace {

ScoreReport score_from_tuple(const PrecessingPair& pair, const std::array<double, 3>& per_time) {
  ScoreReport report;
  report.per_time = per_time;
  report.p3 = (per_time[0] + per_time[1] + per_time[2]) / 3.0;
  report.general_bound = general_bound(spectrum(pair));
  report.violates_classical = report.p3 > report.classical_bound + 1e-9;
  report.saturates_general = std::abs(report.p3 - report.general_bound) <= 1e-9;
  return report;
}

}  // namespace

ScoreReport p3_score(const PrecessingPair& pair, const Vector& state) {
  if (state.size() != pair.dim()) throw std::invalid_argument("p3_score: dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("p3_score: state is not normalized");
  std::array<double, 3> per_time;
  for (int k = 0; k < 3; ++k) per_time[k] = real_expectation(heaviside(pair.x_at(k)), state);
  return score_from_tuple(pair, per_time);
}

ScoreReport p3_score(const PrecessingPair& pair, const Matrix& rho) {
  if (rho.rows() != pair.dim() || rho.cols() != pair.dim())
    throw std::invalid_argument("p3_score: dimension mismatch");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("p3_score: density matrix trace must be 1");
  std::array<double, 3> per_time;
  for (int k = 0; k < 3; ++k)
    per_time[k] = std::real((heaviside(pair.x_at(k)) * rho).trace());
  return score_from_tuple(pair, per_time);
}

std::pair<double, Vector> max_p3(const PrecessingPair& pair) {
  const EigenSystem es = eig_hermitian(score_operator(pair));
  const Eigen::Index top = es.values.size() - 1;
  return {es.values[top], es.vectors.col(top)};
}

double check_mean_sum_zero(const PrecessingPair& pair, const std::vector<Vector>& states) {
  const Matrix sum_op = pair.x_at(0) + pair.x_at(1) + pair.x_at(2);
  double worst = 0.0;
  for (const Vector& psi : states)
    worst = std::max(worst, std::abs(real_expectation(sum_op, psi)));
  return worst;
}

WitnessReport dimension_witness(const PrecessingPair& pair) {
  const auto* cont = std::get_if<ContinuousEvolver>(&pair.evolver);
  if (!cont)
    throw std::invalid_argument("dimension_witness: requires a continuous (Hamiltonian) evolver");
  const EigenSystem hs = eig_hermitian(cont->hamiltonian);
  const double scale = std::max(1.0, hs.values.cwiseAbs().maxCoeff());
  int levels = 1;
  for (Eigen::Index i = 1; i < hs.values.size(); ++i)
    if (hs.values[i] - hs.values[i - 1] > 1e-9 * scale) ++levels;

  const EigenSystem qs = eig_hermitian(score_operator(pair));
  WitnessReport report;
  report.distinct_levels = levels;
  report.p3_min = qs.values[0];
  report.p3_max = qs.values[qs.values.size() - 1];
  report.trivial = std::abs(report.p3_min - 0.5) <= 1e-9 && std::abs(report.p3_max - 0.5) <= 1e-9;
  if (levels <= 3 && !report.trivial)
    throw std::runtime_error("dimension_witness: <= 3 distinct levels but nontrivial score range");
  return report;
}

double classical_clock_max_p3(int divisions) {
  if (divisions <= 0 || divisions % 6 != 0)
    throw std::invalid_argument("classical_clock_max_p3: N must be a positive multiple of 6");
  // Deterministic pointer positions are the extreme states; the score is
  // linear in the distribution, so mixtures cannot beat the pointwise max.
  double best = 0.0;
  for (int n = 0; n < divisions; ++n) {
    double score = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int pos = (n + k * divisions / 3) % divisions;
      const double outcome = std::cos(2.0 * M_PI * pos / divisions);
      if (outcome > 1e-12)
        score += 1.0;
      else if (outcome > -1e-12)
        score += 0.5;
    }
    best = std::max(best, score / 3.0);
  }
  return best;
}

namespace {

Matrix plus_i_projector() {
  Matrix p(2, 2);
  p << 0.5, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.5;
  return p;  // |i><i| with |i> = (|0> + i|1>)/sqrt(2)
}

Matrix minus_i_projector() {
  Matrix p(2, 2);
  p << 0.5, Complex(0.0, 0.5), Complex(0.0, -0.5), 0.5;
  return p;
}

Matrix real_encode(const Matrix& m) {
  return kron(m, plus_i_projector()) + kron(m.conjugate(), minus_i_projector());
}

}  // namespace

PrecessingPair embed_real(const PrecessingPair& pair) {
  Evolver encoded_evolver = std::visit(
      [](const auto& ev) -> Evolver {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, ContinuousEvolver>) {
          // e^{iH't} = e^{iHt} (x) |i><i| + conj(e^{iHt}) (x) |-i><-i|
          Matrix h = kron(ev.hamiltonian, plus_i_projector()) -
                     kron(ev.hamiltonian.conjugate(), minus_i_projector());
          return ContinuousEvolver{std::move(h), ev.omega};
        } else {
          return DiscreteEvolver{real_encode(ev.step)};
        }
      },
      pair.evolver);
  PrecessingPair encoded{real_encode(pair.x), real_encode(pair.y), std::move(encoded_evolver),
                         Family::raw, pair.label + "+real"};
  const auto report = verify_precession(encoded, 1e-9);
  if (!report.pass) throw std::logic_error("embed_real: encoded pair does not precess");
  return encoded;
}

Matrix embed_real_state(const Matrix& rho) {
  return 0.5 * (kron(rho, plus_i_projector()) + kron(rho.conjugate(), minus_i_projector()));
}

Matrix embed_real_state(const Vector& psi) {
  return embed_real_state(Matrix(psi * psi.adjoint()));
}

PrecessingPair embed_grassmann(const PrecessingPair& pair, int n) {
  if (n < 1) throw std::invalid_argument("embed_grassmann: n must be >= 1");
  const Matrix id = Matrix::Identity(n, n);
  Evolver encoded_evolver = std::visit(
      [&](const auto& ev) -> Evolver {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, ContinuousEvolver>) {
          return ContinuousEvolver{kron(ev.hamiltonian, id), ev.omega};
        } else {
          return DiscreteEvolver{kron(ev.step, id)};
        }
      },
      pair.evolver);
  PrecessingPair encoded{kron(pair.x, id), kron(pair.y, id), std::move(encoded_evolver),
                         Family::raw, pair.label + "+grassmann" + std::to_string(n)};
  const auto report = verify_precession(encoded, 1e-9);
  if (!report.pass) throw std::logic_error("embed_grassmann: encoded pair does not precess");
  return encoded;
}

Matrix embed_grassmann_state(const Matrix& rho, int n) {
  if (n < 1) throw std::invalid_argument("embed_grassmann_state: n must be >= 1");
  return kron(rho, Matrix::Identity(n, n) / static_cast<double>(n));
}

Matrix embed_grassmann_state(const Vector& psi, int n) {
  return embed_grassmann_state(Matrix(psi * psi.adjoint()), n);
}

Vector random_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi[i] = Complex(gauss(rng), gauss(rng));
  psi /= psi.norm();
  return psi;
}

}  // namespace precess
