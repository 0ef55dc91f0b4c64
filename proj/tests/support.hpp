#pragma once

// Shared fixtures, frozen reference numbers, and hand-rolled random
// generators for the property tests.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qtomo/qtomo.hpp"

namespace qtomo::test {

inline std::string data_path(const std::string& name) { return std::string(QTOMO_DATA_DIR) + "/" + name; }

/// Published reconstructed matrix, as printed (trace 0.99943, one tiny
/// negative eigenvalue).
inline Matrix4c published_rho() {
  using C = Complex;
  Matrix4c m;
  m << C(0.00903, 0), C(0.0184, 0.0294), C(-0.0416, -0.00769), C(0.00875, 0.00196),
      C(0.0184, -0.0294), C(0.457, 0), C(-0.429, 0.0667), C(0.0348, 0.00201),
      C(-0.0416, 0.00769), C(-0.429, -0.0667), C(0.522, 0), C(-0.0569, -0.026),
      C(0.00875, -0.00196), C(0.0348, -0.00201), C(-0.0569, 0.026), C(0.0114, 0);
  return m;
}

inline DensityMatrix published_state() { return DensityMatrix::project_physical(published_rho()); }

// Reference values computed independently (numpy/scipy scripts, double
// precision) and frozen here. Externally quoted numbers carry their own
// tolerances in the tests that use them.
namespace oracle {
inline constexpr double kE_0_m22_5 = -0.7287409582;  // CHSH table, α = 0, β = −22.5
inline constexpr double kS = 2.7814986401;
inline constexpr double kRowOneAccidentals = 222.1674463;  // cps, τ = 5 ns
inline constexpr double kV_HV = 0.9612972514;
inline constexpr double kV_DA = 0.9715784197;
inline constexpr double kDelta_a0 = 0.0171505537;  // N0 = 40092 cps
inline constexpr double kDelta_a45 = 0.0037496259;
inline constexpr double kEpsBar = 0.7654972327;
inline constexpr double kSigmaBracket_a0 = 2.8612050e-5;  // on counts, T = 0.4 s
inline constexpr double kFidelityPublished = 0.9189752231;
inline constexpr double kRenyi2TrueA = 0.6882954485;  // after projection to a physical state
inline constexpr double kIdler405_700 = 283500.0 / 295.0;
}  // namespace oracle

// ---------------------------------------------------------------- generators

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline CholeskyParams random_params(Rng& rng) {
  std::normal_distribution<double> n;
  CholeskyParams t;
  for (int k = 0; k < 16; ++k) t(k) = n(rng);
  // Occasional extreme scales and near-zero diagonals.
  const int mode = std::uniform_int_distribution<int>(0, 3)(rng);
  if (mode == 1) t *= std::pow(10.0, uniform(rng, -6, 6));
  if (mode == 2) t(std::uniform_int_distribution<int>(0, 3)(rng)) = 0.0;
  return t;
}

/// Ginibre state of the given rank (1: pure, Haar-distributed).
inline DensityMatrix random_state(Rng& rng, int rank) {
  std::normal_distribution<double> n;
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < 4; ++r) g(r, c) = Complex(n(rng), n(rng));
  const Matrix4c m = g * g.adjoint();
  return DensityMatrix::from_matrix(m / m.trace().real());
}

inline Matrix2c random_unitary2(Rng& rng) {
  const double a = uniform(rng, 0, 2 * std::numbers::pi), b = uniform(rng, 0, 2 * std::numbers::pi);
  const double c = uniform(rng, 0, 2 * std::numbers::pi), th = std::acos(uniform(rng, -1, 1)) / 2;
  Matrix2c u;
  u << std::exp(kI * a) * std::cos(th), -std::exp(kI * b) * std::sin(th),
      std::exp(kI * (c - b)) * std::sin(th), std::exp(kI * (c - a)) * std::cos(th);
  return u;
}

inline DensityMatrix local_rotate(const DensityMatrix& rho, const Matrix2c& ua, const Matrix2c& ub) {
  const Matrix4c u = tensor(ua, ub);
  return DensityMatrix::from_matrix(u * rho.matrix() * u.adjoint());
}

inline bool is_physical(const DensityMatrix& rho, double tol = 1e-9) {
  const Matrix4c& m = rho.matrix();
  if (hermiticity_error<4>(m) > tol) return false;
  if (std::abs(m.trace().real() - 1.0) > tol) return false;
  const Eigen::Vector4d raw = Eigen::SelfAdjointEigenSolver<Matrix4c>(m).eigenvalues();
  if (raw.minCoeff() < -tol || raw.maxCoeff() > 1 + tol) return false;
  const double p = rho.purity();
  return p >= -tol && p <= 1 + tol;
}

/// Noiseless tomography table for a state, n0 pairs per window.
inline TomographyDataset exact_tomography(const DensityMatrix& rho, double pairs_cps, double t = 1.0) {
  SourceModel m;
  m.state = rho;
  m.pair_rate = pairs_cps;
  m.integration_s = t;
  return simulate_tomography(m, NoiseMode::noiseless);
}

}  // namespace qtomo::test
