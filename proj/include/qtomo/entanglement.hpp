#pragma once

// State-quality metrics for two-qubit density matrices.

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "qtomo/state.hpp"

namespace qtomo {

/// Uhlmann fidelity (tr √(√ρ1 ρ2 √ρ1))² = ‖√ρ1 √ρ2‖₁². The singular-value
/// form avoids square roots of rounding-level eigenvalues.
inline double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const Matrix4c m = matrix_sqrt_psd<4>(rho1.matrix()) * matrix_sqrt_psd<4>(rho2.matrix());
  const double tr = Eigen::JacobiSVD<Matrix4c>(m).singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& rho, const Vector4c& target) {
  return fidelity(rho, DensityMatrix::from_pure(target));
}

namespace detail {
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }
}  // namespace detail

/// −Σ p log₂ p over the eigenvalues, in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::Vector4d p = rho.eigenvalues();
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s -= detail::xlog2x(std::max(0.0, p(k)));
  return std::max(0.0, s);
}

inline double von_neumann_entropy(const ReducedDensityMatrix& rho) {
  const auto e = eig_hermitian<2>(rho.matrix);
  double s = 0.0;
  for (int k = 0; k < 2; ++k) s -= detail::xlog2x(std::max(0.0, e.values(k)));
  return std::max(0.0, s);
}

/// (4/3)(1 − tr ρ²), in [0, 1] for two qubits.
inline double linear_entropy(const DensityMatrix& rho) {
  return std::clamp(4.0 / 3.0 * (1.0 - rho.purity()), 0.0, 1.0);
}

/// σ_y ⊗ σ_y.
inline const Matrix4c& spin_flip() {
  static const Matrix4c m = [] {
    Matrix4c f = Matrix4c::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
  }();
  return m;
}

struct Concurrence {
  double value;
  /// Square roots of the eigenvalues of ρ·(Σ ρ* Σ), descending.
  std::array<double, 4> r;
};

inline Concurrence concurrence(const DensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  const Matrix4c flipped = spin_flip() * m.conjugate() * spin_flip();
  Eigen::ComplexEigenSolver<Matrix4c> solver(m * flipped, false);
  std::array<double, 4> lam;
  for (int k = 0; k < 4; ++k) lam[k] = solver.eigenvalues()(k).real();
  std::sort(lam.begin(), lam.end(), std::greater<>());
  // The spectrum is real and non-negative; anything at rounding level is zero.
  const double floor = 1e-13 * std::max(1.0, lam[0]);
  Concurrence c{};
  for (int k = 0; k < 4; ++k) c.r[k] = lam[k] > floor ? std::sqrt(lam[k]) : 0.0;
  c.value = std::clamp(c.r[0] - c.r[1] - c.r[2] - c.r[3], 0.0, 1.0);
  return c;
}

inline double binary_entropy(double x) {
  return -detail::xlog2x(x) - detail::xlog2x(1.0 - x);
}

struct TangleEof {
  double tangle;
  double eof;  // bits
};

inline TangleEof tangle_and_eof(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return {c * c, binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0)};
}

/// −ln tr ρ_sub², in nats.
inline double renyi2_subsystem(const DensityMatrix& rho, Subsystem which) {
  return std::max(0.0, -std::log(partial_trace(rho, which).purity()));
}

/// Sum of singular values; for Hermitian input, Σ|λ|.
inline double trace_norm(const Matrix4c& hermitian) {
  const auto e = eig_hermitian<4>(hermitian);
  return e.values.cwiseAbs().sum();
}

/// log2 ‖ρ^T_A‖₁ = log2(1 + 2N), N the summed magnitude of negative
/// eigenvalues; those within kEigenClamp of zero count as zero.
inline double log_negativity(const DensityMatrix& rho) {
  const auto e = eig_hermitian<4>(partial_transpose(rho, Subsystem::A));
  double neg = 0.0;
  for (int k = 0; k < 4; ++k)
    if (e.values(k) < -kEigenClamp) neg -= e.values(k);
  return std::log2(1.0 + 2.0 * neg);
}

struct EntanglementReport {
  double fidelity_to_target = 0.0;
  double von_neumann = 0.0;
  double linear_entropy = 0.0;
  double purity = 0.0;
  double concurrence = 0.0;
  double tangle = 0.0;
  double eof = 0.0;
  double renyi2_A = 0.0;
  double renyi2_B = 0.0;
  double log_negativity = 0.0;
  std::array<double, 4> r_eigenvalues{};
  std::array<double, 4> rho_eigenvalues{};
};

inline EntanglementReport entanglement_report(const DensityMatrix& rho, const Vector4c& target) {
  EntanglementReport out;
  out.fidelity_to_target = fidelity(rho, target);
  out.von_neumann = von_neumann_entropy(rho);
  out.linear_entropy = linear_entropy(rho);
  out.purity = rho.purity();
  const Concurrence c = concurrence(rho);
  out.concurrence = c.value;
  out.r_eigenvalues = c.r;
  const TangleEof te = tangle_and_eof(c.value);
  out.tangle = te.tangle;
  out.eof = te.eof;
  out.renyi2_A = renyi2_subsystem(rho, Subsystem::A);
  out.renyi2_B = renyi2_subsystem(rho, Subsystem::B);
  out.log_negativity = log_negativity(rho);
  const Eigen::Vector4d ev = rho.eigenvalues();
  for (int k = 0; k < 4; ++k) out.rho_eigenvalues[k] = ev(k);
  return out;
}

}  // namespace qtomo
