#pragma once

// Small dense complex linear algebra for one- and two-qubit operators.
//
// Two-qubit operators use the computational basis order (HH, HV, VH, VV):
// index = 2 * a + b where a is the qubit-A bit (H = 0, V = 1) and b the
// qubit-B bit. Every module shares this convention.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qtomo/error.hpp"

namespace qtomo {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};

/// Hermiticity tolerance for exactly specified inputs.
inline constexpr double kTolHermExact = 1e-12;
/// Tolerance for reconstructed or otherwise numerically produced operators.
inline constexpr double kTolReconstructed = 1e-9;
/// Eigenvalues down to this value are treated as rounding and clamped to zero.
inline constexpr double kEigenClamp = 1e-9;
/// Below this an eigenvalue is a genuine negative and matrix_sqrt_psd refuses.
inline constexpr double kSqrtNegativeLimit = 1e-6;

enum class Subsystem { A, B };

inline std::string to_string(Subsystem s) { return s == Subsystem::A ? "A" : "B"; }

inline Vector4c tensor(const Vector2c& a, const Vector2c& b) {
  Vector4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
  return out;
}

inline Matrix4c tensor(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

template <int N>
double hermiticity_error(const Eigen::Matrix<Complex, N, N>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <int N>
struct HermitianEigen {
  Eigen::Matrix<double, N, 1> values;        // descending
  Eigen::Matrix<Complex, N, N> vectors;      // column k pairs with values(k)
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Throws NonHermitianInput when ‖m − m†‖_max exceeds `tol`.
template <int N>
HermitianEigen<N> eig_hermitian(const Eigen::Matrix<Complex, N, N>& m,
                                double tol = kTolReconstructed) {
  const double err = hermiticity_error<N>(m);
  if (!(err <= tol))
    throw Error(ErrorKind::NonHermitianInput,
                "matrix deviates from its adjoint by " + std::to_string(err));
  const Eigen::Matrix<Complex, N, N> sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> solver(sym);
  // Eigen sorts ascending.
  HermitianEigen<N> out;
  for (int k = 0; k < N; ++k) {
    out.values(k) = solver.eigenvalues()(N - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(N - 1 - k);
  }
  return out;
}

template <int N>
Eigen::Matrix<Complex, N, N> reconstruct(const HermitianEigen<N>& e) {
  return e.vectors * e.values.template cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
template <int N>
Eigen::Matrix<Complex, N, N> matrix_sqrt_psd(const Eigen::Matrix<Complex, N, N>& m,
                                             double tol = kTolReconstructed) {
  const auto e = eig_hermitian<N>(m, tol);
  if (e.values(N - 1) < -kSqrtNegativeLimit)
    throw Error(ErrorKind::NegativeEigenvalue,
                "eigenvalue " + std::to_string(e.values(N - 1)) + " below -1e-6");
  // Rounding-level eigenvalues of a rank-deficient input would otherwise leak
  // in as O(1e-8) square roots.
  const double floor = 1e-14 * std::max(1.0, e.values(0));
  Eigen::Matrix<double, N, 1> roots;
  for (int k = 0; k < N; ++k) roots(k) = e.values(k) > floor ? std::sqrt(e.values(k)) : 0.0;
  return e.vectors * roots.template cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Two-qubit density operator. Construction validates Hermiticity, unit
/// trace, and positivity; instances are immutable.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const Matrix4c& m, double tol = kTolReconstructed) {
    const double herm = hermiticity_error<4>(m);
    if (!(herm <= tol))
      throw Error(ErrorKind::InvalidDensityMatrix,
                  "not Hermitian (deviation " + std::to_string(herm) + ")");
    const Matrix4c sym = 0.5 * (m + m.adjoint());
    const double tr = sym.trace().real();
    if (!(std::abs(tr - 1.0) <= 1e-9))
      throw Error(ErrorKind::InvalidDensityMatrix, "trace " + std::to_string(tr) + " != 1");
    const auto e = eig_hermitian<4>(sym, tol);
    if (e.values(3) < -kEigenClamp || e.values(0) > 1.0 + kEigenClamp)
      throw Error(ErrorKind::InvalidDensityMatrix,
                  "eigenvalues outside [0, 1]: min " + std::to_string(e.values(3)));
    return DensityMatrix(sym);
  }

  static DensityMatrix from_pure(const Vector4c& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidDensityMatrix, "zero state vector");
    const Vector4c u = psi / n;
    return DensityMatrix(u * u.adjoint());
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix4c::Identity() / 4.0); }

  /// Closest-looking physical state to a slightly unphysical matrix: Hermitian
  /// part, negative eigenvalues dropped, trace renormalized.
  static DensityMatrix project_physical(const Matrix4c& m) {
    const Matrix4c sym = 0.5 * (m + m.adjoint());
    auto e = eig_hermitian<4>(sym, std::numeric_limits<double>::infinity());
    for (int k = 0; k < 4; ++k) e.values(k) = std::max(0.0, e.values(k));
    const double total = e.values.sum();
    if (!(total > 0.0))
      throw Error(ErrorKind::InvalidDensityMatrix, "no positive spectral weight to project");
    e.values /= total;
    return DensityMatrix(reconstruct<4>(e));
  }

  const Matrix4c& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Descending; rounding-level negatives clamped to zero.
  Eigen::Vector4d eigenvalues() const {
    Eigen::Vector4d v = eig_hermitian<4>(m_).values;
    for (int k = 0; k < 4; ++k)
      if (v(k) < 0.0 && v(k) >= -kEigenClamp) v(k) = 0.0;
    return v;
  }

  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit DensityMatrix(Matrix4c m) : m_(std::move(m)) {}
  Matrix4c m_;
};

struct ReducedDensityMatrix {
  Matrix2c matrix;
  Subsystem kept;

  double purity() const { return (matrix * matrix).trace().real(); }
};

/// Reduced state of the kept qubit (the other one is traced out).
inline ReducedDensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const Matrix4c& m = rho.matrix();
  Matrix2c out = Matrix2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (keep == Subsystem::A)
          out(i, j) += m(2 * i + k, 2 * j + k);
        else
          out(i, j) += m(2 * k + i, 2 * k + j);
      }
  return {out, keep};
}

/// Transposes the indices of one qubit. The result is Hermitian with unit
/// trace but may have negative eigenvalues.
inline Matrix4c partial_transpose(const Matrix4c& m, Subsystem on) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          // element <a b| m |c d>
          if (on == Subsystem::A)
            out(2 * c + b, 2 * a + d) = m(2 * a + b, 2 * c + d);
          else
            out(2 * a + d, 2 * c + b) = m(2 * a + b, 2 * c + d);
        }
  return out;
}

inline Matrix4c partial_transpose(const DensityMatrix& rho, Subsystem on) {
  return partial_transpose(rho.matrix(), on);
}

}  // namespace qtomo
