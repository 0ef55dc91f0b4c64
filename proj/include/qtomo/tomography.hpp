#pragma once

// Maximum-likelihood reconstruction of a two-qubit density matrix from 16
// projective coincidence measurements.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/error.hpp"
#include "qtomo/optimize.hpp"
#include "qtomo/polarimetry.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

/// One projection measurement. Rates are counts per second.
struct TomographyRow {
  int nu = 0;
  std::string label;
  WaveplateSetting a;
  WaveplateSetting b;
  double singles_a = 0.0;
  double d_singles_a = 0.0;
  double singles_b = 0.0;
  double d_singles_b = 0.0;
  double coincidences = 0.0;
  double d_coincidences = 0.0;
};

struct TomographyDataset {
  std::vector<TomographyRow> rows;
  double integration_s = 1.0;
  double window_s = 0.0;
};

inline void validate(const TomographyDataset& data) {
  if (data.rows.size() != 16)
    throw Error(ErrorKind::IncompleteDataset,
                "expected 16 projection rows, got " + std::to_string(data.rows.size()));
  std::set<int> seen;
  for (const auto& r : data.rows) {
    if (r.nu < 1 || r.nu > 16 || !seen.insert(r.nu).second)
      throw Error(ErrorKind::IncompleteDataset, "projection index nu=" + std::to_string(r.nu) +
                                                    " missing, duplicated, or out of range");
    for (double v : {r.singles_a, r.d_singles_a, r.singles_b, r.d_singles_b, r.coincidences,
                     r.d_coincidences})
      if (!(v >= 0.0))
        throw Error(ErrorKind::NegativeRate, "negative rate in row nu=" + std::to_string(r.nu));
  }
  if (!(data.integration_s > 0.0))
    throw Error(ErrorKind::InvalidArgument, "integration time must be positive");
  if (!(data.window_s >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "coincidence window must be non-negative");
}

/// 16 reals defining the lower-triangular T with ρ = T†T / tr(T†T):
///   T = [ t0          0          0         0  ]
///       [ t4+i t5     t1         0         0  ]
///       [ t10+i t11   t6+i t7    t2        0  ]
///       [ t14+i t15   t12+i t13  t8+i t9   t3 ]
using CholeskyParams = Eigen::Matrix<double, 16, 1>;

namespace detail {
struct TriangularSlot {
  int row;
  int col;
};
// Off-diagonal slots, in parameter order (real part at 4 + 2k, imaginary at 5 + 2k).
inline constexpr std::array<TriangularSlot, 6> kOffDiagonal = {{{1, 0}, {2, 1}, {3, 2}, {2, 0}, {3, 1}, {3, 0}}};
}  // namespace detail

inline Matrix4c lower_triangular(const CholeskyParams& t) {
  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k) m(k, k) = t(k);
  for (int k = 0; k < 6; ++k) {
    const auto [r, c] = detail::kOffDiagonal[k];
    m(r, c) = Complex(t(4 + 2 * k), t(5 + 2 * k));
  }
  return m;
}

inline CholeskyParams params_from_triangular(const Matrix4c& m) {
  CholeskyParams t;
  for (int k = 0; k < 4; ++k) t(k) = m(k, k).real();
  for (int k = 0; k < 6; ++k) {
    const auto [r, c] = detail::kOffDiagonal[k];
    t(4 + 2 * k) = m(r, c).real();
    t(5 + 2 * k) = m(r, c).imag();
  }
  return t;
}

inline DensityMatrix params_to_rho(const CholeskyParams& t) {
  const Matrix4c tri = lower_triangular(t);
  const Matrix4c m = tri.adjoint() * tri;
  const double tr = m.trace().real();
  if (!(tr > 1e-30)) throw Error(ErrorKind::DegenerateParams, "trace(T†T) vanishes");
  return DensityMatrix::from_matrix(m / tr);
}

/// Parameters reproducing a positive definite ρ (tr ρ = 1 gives tr T†T = 1).
inline CholeskyParams rho_to_params(const Matrix4c& rho) {
  // ρ = T†T with T lower triangular is a Cholesky factorization in reversed
  // index order: JρJ = LL† gives T = J L† J.
  Matrix4c j = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k) j(k, 3 - k) = 1.0;
  Eigen::LLT<Matrix4c> llt(j * rho * j);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::DegenerateParams, "matrix is not positive definite");
  const Matrix4c l = llt.matrixL();
  return params_from_triangular(j * l.adjoint() * j);
}

inline double predicted_probability(const DensityMatrix& rho, const TwoQubitProjector& proj) {
  const double p = (proj.state.adjoint() * rho.matrix() * proj.state)(0, 0).real();
  return std::clamp(p, 0.0, 1.0);
}

/// Projectors for each row, in row order.
inline std::vector<TwoQubitProjector> row_projectors(const TomographyDataset& data, ProjectorFrame frame) {
  std::vector<TwoQubitProjector> out;
  out.reserve(data.rows.size());
  for (const auto& r : data.rows) {
    TwoQubitProjector p = frame == ProjectorFrame::waveplate ? two_qubit_projector(r.a, r.b)
                                                             : labeled_projector(r.label);
    p.nu = r.nu;
    p.label = r.label;
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {
inline const std::array<Matrix2c, 4>& pauli() {
  static const std::array<Matrix2c, 4> p = [] {
    std::array<Matrix2c, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -kI, kI, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return p;
}

inline const std::array<Matrix4c, 16>& pauli_pairs() {
  static const std::array<Matrix4c, 16> b = [] {
    std::array<Matrix4c, 16> out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[4 * i + j] = tensor(pauli()[i], pauli()[j]);
    return out;
  }();
  return b;
}
}  // namespace detail

/// Row ν, column k: <ψ_ν| σ_i⊗σ_j |ψ_ν> with k = 4i + j. Expresses each
/// projector as a real 16-vector; rank 16 means the set is tomographically
/// complete.
inline Eigen::MatrixXd measurement_matrix(const std::vector<TwoQubitProjector>& projectors) {
  Eigen::MatrixXd a(projectors.size(), 16);
  for (std::size_t v = 0; v < projectors.size(); ++v)
    for (int k = 0; k < 16; ++k)
      a(static_cast<Eigen::Index>(v), k) =
          (projectors[v].state.adjoint() * detail::pauli_pairs()[k] * projectors[v].state)(0, 0).real();
  return a;
}

inline Eigen::MatrixXd projector_gram(const std::vector<TwoQubitProjector>& projectors) {
  const Eigen::MatrixXd a = measurement_matrix(projectors);
  return a * a.transpose();
}

/// Solves the linear system between measured counts and the Pauli
/// coefficients of the unnormalized state, then normalizes the trace. The
/// result is Hermitian and unit-trace but generally not positive.
inline Matrix4c linear_inversion(const std::vector<TwoQubitProjector>& projectors,
                                 const std::vector<double>& counts) {
  if (projectors.size() != 16 || counts.size() != 16)
    throw Error(ErrorKind::IncompleteDataset, "linear inversion needs exactly 16 measurements");
  const Eigen::MatrixXd a = measurement_matrix(projectors);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < 16)
    throw Error(ErrorKind::SingularSystem,
                "projector set has rank " + std::to_string(lu.rank()) + " < 16");
  const Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(counts.data(), 16);
  const Eigen::VectorXd c = lu.solve(n);
  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) m += c(k) * detail::pauli_pairs()[k];
  m /= 4.0;
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::SingularSystem, "linear estimate has non-positive trace");
  m /= tr;
  return 0.5 * (m + m.adjoint());
}

inline Matrix4c linear_inversion(const TomographyDataset& data,
                                 ProjectorFrame frame = ProjectorFrame::waveplate) {
  validate(data);
  std::vector<double> counts;
  for (const auto& r : data.rows) counts.push_back(r.coincidences * data.integration_s);
  return linear_inversion(row_projectors(data, frame), counts);
}

/// How uncorrelated (accidental) coincidences τ·R_A·R_B enter the fit.
enum class AccidentalMode {
  off,       ///< ignored
  subtract,  ///< removed from the measured counts before fitting
  model,     ///< added to the predicted counts
};

inline std::string to_string(AccidentalMode m) {
  switch (m) {
    case AccidentalMode::off: return "off";
    case AccidentalMode::subtract: return "subtract";
    case AccidentalMode::model: return "model";
  }
  return "off";
}

inline AccidentalMode parse_accidental_mode(std::string_view s) {
  if (s == "off") return AccidentalMode::off;
  if (s == "subtract") return AccidentalMode::subtract;
  if (s == "model") return AccidentalMode::model;
  throw Error(ErrorKind::InvalidArgument, "unknown accidental mode: " + std::string(s));
}

struct MleConfig {
  AccidentalMode accidentals = AccidentalMode::off;
  ProjectorFrame frame = ProjectorFrame::waveplate;
  /// ε_floor in the cost denominator, in counts.
  double count_floor = 1.0;
  /// Eigenvalue floor applied to the linear estimate before factorizing it.
  double init_eigen_floor = 1e-6;
  MinimizerOptions optimizer;
};

/// Cost C = Σ_ν (m_ν − N_ν)² / (2·max(m_ν, ε_floor)) with predicted counts
/// m_ν = scale·<ψ_ν|T†T|ψ_ν> + A_ν. The overall pair count n0 is carried by
/// the norm of T: n0 = scale·tr(T†T).
class MleProblem {
 public:
  MleProblem(std::vector<TwoQubitProjector> projectors, std::vector<double> counts,
             std::vector<double> accidentals, double scale, double floor)
      : proj_(std::move(projectors)), counts_(std::move(counts)), acc_(std::move(accidentals)),
        scale_(scale), floor_(floor) {}

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    const Matrix4c tri = lower_triangular(x);
    double cost = 0.0;
    if (grad) grad->setZero(16);
    for (std::size_t v = 0; v < proj_.size(); ++v) {
      const Vector4c& psi = proj_[v].state;
      const Vector4c w = tri * psi;
      const double m = scale_ * w.squaredNorm() + acc_[v];
      const double diff = m - counts_[v];
      double dcdm;
      if (m > floor_) {
        cost += diff * diff / (2.0 * m);
        dcdm = diff / m - diff * diff / (2.0 * m * m);
      } else {
        cost += diff * diff / (2.0 * floor_);
        dcdm = diff / floor_;
      }
      if (!grad) continue;
      // dm/dRe T_rc = 2s·Re(conj(w_r)ψ_c),  dm/dIm T_rc = −2s·Im(conj(w_r)ψ_c)
      const double f = 2.0 * scale_ * dcdm;
      for (int k = 0; k < 4; ++k) (*grad)(k) += f * (std::conj(w(k)) * psi(k)).real();
      for (int k = 0; k < 6; ++k) {
        const auto [r, c] = detail::kOffDiagonal[k];
        const Complex z = std::conj(w(r)) * psi(c);
        (*grad)(4 + 2 * k) += f * z.real();
        (*grad)(5 + 2 * k) -= f * z.imag();
      }
    }
    return cost;
  }

  double scale() const { return scale_; }
  const std::vector<double>& counts() const { return counts_; }
  const std::vector<double>& accidentals() const { return acc_; }

 private:
  std::vector<TwoQubitProjector> proj_;
  std::vector<double> counts_;
  std::vector<double> acc_;
  double scale_;
  double floor_;
};

struct MleResult {
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  double n0 = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> cost_trace;
  Matrix4c linear_estimate = Matrix4c::Zero();
};

/// Counts per integration window, after the configured accidental handling.
struct PreparedCounts {
  std::vector<double> counts;
  std::vector<double> accidentals;  // added to predictions (model mode only)
  std::vector<double> raw_accidentals;
};

inline PreparedCounts prepare_counts(const TomographyDataset& data, AccidentalMode mode) {
  PreparedCounts out;
  for (const auto& r : data.rows) {
    const double n = r.coincidences * data.integration_s;
    const double acc = data.window_s * r.singles_a * r.singles_b * data.integration_s;
    out.raw_accidentals.push_back(acc);
    out.counts.push_back(mode == AccidentalMode::subtract ? std::max(0.0, n - acc) : n);
    out.accidentals.push_back(mode == AccidentalMode::model ? acc : 0.0);
  }
  return out;
}

inline MleResult mle_reconstruct(const TomographyDataset& data, const MleConfig& config = {}) {
  validate(data);
  const PreparedCounts prepared = prepare_counts(data, config.accidentals);
  const double total = std::accumulate(prepared.counts.begin(), prepared.counts.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::IncompleteDataset, "all coincidence counts are zero");

  auto projectors = row_projectors(data, config.frame);

  // Initial point: linear estimate on accidental-free counts, eigenvalues
  // floored, renormalized.
  std::vector<double> signal(16);
  for (int v = 0; v < 16; ++v)
    signal[v] = std::max(0.0, prepared.counts[v] - prepared.accidentals[v]);
  MleResult result;
  result.linear_estimate = linear_inversion(projectors, signal);
  auto eig = eig_hermitian<4>(result.linear_estimate);
  for (int k = 0; k < 4; ++k) eig.values(k) = std::max(eig.values(k), config.init_eigen_floor);
  eig.values /= eig.values.sum();
  const Matrix4c rho0 = reconstruct<4>(eig);
  const CholeskyParams t0 = rho_to_params(rho0);

  const DensityMatrix rho0_checked = DensityMatrix::from_matrix(rho0);
  double psum = 0.0;
  for (const auto& p : projectors) psum += predicted_probability(rho0_checked, p);
  const double signal_total = std::accumulate(signal.begin(), signal.end(), 0.0);
  const double scale = (signal_total > 0.0 ? signal_total : total) / psum;

  const MleProblem problem(std::move(projectors), prepared.counts, prepared.accidentals, scale,
                           config.count_floor);
  const MinimizerResult fit = minimize_bfgs(problem, Eigen::VectorXd(t0), config.optimizer);

  const CholeskyParams t = fit.x;
  const Matrix4c tri = lower_triangular(t);
  result.rho = params_to_rho(t);
  result.n0 = scale * (tri.adjoint() * tri).trace().real();
  result.final_cost = fit.cost;
  result.iterations = fit.iterations;
  result.converged = fit.converged;
  result.stop_reason = fit.stop_reason;
  result.cost_trace = fit.cost_trace;
  return result;
}

inline const MleResult& require_converged(const MleResult& r) {
  if (!r.converged)
    throw Error(ErrorKind::NotConverged,
                "likelihood fit stopped after " + std::to_string(r.iterations) + " iterations (" +
                    r.stop_reason + ")");
  return r;
}

}  // namespace qtomo
