#pragma once

// Jones-calculus model of the polarization analysers: waveplate settings,
// single-qubit projection states, two-qubit projectors, and the Bell state.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "qtomo/error.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Maps an angle in degrees onto [0, 180).
inline double normalize_half_turn(double deg) {
  double r = std::fmod(deg, 180.0);
  if (r < 0.0) r += 180.0;
  if (r >= 180.0) r -= 180.0;
  return r;
}

/// HWP followed by a PBS analyses linear polarization at twice the HWP angle.
inline constexpr double hwp_to_polarizer_deg(double hwp_deg) { return 2.0 * hwp_deg; }
inline constexpr double polarizer_to_hwp_deg(double pol_deg) { return 0.5 * pol_deg; }

/// Fast-axis angles (degrees, from the vertical axis) of the HWP and QWP in
/// one analyser arm.
struct WaveplateSetting {
  double h_deg = 0.0;
  double q_deg = 0.0;

  WaveplateSetting() = default;
  WaveplateSetting(double h, double q) : h_deg(normalize_half_turn(h)), q_deg(normalize_half_turn(q)) {}

  friend bool operator==(const WaveplateSetting&, const WaveplateSetting&) = default;
};

/// Single-qubit analyser state a|H> + b|V>.
struct ProjectionState {
  Complex h;
  Complex v;

  Vector2c vector() const { return Vector2c(h, v); }
  Matrix2c projector() const {
    const Vector2c u = vector();
    return u * u.adjoint();
  }
  double norm() const { return std::sqrt(std::norm(h) + std::norm(v)); }
};

/// Raw amplitudes for QWP(q)·HWP(h)|V>, angles in degrees and not normalized.
inline ProjectionState projection_amplitudes(double h_deg, double q_deg) {
  const double h = deg_to_rad(h_deg);
  const double q = deg_to_rad(q_deg);
  const double s = 1.0 / std::numbers::sqrt2;
  return {s * Complex(std::sin(2 * h), -std::sin(2 * (h - q))),
          -s * Complex(std::cos(2 * h), std::cos(2 * (h - q)))};
}

inline ProjectionState projection_state(const WaveplateSetting& s) {
  return projection_amplitudes(s.h_deg, s.q_deg);
}

/// Linear analyser transmitting polarization at `theta_deg` from horizontal.
inline ProjectionState polarizer_state(double theta_deg) {
  const double t = deg_to_rad(theta_deg);
  return {Complex(std::cos(t), 0.0), Complex(std::sin(t), 0.0)};
}

/// Ideal analyser states by name: H, V, D = (H+V)/√2, A = (H−V)/√2,
/// R = (H−iV)/√2, L = (H+iV)/√2.
inline ProjectionState labeled_state(char name) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (name) {
    case 'H': return {1.0, 0.0};
    case 'V': return {0.0, 1.0};
    case 'D': return {s, s};
    case 'A': return {s, -s};
    case 'R': return {s, -s * kI};
    case 'L': return {s, s * kI};
    default:
      throw Error(ErrorKind::InvalidArgument, std::string("unknown analyser label '") + name + "'");
  }
}

struct TwoQubitProjector {
  Vector4c state;
  int nu = 0;  // 1..16 when taken from the standard set
  std::string label;

  Matrix4c projector() const { return state * state.adjoint(); }
};

inline TwoQubitProjector two_qubit_projector(const ProjectionState& a, const ProjectionState& b) {
  return {tensor(a.vector(), b.vector()), 0, {}};
}

inline TwoQubitProjector two_qubit_projector(const WaveplateSetting& a, const WaveplateSetting& b) {
  return two_qubit_projector(projection_state(a), projection_state(b));
}

/// Projector from a two-letter label such as "RL" (arm A first).
inline TwoQubitProjector labeled_projector(std::string_view label) {
  if (label.size() != 2)
    throw Error(ErrorKind::InvalidArgument, "projector label must have two letters: " + std::string(label));
  auto p = two_qubit_projector(labeled_state(label[0]), labeled_state(label[1]));
  p.label = std::string(label);
  return p;
}

/// How measurement rows are turned into projectors. `waveplate` evaluates the
/// QWP·HWP amplitudes at the recorded angles; `label` uses the ideal states
/// named by the row label. The two differ for the (22.5°, 45°) setting, which
/// the waveplate formula maps to (H−V)/√2 while the label calls it D.
enum class ProjectorFrame { waveplate, label };

inline std::string to_string(ProjectorFrame f) { return f == ProjectorFrame::waveplate ? "waveplate" : "label"; }

inline ProjectorFrame parse_projector_frame(std::string_view s) {
  if (s == "waveplate") return ProjectorFrame::waveplate;
  if (s == "label") return ProjectorFrame::label;
  throw Error(ErrorKind::InvalidArgument, "unknown projector frame: " + std::string(s));
}

struct StandardSetting {
  int nu;
  std::string_view label;
  WaveplateSetting a;
  WaveplateSetting b;
};

/// The 16-projection sequence in which only one waveplate moves between
/// consecutive measurements.
inline const std::array<StandardSetting, 16>& standard_16_settings() {
  static const std::array<StandardSetting, 16> settings = {{
      {1, "HH", {45, 0}, {45, 0}},
      {2, "HV", {45, 0}, {0, 0}},
      {3, "VV", {0, 0}, {0, 0}},
      {4, "VH", {0, 0}, {45, 0}},
      {5, "RH", {22.5, 0}, {45, 0}},
      {6, "RV", {22.5, 0}, {0, 0}},
      {7, "DV", {22.5, 45}, {0, 0}},
      {8, "DH", {22.5, 45}, {45, 0}},
      {9, "DR", {22.5, 45}, {22.5, 0}},
      {10, "DD", {22.5, 45}, {22.5, 45}},
      {11, "RD", {22.5, 0}, {22.5, 45}},
      {12, "HD", {45, 0}, {22.5, 45}},
      {13, "VD", {0, 0}, {22.5, 45}},
      {14, "VL", {0, 0}, {22.5, 90}},
      {15, "HL", {45, 0}, {22.5, 90}},
      {16, "RL", {22.5, 0}, {22.5, 90}},
  }};
  return settings;
}

inline TwoQubitProjector standard_projector(const StandardSetting& s, ProjectorFrame frame) {
  TwoQubitProjector p = frame == ProjectorFrame::waveplate ? two_qubit_projector(s.a, s.b)
                                                           : labeled_projector(s.label);
  p.nu = s.nu;
  p.label = std::string(s.label);
  return p;
}

/// (|HV> − e^{iφ}|VH>)/√2.
inline Vector4c bell_state(double phi) {
  const double s = 1.0 / std::numbers::sqrt2;
  Vector4c psi = Vector4c::Zero();
  psi(1) = s;
  psi(2) = -s * std::exp(kI * phi);
  return psi;
}

/// Projector equality up to global phase.
inline bool same_projector(const Vector2c& x, const Vector2c& y, double tol = 1e-12) {
  return ((x * x.adjoint()) - (y * y.adjoint())).cwiseAbs().maxCoeff() <= tol;
}

inline bool same_projector(const Vector4c& x, const Vector4c& y, double tol = 1e-12) {
  return ((x * x.adjoint()) - (y * y.adjoint())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qtomo
