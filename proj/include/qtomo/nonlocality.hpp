#pragma once

// Nonlocality statistics from coincidence tables: CHSH correlation and S,
// fringe visibility, the Freedman parameter, and accidental coincidences.
// Angles here are polarizer angles in degrees.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qtomo/error.hpp"
#include "qtomo/polarimetry.hpp"

namespace qtomo {

namespace detail {
inline bool same_polarizer_angle(double x, double y) {
  const double d = normalize_half_turn(x - y);
  return d < 1e-9 || d > 180.0 - 1e-9;
}
}  // namespace detail

/// E = (N(α,β) + N(α⊥,β⊥) − N(α,β⊥) − N(α⊥,β)) / sum, with o⊥ = o + 90°.
inline double correlation_E(double n_ab, double n_aperp_bperp, double n_ab_perp, double n_aperp_b) {
  const double den = n_ab + n_aperp_bperp + n_ab_perp + n_aperp_b;
  if (!(den > 0.0)) throw Error(ErrorKind::ZeroDenominator, "correlation denominator is not positive");
  return std::clamp((n_ab + n_aperp_bperp - n_ab_perp - n_aperp_b) / den, -1.0, 1.0);
}

struct CoincidenceRow {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double singles_a = 0.0;
  double singles_b = 0.0;
  double rate = 0.0;
  double d_rate = 0.0;
};

/// Coincidence rates over a grid of polarizer angle pairs (cps).
struct AngleGrid16 {
  std::vector<CoincidenceRow> rows;
  double integration_s = 1.0;
  double window_s = 0.0;

  const CoincidenceRow* find(double theta_a, double theta_b) const {
    for (const auto& r : rows)
      if (detail::same_polarizer_angle(r.theta_a, theta_a) && detail::same_polarizer_angle(r.theta_b, theta_b))
        return &r;
    return nullptr;
  }

  double rate(double theta_a, double theta_b) const {
    const auto* r = find(theta_a, theta_b);
    if (!r)
      throw Error(ErrorKind::IncompleteGrid, "no coincidence row for polarizers (" +
                                                 std::to_string(theta_a) + ", " + std::to_string(theta_b) + ")");
    return r->rate;
  }
};

inline double correlation_E(const AngleGrid16& grid, double alpha, double beta) {
  return correlation_E(grid.rate(alpha, beta), grid.rate(alpha + 90, beta + 90), grid.rate(alpha, beta + 90),
                       grid.rate(alpha + 90, beta));
}

/// Analyser angles a, a′ (arm A) and b, b′ (arm B). Defaults give 2√2 for a
/// maximally entangled state.
struct ChshAngles {
  double a = -45.0;
  double a_prime = 0.0;
  double b = -22.5;
  double b_prime = 22.5;
};

struct ChshResult {
  double S = 0.0;
  double E_ab = 0.0;
  double E_ab_prime = 0.0;
  double E_a_prime_b = 0.0;
  double E_a_prime_b_prime = 0.0;
};

/// S = |E(a,b) − E(a,b′)| + |E(a′,b) + E(a′,b′)|.
inline ChshResult chsh(const AngleGrid16& grid, const ChshAngles& angles = {}) {
  ChshResult r;
  r.E_ab = correlation_E(grid, angles.a, angles.b);
  r.E_ab_prime = correlation_E(grid, angles.a, angles.b_prime);
  r.E_a_prime_b = correlation_E(grid, angles.a_prime, angles.b);
  r.E_a_prime_b_prime = correlation_E(grid, angles.a_prime, angles.b_prime);
  r.S = std::abs(r.E_ab - r.E_ab_prime) + std::abs(r.E_a_prime_b + r.E_a_prime_b_prime);
  return r;
}

/// (R_max − R_min)/(R_max + R_min) over one basis's settings.
inline double visibility(std::span<const double> rates) {
  if (rates.empty()) throw Error(ErrorKind::AllZero, "no rates");
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  if (*lo < 0.0) throw Error(ErrorKind::NegativeRate, "negative rate in visibility input");
  if (!(*hi > 0.0)) throw Error(ErrorKind::AllZero, "all visibility rates are zero");
  return (*hi - *lo) / (*hi + *lo);
}

struct VisibilityRow {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double rate = 0.0;
  double d_rate = 0.0;
};

struct VisibilityDataset {
  std::vector<VisibilityRow> rows;
  double integration_s = 1.0;
  double window_s = 0.0;
};

/// Visibility over the four rows with both analysers in {base, base + 90°}.
inline double basis_visibility(const VisibilityDataset& data, double base_deg) {
  std::vector<double> rates;
  for (const auto& r : data.rows) {
    const bool in_a = detail::same_polarizer_angle(r.theta_a, base_deg) ||
                      detail::same_polarizer_angle(r.theta_a, base_deg + 90);
    const bool in_b = detail::same_polarizer_angle(r.theta_b, base_deg) ||
                      detail::same_polarizer_angle(r.theta_b, base_deg + 90);
    if (in_a && in_b) rates.push_back(r.rate);
  }
  if (rates.size() != 4)
    throw Error(ErrorKind::IncompleteGrid, "basis at " + std::to_string(base_deg) + " deg has " +
                                               std::to_string(rates.size()) + " rows, expected 4");
  return visibility(rates);
}

/// δ_F = |N(Φ1) − N(Φ2)| / N0 − 1/4; positive values rule out local realism.
inline double freedman_delta(double nc_phi1, double nc_phi2, double n0c) {
  if (!(n0c > 0.0)) throw Error(ErrorKind::ZeroN0, "open-analyser coincidence rate must be positive");
  return std::abs(nc_phi1 - nc_phi2) / n0c - 0.25;
}

struct FreedmanSigma {
  /// (N1 + N2)/N0² + (N1 − N2)²/N0³, the error expression as usually quoted.
  double bracket = 0.0;
  /// √bracket, the standard error of δ_F under Poisson counting.
  double standard_error = 0.0;
};

inline FreedmanSigma freedman_sigma(double n1, double n2, double n0) {
  if (!(n0 > 0.0)) throw Error(ErrorKind::ZeroN0, "open-analyser count must be positive");
  const double b = (n1 + n2) / (n0 * n0) + (n1 - n2) * (n1 - n2) / (n0 * n0 * n0);
  return {b, std::sqrt(b)};
}

struct FreedmanRow {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double phi = 0.0;
  double singles_a = 0.0;
  double singles_b = 0.0;
  double rate = 0.0;
};

struct FreedmanDataset {
  std::vector<FreedmanRow> rows;
  double n0c = 0.0;  // cps with both analysers removed
  double integration_s = 1.0;
  double window_s = 0.0;
};

struct FreedmanFit {
  double eps_bar = 0.0;
  double residual_rms = 0.0;
  double std_error = 0.0;
};

/// Least squares of N(Φ)/N0 = (ε̄/2)·sin²Φ over every row.
inline FreedmanFit fit_freedman_model(const FreedmanDataset& data) {
  if (!(data.n0c > 0.0)) throw Error(ErrorKind::ZeroN0, "open-analyser coincidence rate must be positive");
  std::set<double> distinct;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : data.rows) {
    distinct.insert(r.phi);
    const double x = 0.5 * std::pow(std::sin(deg_to_rad(r.phi)), 2);
    const double y = r.rate / data.n0c;
    sxx += x * x;
    sxy += x * y;
  }
  if (distinct.size() < 3 || !(sxx > 0.0))
    throw Error(ErrorKind::DegenerateFit, "need at least three distinct analyser differences");
  FreedmanFit fit;
  fit.eps_bar = sxy / sxx;
  double rss = 0.0;
  for (const auto& r : data.rows) {
    const double x = 0.5 * std::pow(std::sin(deg_to_rad(r.phi)), 2);
    const double e = r.rate / data.n0c - fit.eps_bar * x;
    rss += e * e;
  }
  const double n = static_cast<double>(data.rows.size());
  fit.residual_rms = std::sqrt(rss / n);
  fit.std_error = std::sqrt(rss / (n - 1.0) / sxx);
  return fit;
}

/// δ_F for one fixed arm-A angle, from the rows at Φ1 and Φ2.
struct FreedmanSeries {
  double theta_a = 0.0;
  double nc_phi1 = 0.0;  // cps
  double nc_phi2 = 0.0;  // cps
  double delta = 0.0;
  FreedmanSigma sigma;   // evaluated on counts per integration window
};

inline std::vector<FreedmanSeries> freedman_by_series(const FreedmanDataset& data, double phi1 = 22.5,
                                                      double phi2 = 67.5) {
  std::map<double, std::pair<std::optional<double>, std::optional<double>>> by_a;
  for (const auto& r : data.rows) {
    auto& slot = by_a[r.theta_a];
    if (std::abs(r.phi - phi1) < 1e-9) slot.first = r.rate;
    if (std::abs(r.phi - phi2) < 1e-9) slot.second = r.rate;
  }
  std::vector<FreedmanSeries> out;
  for (const auto& [a, rates] : by_a) {
    if (!rates.first || !rates.second) continue;
    FreedmanSeries s;
    s.theta_a = a;
    s.nc_phi1 = *rates.first;
    s.nc_phi2 = *rates.second;
    s.delta = freedman_delta(s.nc_phi1, s.nc_phi2, data.n0c);
    const double t = data.integration_s;
    s.sigma = freedman_sigma(s.nc_phi1 * t, s.nc_phi2 * t, data.n0c * t);
    out.push_back(s);
  }
  if (out.empty())
    throw Error(ErrorKind::IncompleteGrid, "no arm-A angle has rows at both analyser differences");
  return out;
}

enum class AccidentalFormula {
  standard,  ///< τ·R_A·R_B
  footnote,  ///< τ·R_A·R_B / T, as printed in some tables
};

inline double accidental_rate(double singles_a, double singles_b, double window_s,
                              AccidentalFormula formula = AccidentalFormula::standard,
                              double integration_s = 1.0) {
  if (singles_a < 0.0 || singles_b < 0.0 || window_s < 0.0)
    throw Error(ErrorKind::NegativeRate, "accidental rate inputs must be non-negative");
  const double r = window_s * singles_a * singles_b;
  return formula == AccidentalFormula::standard ? r : r / integration_s;
}

}  // namespace qtomo
