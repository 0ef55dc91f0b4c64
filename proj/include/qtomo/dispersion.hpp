#pragma once

// Refractive-index models for quasi-phase-matching calculations and the
// collinear QPM mismatch of a periodically poled crystal.

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "qtomo/error.hpp"

namespace qtomo {

enum class CrystalAxis { y, z };

inline std::string to_string(CrystalAxis a) { return a == CrystalAxis::y ? "y" : "z"; }

class DispersionModel {
 public:
  virtual ~DispersionModel() = default;
  virtual std::string id() const = 0;
  /// n(λ, T) with λ in µm and T in °C.
  virtual double index(CrystalAxis axis, double lambda_um, double temp_c) const = 0;
  /// Length at temperature T relative to the reference temperature.
  virtual double expansion(double temp_c) const = 0;
  virtual double reference_temp_c() const = 0;
  virtual double min_wavelength_um() const = 0;
  virtual double max_wavelength_um() const = 0;

  void check_range(double lambda_um) const {
    if (!(lambda_um >= min_wavelength_um() && lambda_um <= max_wavelength_um()))
      throw Error(ErrorKind::WavelengthOutOfModelRange,
                  std::to_string(lambda_um * 1e3) + " nm outside " + id() + " validity range");
  }
};

/// Flux-grown KTP:
///   n_y  König & Wong, Appl. Phys. Lett. 84, 1644 (2004)
///   n_z  Fradkin et al., Appl. Phys. Lett. 74, 914 (1999)
///   dn/dT  Emanueli & Arie, Appl. Opt. 42, 6661 (2003), reference 25 °C
///   expansion  α = 6.7e-6 /°C, β = 11e-9 /°C² (same reference)
class KtpDispersion final : public DispersionModel {
 public:
  std::string id() const override { return "KTP-KonigWong2004y-Fradkin1999z-EmanueliArie2003"; }

  double index(CrystalAxis axis, double lambda_um, double temp_c) const override {
    check_range(lambda_um);
    const double l2 = lambda_um * lambda_um;
    double n0;
    if (axis == CrystalAxis::y)
      n0 = std::sqrt(2.09930 + 0.922683 / (1.0 - 0.0467695 / l2) - 0.0138408 * l2);
    else
      n0 = std::sqrt(2.12725 + 1.18431 / (1.0 - 0.0514852 / l2) + 0.6603 / (1.0 - 100.00507 / l2) -
                     9.68956e-3 * l2);
    const auto& c1 = axis == CrystalAxis::y ? kY1 : kZ1;
    const auto& c2 = axis == CrystalAxis::y ? kY2 : kZ2;
    const double dt = temp_c - reference_temp_c();
    return n0 + poly(c1, lambda_um) * dt + poly(c2, lambda_um) * dt * dt;
  }

  double expansion(double temp_c) const override {
    const double dt = temp_c - reference_temp_c();
    return 1.0 + 6.7e-6 * dt + 11e-9 * dt * dt;
  }

  double reference_temp_c() const override { return 25.0; }
  double min_wavelength_um() const override { return 0.35; }
  double max_wavelength_um() const override { return 1.6; }

 private:
  static double poly(const std::array<double, 4>& a, double lambda_um) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += a[m] / std::pow(lambda_um, m);
    return s;
  }
  static constexpr std::array<double, 4> kY1 = {6.2897e-6, 6.3061e-6, -6.0629e-6, 2.6486e-6};
  static constexpr std::array<double, 4> kY2 = {-0.14445e-8, 2.2244e-8, -3.5770e-8, 1.3470e-8};
  static constexpr std::array<double, 4> kZ1 = {9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6};
  static constexpr std::array<double, 4> kZ2 = {-1.1882e-8, 10.459e-8, -9.8136e-8, 3.1481e-8};
};

/// Wavelength-independent index; handy for checking the poling term alone.
class ConstantIndexModel final : public DispersionModel {
 public:
  ConstantIndexModel(double ny, double nz) : ny_(ny), nz_(nz) {}
  std::string id() const override { return "constant-index"; }
  double index(CrystalAxis axis, double lambda_um, double) const override {
    check_range(lambda_um);
    return axis == CrystalAxis::y ? ny_ : nz_;
  }
  double expansion(double) const override { return 1.0; }
  double reference_temp_c() const override { return 25.0; }
  double min_wavelength_um() const override { return 0.0; }
  double max_wavelength_um() const override { return 1e9; }

 private:
  double ny_, nz_;
};

inline std::unique_ptr<DispersionModel> make_dispersion_model(const std::string& id) {
  if (id == "ktp" || id == KtpDispersion().id()) return std::make_unique<KtpDispersion>();
  throw Error(ErrorKind::InvalidArgument, "unknown dispersion model: " + id);
}

/// Collinear type-II periodically poled crystal (pump y → signal y + idler z
/// in KTP). Poling period and length are given at the model's reference
/// temperature.
struct CrystalSpec {
  double poling_period_um = 10.025;
  double length_mm = 25.0;
  double temperature_c = 30.0;
  int qpm_order = 1;
  double lambda_p_nm = 405.0;
  double lambda_s_nm = 810.0;
  double lambda_i_nm = 810.0;
  CrystalAxis pump_axis = CrystalAxis::y;
  CrystalAxis signal_axis = CrystalAxis::y;
  CrystalAxis idler_axis = CrystalAxis::z;
};

/// λ_i from 1/λ_p = 1/λ_s + 1/λ_i.
inline double solve_idler(double lambda_p_nm, double lambda_s_nm) {
  if (!(lambda_p_nm > 0.0) || !(lambda_s_nm > lambda_p_nm))
    throw Error(ErrorKind::NonPhysical, "signal wavelength must exceed the pump wavelength");
  return 1.0 / (1.0 / lambda_p_nm - 1.0 / lambda_s_nm);
}

inline bool energy_conserved(double lambda_p_nm, double lambda_s_nm, double lambda_i_nm,
                             double rel_tol = 1e-12) {
  const double lhs = 1.0 / lambda_p_nm;
  const double rhs = 1.0 / lambda_s_nm + 1.0 / lambda_i_nm;
  return std::abs(lhs - rhs) <= rel_tol * lhs;
}

inline double poling_period_at(const CrystalSpec& c, const DispersionModel& model, double temp_c) {
  return c.poling_period_um * model.expansion(temp_c);
}

inline double crystal_length_at(const CrystalSpec& c, const DispersionModel& model, double temp_c) {
  return c.length_mm * model.expansion(temp_c);
}

/// Δk − 2πm/Λ(T) in rad/µm at the given temperature.
inline double qpm_mismatch(const CrystalSpec& c, const DispersionModel& model, double temp_c) {
  const double lp = c.lambda_p_nm * 1e-3, ls = c.lambda_s_nm * 1e-3, li = c.lambda_i_nm * 1e-3;
  const double dk = model.index(c.pump_axis, lp, temp_c) / lp - model.index(c.signal_axis, ls, temp_c) / ls -
                    model.index(c.idler_axis, li, temp_c) / li;
  const double grating = c.qpm_order == 0 ? 0.0 : c.qpm_order / poling_period_at(c, model, temp_c);
  return 2.0 * std::numbers::pi * (dk - grating);
}

inline double qpm_mismatch(const CrystalSpec& c, const DispersionModel& model) {
  return qpm_mismatch(c, model, c.temperature_c);
}

struct QpmScan {
  int sign_changes = 0;
  bool monotone = false;
  std::optional<double> root_c;
};

/// Samples the mismatch over [t_min, t_max] and, when there is exactly one
/// sign change, refines the zero with TOMS 748.
inline QpmScan find_qpm_temperature(const CrystalSpec& c, const DispersionModel& model, double t_min,
                                    double t_max, int samples = 201) {
  QpmScan scan;
  double prev = qpm_mismatch(c, model, t_min);
  double lo = t_min, hi = t_max;
  int increasing = 0, decreasing = 0;
  for (int k = 1; k < samples; ++k) {
    const double t = t_min + (t_max - t_min) * k / (samples - 1);
    const double v = qpm_mismatch(c, model, t);
    if (v > prev) ++increasing;
    if (v < prev) ++decreasing;
    if ((prev < 0.0) != (v < 0.0)) {
      ++scan.sign_changes;
      lo = t_min + (t_max - t_min) * (k - 1) / (samples - 1);
      hi = t;
    }
    prev = v;
  }
  scan.monotone = increasing == 0 || decreasing == 0;
  if (scan.sign_changes == 1) {
    std::uintmax_t iters = 100;
    const auto f = [&](double t) { return qpm_mismatch(c, model, t); };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    scan.root_c = 0.5 * (a + b);
  }
  return scan;
}

}  // namespace qtomo
