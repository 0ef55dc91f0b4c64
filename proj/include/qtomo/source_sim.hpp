#pragma once

// Count-data synthesis for a modeled pair source with lossy analysers, dark
// counts, accidental coincidences, and Poisson noise.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qtomo/error.hpp"
#include "qtomo/nonlocality.hpp"
#include "qtomo/polarimetry.hpp"
#include "qtomo/random.hpp"
#include "qtomo/state.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

/// ρ = GG†/tr(GG†) with G a 4×rank matrix of complex normals (Ginibre
/// ensemble); rank 1 gives Haar-random pure states.
inline DensityMatrix random_density_matrix(Rng& rng, int rank = 4) {
  if (rank < 1 || rank > 4) throw Error(ErrorKind::InvalidArgument, "rank must be 1..4");
  std::normal_distribution<double> gauss;
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < 4; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  const Matrix4c m = g * g.adjoint();
  return DensityMatrix::from_matrix(m / m.trace().real());
}

struct SourceModel {
  DensityMatrix state = DensityMatrix::from_pure(bell_state(0.0));
  double pair_rate = 1e5;  // cps reaching the analysers
  double eps_a = 1.0;      // arm transmittance with the analyser in place
  double eps_b = 1.0;
  double dark_a = 0.0;  // cps
  double dark_b = 0.0;
  double window_s = 0.0;
  double integration_s = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    for (double v : {pair_rate, dark_a, dark_b, window_s})
      if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "source rates must be non-negative");
    if (!(eps_a >= 0.0 && eps_a <= 1.0 && eps_b >= 0.0 && eps_b <= 1.0))
      throw Error(ErrorKind::InvalidArgument, "transmittances must lie in [0, 1]");
    if (!(integration_s > 0.0)) throw Error(ErrorKind::InvalidArgument, "integration time must be positive");
  }
};

struct Analysers {
  ProjectionState a;
  ProjectionState b;
};

inline double expected_singles(const SourceModel& m, const ProjectionState& analyser, Subsystem arm) {
  const ReducedDensityMatrix red = partial_trace(m.state, arm);
  const Vector2c u = analyser.vector();
  const double p = std::clamp((u.adjoint() * red.matrix * u)(0, 0).real(), 0.0, 1.0);
  return arm == Subsystem::A ? m.pair_rate * m.eps_a * p + m.dark_a : m.pair_rate * m.eps_b * p + m.dark_b;
}

/// pair_rate·ε_a·ε_b·<ψ|ρ|ψ> + τ·R_A·R_B, in cps.
inline double expected_coincidence(const SourceModel& m, const ProjectionState& a, const ProjectionState& b) {
  const TwoQubitProjector proj = two_qubit_projector(a, b);
  const double p = predicted_probability(m.state, proj);
  const double ra = expected_singles(m, a, Subsystem::A);
  const double rb = expected_singles(m, b, Subsystem::B);
  return m.pair_rate * m.eps_a * m.eps_b * p + accidental_rate(ra, rb, m.window_s);
}

inline double expected_coincidence(const SourceModel& m, const WaveplateSetting& a, const WaveplateSetting& b) {
  return expected_coincidence(m, projection_state(a), projection_state(b));
}

/// Analysers removed: every pair reaches both detectors.
inline double expected_open_coincidence(const SourceModel& m) {
  const double ra = m.pair_rate + m.dark_a;
  const double rb = m.pair_rate + m.dark_b;
  return m.pair_rate + accidental_rate(ra, rb, m.window_s);
}

/// Counts in one integration window.
struct CountRecord {
  double singles_a = 0.0;
  double singles_b = 0.0;
  double coincidences = 0.0;
};

enum class NoiseMode { poisson, noiseless };

/// Setting k draws from sub-streams split_seed(seed, 3k + channel).
inline std::vector<CountRecord> sample_counts(const SourceModel& m, std::span<const Analysers> settings,
                                              NoiseMode noise = NoiseMode::poisson) {
  m.validate();
  std::vector<CountRecord> out;
  out.reserve(settings.size());
  const double t = m.integration_s;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const auto& s = settings[k];
    const double mean[3] = {expected_singles(m, s.a, Subsystem::A) * t, expected_singles(m, s.b, Subsystem::B) * t,
                            expected_coincidence(m, s.a, s.b) * t};
    double v[3];
    for (int ch = 0; ch < 3; ++ch) {
      if (noise == NoiseMode::noiseless) {
        v[ch] = mean[ch];
      } else {
        Rng rng(split_seed(m.seed, 3 * k + ch));
        v[ch] = sample_poisson(rng, mean[ch]);
      }
    }
    out.push_back({v[0], v[1], v[2]});
  }
  return out;
}

namespace detail {
inline double poisson_rate_error(double counts, double t, NoiseMode noise) {
  return noise == NoiseMode::noiseless ? 0.0 : std::sqrt(counts) / t;
}
}  // namespace detail

inline TomographyDataset simulate_tomography(const SourceModel& m, NoiseMode noise = NoiseMode::poisson) {
  std::vector<Analysers> settings;
  for (const auto& s : standard_16_settings()) settings.push_back({projection_state(s.a), projection_state(s.b)});
  const auto counts = sample_counts(m, settings, noise);
  TomographyDataset d;
  d.integration_s = m.integration_s;
  d.window_s = m.window_s;
  const double t = m.integration_s;
  for (std::size_t k = 0; k < 16; ++k) {
    const auto& s = standard_16_settings()[k];
    const auto& c = counts[k];
    d.rows.push_back({s.nu, std::string(s.label), s.a, s.b, c.singles_a / t,
                      detail::poisson_rate_error(c.singles_a, t, noise), c.singles_b / t,
                      detail::poisson_rate_error(c.singles_b, t, noise), c.coincidences / t,
                      detail::poisson_rate_error(c.coincidences, t, noise)});
  }
  return d;
}

/// Polarizer angle pairs covering a CHSH measurement at the given angles.
inline std::vector<std::pair<double, double>> chsh_angle_pairs(const ChshAngles& ang = {}) {
  std::vector<std::pair<double, double>> out;
  for (double a : {ang.a_prime, ang.a, ang.a + 90.0, ang.a_prime + 90.0})
    for (double b : {ang.b, ang.b_prime, ang.b + 90.0, ang.b_prime + 90.0}) out.emplace_back(a, b);
  return out;
}

inline AngleGrid16 simulate_chsh(const SourceModel& m, NoiseMode noise = NoiseMode::poisson,
                                 const ChshAngles& ang = {}) {
  const auto pairs = chsh_angle_pairs(ang);
  std::vector<Analysers> settings;
  for (auto [a, b] : pairs) settings.push_back({polarizer_state(a), polarizer_state(b)});
  const auto counts = sample_counts(m, settings, noise);
  AngleGrid16 g;
  g.integration_s = m.integration_s;
  g.window_s = m.window_s;
  const double t = m.integration_s;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& c = counts[k];
    g.rows.push_back({pairs[k].first, pairs[k].second, c.singles_a / t, c.singles_b / t, c.coincidences / t,
                      detail::poisson_rate_error(c.coincidences, t, noise)});
  }
  return g;
}

/// For each arm-A angle, arm B steps through Φ = 0, 11.25, …, 90°. The
/// open-analyser rate uses stream index 3·rows.
inline FreedmanDataset simulate_freedman(const SourceModel& m, NoiseMode noise = NoiseMode::poisson,
                                         std::vector<double> a_angles = {0.0, 45.0}) {
  std::vector<Analysers> settings;
  std::vector<std::pair<double, double>> pairs;
  for (double a : a_angles)
    for (int k = 0; k <= 8; ++k) {
      const double b = a + 11.25 * k;
      pairs.emplace_back(a, b);
      settings.push_back({polarizer_state(a), polarizer_state(b)});
    }
  const auto counts = sample_counts(m, settings, noise);
  FreedmanDataset d;
  d.integration_s = m.integration_s;
  d.window_s = m.window_s;
  const double t = m.integration_s;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& c = counts[k];
    d.rows.push_back({pairs[k].first, pairs[k].second, std::abs(pairs[k].first - pairs[k].second), c.singles_a / t,
                      c.singles_b / t, c.coincidences / t});
  }
  const double open_mean = expected_open_coincidence(m) * t;
  if (noise == NoiseMode::noiseless) {
    d.n0c = open_mean / t;
  } else {
    Rng rng(split_seed(m.seed, 3 * pairs.size()));
    d.n0c = sample_poisson(rng, open_mean) / t;
  }
  return d;
}

inline VisibilityDataset simulate_visibility(const SourceModel& m, NoiseMode noise = NoiseMode::poisson) {
  const std::vector<std::pair<double, double>> pairs = {{0, 0},   {0, 90},   {90, 0},   {90, 90},
                                                        {45, 45}, {45, 135}, {135, 45}, {135, 135}};
  std::vector<Analysers> settings;
  for (auto [a, b] : pairs) settings.push_back({polarizer_state(a), polarizer_state(b)});
  const auto counts = sample_counts(m, settings, noise);
  VisibilityDataset d;
  d.integration_s = m.integration_s;
  d.window_s = m.window_s;
  const double t = m.integration_s;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    d.rows.push_back({pairs[k].first, pairs[k].second, counts[k].coincidences / t,
                      detail::poisson_rate_error(counts[k].coincidences, t, noise)});
  return d;
}

}  // namespace qtomo
