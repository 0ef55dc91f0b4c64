#pragma once

// Parametric Poisson bootstrap: resample every count, rerun the analysis,
// summarize the spread.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qtomo/error.hpp"
#include "qtomo/nonlocality.hpp"
#include "qtomo/random.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

using Metrics = std::map<std::string, double>;

namespace detail {
// Draws a count with the rate's expected count per window; returns a rate.
inline double resample_rate(double rate, double t, Rng& rng) { return sample_poisson(rng, rate * t) / t; }
}  // namespace detail

inline AngleGrid16 poisson_resample(const AngleGrid16& g, Rng& rng) {
  AngleGrid16 out = g;
  for (auto& r : out.rows) {
    r.singles_a = detail::resample_rate(r.singles_a, g.integration_s, rng);
    r.singles_b = detail::resample_rate(r.singles_b, g.integration_s, rng);
    r.rate = detail::resample_rate(r.rate, g.integration_s, rng);
  }
  return out;
}

inline TomographyDataset poisson_resample(const TomographyDataset& d, Rng& rng) {
  TomographyDataset out = d;
  for (auto& r : out.rows) {
    r.singles_a = detail::resample_rate(r.singles_a, d.integration_s, rng);
    r.singles_b = detail::resample_rate(r.singles_b, d.integration_s, rng);
    r.coincidences = detail::resample_rate(r.coincidences, d.integration_s, rng);
  }
  return out;
}

inline FreedmanDataset poisson_resample(const FreedmanDataset& d, Rng& rng) {
  FreedmanDataset out = d;
  for (auto& r : out.rows) {
    r.singles_a = detail::resample_rate(r.singles_a, d.integration_s, rng);
    r.singles_b = detail::resample_rate(r.singles_b, d.integration_s, rng);
    r.rate = detail::resample_rate(r.rate, d.integration_s, rng);
  }
  out.n0c = detail::resample_rate(d.n0c, d.integration_s, rng);
  return out;
}

inline VisibilityDataset poisson_resample(const VisibilityDataset& d, Rng& rng) {
  VisibilityDataset out = d;
  for (auto& r : out.rows) r.rate = detail::resample_rate(r.rate, d.integration_s, rng);
  return out;
}

struct BootstrapConfig {
  int replicas = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

struct BootstrapResult {
  std::map<std::string, MetricSummary> metrics;
  int replicas = 0;
  int failed = 0;  // replicas whose analysis threw
};

/// Replica i uses Rng(split_seed(seed, i)), so results do not depend on the
/// thread count.
template <class Dataset, class Analysis>
BootstrapResult resample_errors(const Dataset& data, Analysis&& analysis, const BootstrapConfig& cfg = {}) {
  if (cfg.replicas < 100) throw Error(ErrorKind::InvalidArgument, "bootstrap needs at least 100 replicas");
  const auto n = static_cast<std::size_t>(cfg.replicas);
  std::vector<std::optional<Metrics>> results(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      Rng rng(split_seed(cfg.seed, i));
      try {
        results[i] = analysis(poisson_resample(data, rng));
      } catch (const Error&) {
        results[i].reset();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }

  BootstrapResult out;
  out.replicas = cfg.replicas;
  std::map<std::string, std::vector<double>> samples;
  for (const auto& r : results) {
    if (!r) {
      ++out.failed;
      continue;
    }
    for (const auto& [k, v] : *r) samples[k].push_back(v);
  }
  for (const auto& [k, xs] : samples) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    out.metrics[k] = {mean, sd};
  }
  return out;
}

}  // namespace qtomo
