#pragma once

// Command-line front end. Every analysis subcommand prints one JSON report on
// stdout; `simulate` prints CSV in the schema the analyses read back.
// Exit status: 0 success, 2 bad input (diagnostic on stderr).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtomo/qtomo.hpp"

namespace qtomo::app {

using io::json;

inline constexpr std::uint64_t kDefaultSeed = 20190715;
inline constexpr const char* kSeedEnv = "QTOMO_SEED";

/// QTOMO_SEED, when set, replaces the built-in default seed. An explicit
/// --seed still wins.
inline std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return kDefaultSeed;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::InvalidArgument, std::string(kSeedEnv) + " is not an unsigned integer: " + s);
  return v;
}

template <class Parse>
auto load(const std::string& path, std::istream& in, Parse parse) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "no input file given");
  if (path == "-") return parse(in);
  return io::parse_file(path, parse);
}

inline json input_echo(const std::string& path, std::size_t rows, const std::string& digest) {
  return {{"path", path}, {"rows", rows}, {"sha256", digest}};
}

/// Attaches bootstrap spread to metrics with the same name. When
/// `as_uncertainty` is set the bootstrap std becomes the reported uncertainty.
inline void attach_bootstrap(json& metrics, const BootstrapResult& b, bool as_uncertainty) {
  for (const auto& [name, s] : b.metrics) {
    if (!metrics.contains(name)) continue;
    metrics[name]["bootstrap"] = {{"mean", s.mean}, {"std", s.std}};
    if (as_uncertainty) {
      metrics[name]["uncertainty"] = s.std;
      metrics[name]["method"] = "poisson-bootstrap";
    }
  }
}

inline json bootstrap_echo(const BootstrapResult& b, const BootstrapConfig& cfg) {
  return {{"replicas", b.replicas}, {"failed", b.failed}, {"seed", cfg.seed}};
}

struct BootstrapOpts {
  int replicas = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;

  BootstrapConfig config() const { return {replicas, seed, threads}; }
  json echo() const { return {{"replicas", replicas}, {"seed", seed}}; }
};

inline void add_bootstrap_options(CLI::App* sub, BootstrapOpts& o) {
  sub->add_option("--replicas", o.replicas, "Poisson bootstrap replicas (0 disables)")->capture_default_str();
  sub->add_option("--seed", o.seed, "bootstrap seed");
  sub->add_option("--threads", o.threads, "worker threads (0: all cores); does not change results");
}

// ---------------------------------------------------------------- bell

struct BellOpts {
  std::string input;
  bool hwp = false;
  ChshAngles angles;
  BootstrapOpts boot;
};

inline Metrics chsh_metrics(const AngleGrid16& g, const ChshAngles& ang) {
  const ChshResult r = chsh(g, ang);
  return {{"S", r.S},
          {"E_ab", r.E_ab},
          {"E_ab_prime", r.E_ab_prime},
          {"E_a_prime_b", r.E_a_prime_b},
          {"E_a_prime_b_prime", r.E_a_prime_b_prime}};
}

inline void scale_angles(AngleGrid16& g) {
  for (auto& r : g.rows) {
    r.theta_a = hwp_to_polarizer_deg(r.theta_a);
    r.theta_b = hwp_to_polarizer_deg(r.theta_b);
  }
}

inline json run_bell(const BellOpts& o, std::istream& in) {
  auto parsed = load(o.input, in, [](std::istream& s) { return io::parse_chsh(s); });
  if (o.hwp) scale_angles(parsed.data);
  const AngleGrid16& g = parsed.data;

  json rep = io::base_report("chsh");
  rep["inputs"] = input_echo(o.input, parsed.rows, parsed.digest);
  rep["config"] = {{"angles_deg", {{"a", o.angles.a}, {"a_prime", o.angles.a_prime}, {"b", o.angles.b},
                                   {"b_prime", o.angles.b_prime}}},
                   {"angle_input", o.hwp ? "hwp" : "polarizer"},
                   {"bootstrap", o.boot.echo()}};
  json metrics;
  for (const auto& [k, v] : chsh_metrics(g, o.angles)) metrics[k] = io::metric(v);
  if (o.boot.replicas > 0) {
    const auto cfg = o.boot.config();
    const auto b = resample_errors(g, [&](const AngleGrid16& x) { return chsh_metrics(x, o.angles); }, cfg);
    attach_bootstrap(metrics, b, true);
    rep["bootstrap"] = bootstrap_echo(b, cfg);
  }
  rep["metrics"] = metrics;
  json rows = json::array();
  for (const auto& r : g.rows)
    rows.push_back({{"thetaA", r.theta_a},
                    {"thetaB", r.theta_b},
                    {"Rc_cps", r.rate},
                    {"accidental_cps", accidental_rate(r.singles_a, r.singles_b, g.window_s)}});
  rep["series"] = rows;
  return rep;
}

// ---------------------------------------------------------------- visibility

struct VisibilityOpts {
  std::string input;
  bool hwp = false;
  BootstrapOpts boot;
};

inline Metrics visibility_metrics(const VisibilityDataset& d) {
  return {{"V_HV", basis_visibility(d, 0.0)}, {"V_DA", basis_visibility(d, 45.0)}};
}

inline json run_visibility(const VisibilityOpts& o, std::istream& in) {
  auto parsed = load(o.input, in, [](std::istream& s) { return io::parse_visibility(s); });
  if (o.hwp)
    for (auto& r : parsed.data.rows) {
      r.theta_a = hwp_to_polarizer_deg(r.theta_a);
      r.theta_b = hwp_to_polarizer_deg(r.theta_b);
    }
  json rep = io::base_report("visibility");
  rep["inputs"] = input_echo(o.input, parsed.rows, parsed.digest);
  rep["config"] = {{"definition", "(Rmax - Rmin)/(Rmax + Rmin) over the four settings of each basis"},
                   {"angle_input", o.hwp ? "hwp" : "polarizer"},
                   {"bootstrap", o.boot.echo()}};
  json metrics;
  for (const auto& [k, v] : visibility_metrics(parsed.data)) metrics[k] = io::metric(v);
  if (o.boot.replicas > 0) {
    const auto cfg = o.boot.config();
    const auto b = resample_errors(parsed.data, visibility_metrics, cfg);
    attach_bootstrap(metrics, b, true);
    rep["bootstrap"] = bootstrap_echo(b, cfg);
  }
  rep["metrics"] = metrics;
  return rep;
}

// ---------------------------------------------------------------- freedman

struct FreedmanOpts {
  std::string input;
  double phi1 = 22.5;
  double phi2 = 67.5;
  BootstrapOpts boot;
};

inline std::string series_key(double theta_a) { return "delta_F[a=" + io::detail::num(theta_a) + "]"; }

inline Metrics freedman_metrics(const FreedmanDataset& d, double phi1, double phi2) {
  Metrics m;
  for (const auto& s : freedman_by_series(d, phi1, phi2)) m[series_key(s.theta_a)] = s.delta;
  m["eps_bar"] = fit_freedman_model(d).eps_bar;
  return m;
}

inline json run_freedman(const FreedmanOpts& o, std::istream& in) {
  const auto parsed = load(o.input, in, [](std::istream& s) { return io::parse_freedman(s); });
  const FreedmanDataset& d = parsed.data;
  json rep = io::base_report("freedman");
  rep["inputs"] = input_echo(o.input, parsed.rows, parsed.digest);
  rep["inputs"]["n0c_cps"] = d.n0c;
  rep["config"] = {{"phi1_deg", o.phi1}, {"phi2_deg", o.phi2}, {"bootstrap", o.boot.echo()}};

  json metrics, series = json::array();
  for (const auto& s : freedman_by_series(d, o.phi1, o.phi2)) {
    metrics[series_key(s.theta_a)] = io::metric(s.delta, s.sigma.standard_error, "poisson-propagation");
    series.push_back({{"thetaA", s.theta_a},
                      {"Nc_phi1_cps", s.nc_phi1},
                      {"Nc_phi2_cps", s.nc_phi2},
                      {"delta_F", s.delta},
                      {"sigma_bracket", s.sigma.bracket},
                      {"sigma_standard_error", s.sigma.standard_error}});
  }
  const FreedmanFit fit = fit_freedman_model(d);
  metrics["eps_bar"] = io::metric(fit.eps_bar, fit.std_error, "least-squares");
  metrics["fit_residual_rms"] = io::metric(fit.residual_rms);
  if (o.boot.replicas > 0) {
    const auto cfg = o.boot.config();
    const auto b = resample_errors(
        d, [&](const FreedmanDataset& x) { return freedman_metrics(x, o.phi1, o.phi2); }, cfg);
    attach_bootstrap(metrics, b, false);
    rep["bootstrap"] = bootstrap_echo(b, cfg);
  }
  rep["metrics"] = metrics;
  rep["series"] = series;
  return rep;
}

// ---------------------------------------------------------------- tomo / measures

struct TomoOpts {
  std::string input;
  std::string rho_path;  // measures only
  std::string frame = "waveplate";
  std::string accidentals = "off";
  double phi = 0.0;  // target Bell phase, rad
  int max_iterations = 5000;
  BootstrapOpts boot{0};
};

inline Metrics measure_metrics(const DensityMatrix& rho, double phi) {
  const EntanglementReport r = entanglement_report(rho, bell_state(phi));
  return {{"fidelity", r.fidelity_to_target},
          {"purity", r.purity},
          {"von_neumann_entropy", r.von_neumann},
          {"linear_entropy", r.linear_entropy},
          {"concurrence", r.concurrence},
          {"tangle", r.tangle},
          {"entanglement_of_formation", r.eof},
          {"renyi2_A", r.renyi2_A},
          {"renyi2_B", r.renyi2_B},
          {"log_negativity", r.log_negativity},
          {"lambda_1", r.rho_eigenvalues[0]},
          {"lambda_2", r.rho_eigenvalues[1]},
          {"lambda_3", r.rho_eigenvalues[2]},
          {"lambda_4", r.rho_eigenvalues[3]}};
}

inline json measures_json(const DensityMatrix& rho, double phi) {
  const EntanglementReport r = entanglement_report(rho, bell_state(phi));
  json metrics;
  for (const auto& [k, v] : measure_metrics(rho, phi)) metrics[k] = io::metric(v);
  metrics["r_eigenvalues"] = {{"value", r.r_eigenvalues}, {"uncertainty", nullptr}, {"method", nullptr}};
  return metrics;
}

inline MleConfig mle_config(const TomoOpts& o) {
  MleConfig c;
  c.frame = parse_projector_frame(o.frame);
  c.accidentals = parse_accidental_mode(o.accidentals);
  c.optimizer.max_iterations = o.max_iterations;
  return c;
}

inline json tomo_config(const TomoOpts& o) {
  return {{"frame", o.frame},
          {"accidentals", o.accidentals},
          {"target", "psi_minus"},
          {"target_phi_rad", o.phi},
          {"max_iterations", o.max_iterations},
          {"bootstrap", o.boot.echo()}};
}

inline json run_tomo(const TomoOpts& o, std::istream& in, std::string_view kind = "tomo") {
  const auto parsed = load(o.input, in, [](std::istream& s) { return io::parse_tomography(s); });
  const MleConfig cfg = mle_config(o);
  const MleResult res = require_converged(mle_reconstruct(parsed.data, cfg));

  json rep = io::base_report(kind);
  rep["inputs"] = input_echo(o.input, parsed.rows, parsed.digest);
  rep["config"] = tomo_config(o);
  json metrics = measures_json(res.rho, o.phi);
  metrics["n0"] = io::metric(res.n0);
  if (o.boot.replicas > 0) {
    const auto bcfg = o.boot.config();
    const auto b = resample_errors(
        parsed.data,
        [&](const TomographyDataset& x) {
          return measure_metrics(require_converged(mle_reconstruct(x, cfg)).rho, o.phi);
        },
        bcfg);
    attach_bootstrap(metrics, b, true);
    rep["bootstrap"] = bootstrap_echo(b, bcfg);
  }
  rep["metrics"] = metrics;
  rep["rho"] = io::matrix_to_json(res.rho.matrix());
  rep["fit"] = {{"converged", res.converged},
                {"iterations", res.iterations},
                {"final_cost", res.final_cost},
                {"stop_reason", res.stop_reason}};
  return rep;
}

inline json run_measures(const TomoOpts& o, std::istream& in) {
  if (!o.rho_path.empty() && !o.input.empty())
    throw Error(ErrorKind::InvalidArgument, "give either --rho or --input, not both");
  if (o.rho_path.empty()) return run_tomo(o, in, "measures");

  std::string raw;
  if (o.rho_path == "-") {
    raw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(o.rho_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + o.rho_path);
    raw.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  const Matrix4c m = io::matrix_from_json(json::parse(raw));
  if (hermiticity_error<4>(m) > 1e-6)
    throw Error(ErrorKind::NonHermitianInput, "rho is not Hermitian");
  const auto eig = eig_hermitian<4>(0.5 * (m + m.adjoint()), 1e-6);

  bool projected = false;
  std::optional<DensityMatrix> rho;
  try {
    rho = DensityMatrix::from_matrix(m);
  } catch (const Error&) {
    rho = DensityMatrix::project_physical(m);
    projected = true;
  }

  json rep = io::base_report("measures");
  rep["inputs"] = {{"path", o.rho_path},
                   {"sha256", io::sha256_hex(raw)},
                   {"trace", m.trace().real()},
                   {"min_eigenvalue", eig.values(3)},
                   {"projected_to_physical", projected}};
  rep["config"] = {{"target", "psi_minus"}, {"target_phi_rad", o.phi}};
  rep["metrics"] = measures_json(*rho, o.phi);
  rep["rho"] = io::matrix_to_json(rho->matrix());
  return rep;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string kind = "tomo";
  std::string state = "bell";
  double phi = 0.0;
  double pairs = 1e5;
  double integration = 1.0;
  double window = 0.0;
  double eps_a = 1.0, eps_b = 1.0;
  double dark_a = 0.0, dark_b = 0.0;
  bool noiseless = false;
  std::uint64_t seed = kDefaultSeed;
};

inline SourceModel source_model(const SimulateOpts& o) {
  SourceModel m;
  if (o.state == "bell") {
    m.state = DensityMatrix::from_pure(bell_state(o.phi));
  } else if (o.state == "hh") {
    m.state = DensityMatrix::from_pure(tensor(Vector2c(1, 0), Vector2c(1, 0)));
  } else if (o.state == "random") {
    Rng rng(split_seed(o.seed, ~std::uint64_t{0}));
    m.state = random_density_matrix(rng);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown state '" + o.state + "' (bell, hh, random)");
  }
  m.pair_rate = o.pairs;
  m.integration_s = o.integration;
  m.window_s = o.window;
  m.eps_a = o.eps_a;
  m.eps_b = o.eps_b;
  m.dark_a = o.dark_a;
  m.dark_b = o.dark_b;
  m.seed = o.seed;
  m.validate();
  return m;
}

inline void run_simulate(const SimulateOpts& o, std::ostream& out) {
  const SourceModel m = source_model(o);
  const NoiseMode noise = o.noiseless ? NoiseMode::noiseless : NoiseMode::poisson;
  std::ostringstream body;
  if (o.kind == "tomo")
    io::write_tomography(body, simulate_tomography(m, noise));
  else if (o.kind == "chsh")
    io::write_chsh(body, simulate_chsh(m, noise));
  else if (o.kind == "freedman")
    io::write_freedman(body, simulate_freedman(m, noise));
  else if (o.kind == "visibility")
    io::write_visibility(body, simulate_visibility(m, noise));
  else
    throw Error(ErrorKind::InvalidArgument, "unknown kind '" + o.kind + "' (tomo, chsh, freedman, visibility)");
  out << "# simulated by " << io::kToolName << ' ' << io::kToolVersion << ": state=" << o.state
      << " phi=" << io::detail::num(o.phi) << " pairs_cps=" << io::detail::num(o.pairs) << " seed=" << o.seed
      << (o.noiseless ? " noiseless" : "") << '\n'
      << body.str();
}

// ---------------------------------------------------------------- qpm

struct QpmOpts {
  double lambda_p = 405.0;
  std::optional<double> lambda_s;
  bool degenerate = false;
  double period = 10.025;
  double temp = 30.0;
  int order = 1;
  double length = 25.0;
  double scan_min = 20.0;
  double scan_max = 40.0;
  std::string model = "ktp";
};

inline json run_qpm(const QpmOpts& o) {
  if (o.degenerate && o.lambda_s && *o.lambda_s != 2.0 * o.lambda_p)
    throw Error(ErrorKind::InvalidArgument, "--degenerate conflicts with --lambda-s");
  if (!o.degenerate && !o.lambda_s) throw Error(ErrorKind::InvalidArgument, "give --lambda-s or --degenerate");
  if (!(o.scan_max > o.scan_min)) throw Error(ErrorKind::InvalidArgument, "scan range is empty");
  const auto model = make_dispersion_model(o.model);

  CrystalSpec c;
  c.lambda_p_nm = o.lambda_p;
  c.lambda_s_nm = o.lambda_s.value_or(2.0 * o.lambda_p);
  c.lambda_i_nm = solve_idler(c.lambda_p_nm, c.lambda_s_nm);
  c.poling_period_um = o.period;
  c.temperature_c = o.temp;
  c.qpm_order = o.order;
  c.length_mm = o.length;

  const double dk = qpm_mismatch(c, *model);
  const double length_um = crystal_length_at(c, *model, o.temp) * 1e3;
  const QpmScan scan = find_qpm_temperature(c, *model, o.scan_min, o.scan_max);

  json rep = io::base_report("qpm");
  rep["inputs"] = nullptr;
  rep["config"] = {{"lambda_p_nm", c.lambda_p_nm},
                   {"lambda_s_nm", c.lambda_s_nm},
                   {"period_um", o.period},
                   {"temperature_c", o.temp},
                   {"order", o.order},
                   {"length_mm", o.length},
                   {"scan_c", {o.scan_min, o.scan_max}},
                   {"dispersion_model", model->id()}};
  rep["metrics"] = {{"lambda_i_nm", io::metric(c.lambda_i_nm)},
                    {"mismatch_rad_per_um", io::metric(dk)},
                    {"half_phase_dkL_over_2", io::metric(0.5 * dk * length_um)},
                    {"period_at_temperature_um", io::metric(poling_period_at(c, *model, o.temp))}};
  rep["scan"] = {{"sign_changes", scan.sign_changes},
                 {"monotone", scan.monotone},
                 {"root_c", scan.root_c ? json(*scan.root_c) : json(nullptr)}};
  return rep;
}

// ---------------------------------------------------------------- dispatch

inline int run_app(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-qubit polarization tomography and nonlocality analysis"};
  app.name("qtomo");
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);

  BellOpts bell;
  VisibilityOpts vis;
  FreedmanOpts fr;
  TomoOpts tomo, meas;
  SimulateOpts sim;
  QpmOpts qpm;

  try {
    const std::uint64_t seed = default_seed();
    for (BootstrapOpts* b : {&bell.boot, &vis.boot, &fr.boot, &tomo.boot, &meas.boot}) b->seed = seed;
    sim.seed = seed;

    auto* s_bell = app.add_subcommand("bell", "CHSH S from a chsh table");
    s_bell->add_option("input,-i,--input", bell.input, "chsh CSV ('-' for stdin)")->required();
    s_bell->add_flag("--hwp", bell.hwp, "table angles are half-wave-plate angles");
    s_bell->add_option("--a", bell.angles.a)->capture_default_str();
    s_bell->add_option("--a-prime", bell.angles.a_prime)->capture_default_str();
    s_bell->add_option("--b", bell.angles.b)->capture_default_str();
    s_bell->add_option("--b-prime", bell.angles.b_prime)->capture_default_str();
    add_bootstrap_options(s_bell, bell.boot);

    auto* s_vis = app.add_subcommand("visibility", "H/V and D/A fringe visibility");
    s_vis->add_option("input,-i,--input", vis.input, "visibility CSV ('-' for stdin)")->required();
    s_vis->add_flag("--hwp", vis.hwp, "table angles are half-wave-plate angles");
    add_bootstrap_options(s_vis, vis.boot);

    auto* s_fr = app.add_subcommand("freedman", "Freedman parameter and efficiency fit");
    s_fr->add_option("input,-i,--input", fr.input, "freedman CSV ('-' for stdin)")->required();
    s_fr->add_option("--phi1", fr.phi1)->capture_default_str();
    s_fr->add_option("--phi2", fr.phi2)->capture_default_str();
    add_bootstrap_options(s_fr, fr.boot);

    auto add_tomo_options = [](CLI::App* sub, TomoOpts& o) {
      sub->add_option("--frame", o.frame, "projector frame: waveplate or label")->capture_default_str();
      sub->add_option("--accidentals", o.accidentals, "off, subtract or model")->capture_default_str();
      sub->add_option("--phi", o.phi, "phase of the target Bell state (rad)")->capture_default_str();
      sub->add_option("--max-iterations", o.max_iterations)->capture_default_str();
      add_bootstrap_options(sub, o.boot);
    };
    auto* s_tomo = app.add_subcommand("tomo", "maximum-likelihood state reconstruction");
    s_tomo->add_option("input,-i,--input", tomo.input, "tomo CSV ('-' for stdin)")->required();
    add_tomo_options(s_tomo, tomo);

    auto* s_meas = app.add_subcommand("measures", "entanglement measures of a density matrix");
    s_meas->add_option("--rho", meas.rho_path, "JSON file with rho {re, im}");
    s_meas->add_option("-i,--input", meas.input, "tomo CSV to reconstruct first");
    add_tomo_options(s_meas, meas);

    auto* s_sim = app.add_subcommand("simulate", "synthesize count tables as CSV");
    s_sim->add_option("--kind", sim.kind, "tomo, chsh, freedman or visibility")->capture_default_str();
    s_sim->add_option("--state", sim.state, "bell, hh or random")->capture_default_str();
    s_sim->add_option("--phi", sim.phi, "Bell phase (rad)")->capture_default_str();
    s_sim->add_option("--pairs", sim.pairs, "pair rate at the analysers (cps)")->capture_default_str();
    s_sim->add_option("--integration", sim.integration, "integration time (s)")->capture_default_str();
    s_sim->add_option("--window", sim.window, "coincidence window (s)")->capture_default_str();
    s_sim->add_option("--eps-a", sim.eps_a)->capture_default_str();
    s_sim->add_option("--eps-b", sim.eps_b)->capture_default_str();
    s_sim->add_option("--dark-a", sim.dark_a, "cps")->capture_default_str();
    s_sim->add_option("--dark-b", sim.dark_b, "cps")->capture_default_str();
    s_sim->add_flag("--noiseless", sim.noiseless, "write expected rates instead of Poisson draws");
    s_sim->add_option("--seed", sim.seed);

    auto* s_qpm = app.add_subcommand("qpm", "quasi-phase-matching mismatch and temperature scan");
    s_qpm->add_option("--lambda-p", qpm.lambda_p, "pump wavelength (nm)")->capture_default_str();
    s_qpm->add_option("--lambda-s", qpm.lambda_s, "signal wavelength (nm)");
    s_qpm->add_flag("--degenerate", qpm.degenerate, "signal = idler = 2 x pump");
    s_qpm->add_option("--period", qpm.period, "poling period (um)")->capture_default_str();
    s_qpm->add_option("--temp", qpm.temp, "crystal temperature (C)")->capture_default_str();
    s_qpm->add_option("--order", qpm.order)->capture_default_str();
    s_qpm->add_option("--length", qpm.length, "crystal length (mm)")->capture_default_str();
    s_qpm->add_option("--scan-min", qpm.scan_min)->capture_default_str();
    s_qpm->add_option("--scan-max", qpm.scan_max)->capture_default_str();
    s_qpm->add_option("--model", qpm.model, "dispersion model id")->capture_default_str();

    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (s_sim->parsed()) {
      run_simulate(sim, out);
      return 0;
    }
    json rep;
    if (s_bell->parsed()) rep = run_bell(bell, in);
    if (s_vis->parsed()) rep = run_visibility(vis, in);
    if (s_fr->parsed()) rep = run_freedman(fr, in);
    if (s_tomo->parsed()) rep = run_tomo(tomo, in);
    if (s_meas->parsed()) rep = run_measures(meas, in);
    if (s_qpm->parsed()) rep = run_qpm(qpm);
    out << rep.dump(2) << '\n';
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << io::kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qtomo: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "qtomo: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "qtomo: SchemaMismatch: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qtomo: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qtomo::app
