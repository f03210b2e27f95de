#pragma once

#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twinpol/classical.hpp"
#include "twinpol/config.hpp"
#include "twinpol/io.hpp"
#include "twinpol/manymol.hpp"
#include "twinpol/quantum.hpp"
#include "twinpol/spectrum.hpp"

namespace twinpol {

inline constexpr const char* kVersion = "1.0.0";

namespace tol {
inline constexpr double kNorm = 1e-8;
inline constexpr double kEnergy = 1e-7;
inline constexpr double kFockShift = 1e-6;
inline constexpr double kAnalyticAgreement = 0.02;
} // namespace tol

inline MolecularModel build_model(const RunConfig& c) {
  if (c.model_kind == ModelKind::ThreeLevel) {
    const auto& t = c.three_level;
    return build_three_level(t.e0, t.e1, t.e2, t.mu02, t.mu12);
  }
  return build_morse_rovib(c.morse, c.grid);
}

/// Largest transition dipole between non-degenerate states.
inline double reference_dipole(const MolecularModel& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.n_states(); ++i)
    for (std::size_t j = 0; j < m.n_states(); ++j)
      if (std::abs(m.energies[i] - m.energies[j]) > 1e-12)
        best = std::max(best, std::abs(m.dipole(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  return best;
}

/// Default dt = 0.01 / fastest frequency. Default t_end satisfies
/// 2 pi / t_end < (2 g mu) / 20, rounded up so the recorded sample count is a
/// power of two.
inline RunConfig resolve_timing(RunConfig c, const MolecularModel& model) {
  const bool td = c.framework == Framework::Classical || c.framework == Framework::QuantumTd;
  if (!td) return c;
  if (c.dt <= 0) c.dt = 0.01 / fastest_frequency(model, c.cavity.omega_c);
  if (c.t_end <= 0) {
    double split = 2.0 * c.cavity.g * reference_dipole(model);
    if (!(split > 0)) split = 0.04 * c.cavity.omega_c;
    const double t_min = 2.0 * M_PI * 20.0 / split;
    const double samples = std::ceil(t_min / (c.dt * c.record_stride));
    const double pow2 = std::exp2(std::ceil(std::log2(samples)));
    c.t_end = pow2 * c.record_stride * c.dt;
  }
  return c;
}

struct BranchWindow {
  std::string branch;
  double lo = 0.0, hi = 0.0;
};

/// R and P windows of the three-level model: the bare transition +- 2 g mu.
inline std::vector<BranchWindow> branch_windows(const RunConfig& c, const MolecularModel& model) {
  if (c.model_kind != ModelKind::ThreeLevel) return {};
  const double half = 2.0 * c.cavity.g * reference_dipole(model);
  const double r = model.energies[2] - model.energies[0];
  const double p = model.energies[2] - model.energies[1];
  return {{"R", r - half, r + half}, {"P", p - half, p + half}};
}

struct RunResult {
  nlohmann::json manifest;
  std::map<std::string, double> splittings; // by branch, first measurable initial state
};

namespace detail {

class RunContext {
public:
  RunContext(const RunConfig& cfg, std::filesystem::path dir) : cfg_(cfg), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }
  nlohmann::json& results() { return results_; }
  std::map<std::string, double>& splittings() { return splittings_; }

  bool wants(const std::string& fmt) const {
    return std::find(cfg_.formats.begin(), cfg_.formats.end(), fmt) != cfg_.formats.end();
  }

  void spectrum(const Spectrum& s, const std::string& stem) {
    if (wants("csv")) {
      write_spectrum_csv(s, path(stem + ".csv"));
      outputs_.push_back(stem + ".csv");
    }
    if (wants("json")) {
      write_json(path(stem + ".json"), spectrum_json(s));
      outputs_.push_back(stem + ".json");
    }
  }

  void trajectory(const Trajectory& tr, const std::string& stem) {
    if (!cfg_.write_trajectory) return;
    if (wants("csv")) {
      write_trajectory_csv(tr, path(stem + ".csv"));
      outputs_.push_back(stem + ".csv");
    }
    if (wants("json")) {
      write_json(path(stem + ".json"), trajectory_json(tr));
      outputs_.push_back(stem + ".json");
    }
  }

  void json(const nlohmann::json& j, const std::string& name) {
    write_json(path(name), j);
    outputs_.push_back(name);
  }

  void text(const std::string& t, const std::string& name) {
    write_text(path(name), t);
    outputs_.push_back(name);
  }

  /// Fatal checks abort the run (after the manifest is written).
  void check(const std::string& name, double value, double tolerance, bool fatal = true) {
    const bool ok = std::isfinite(value) && value <= tolerance;
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", ok}, {"fatal", fatal}});
    if (!ok && fatal && first_failure_.empty()) {
      std::ostringstream os;
      os << "check '" << name << "' failed: " << value << " > " << tolerance;
      first_failure_ = os.str();
    }
  }

  nlohmann::json finish(nlohmann::json manifest) {
    manifest["checks"] = checks_;
    manifest["results"] = results_;
    manifest["outputs"] = outputs_;
    manifest["status"] = first_failure_.empty() ? "ok" : "failed";
    write_json(path("manifest.json"), manifest);
    if (!first_failure_.empty()) throw NumericalError(first_failure_);
    return manifest;
  }

private:
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  const RunConfig& cfg_;
  std::filesystem::path dir_;
  nlohmann::json results_ = nlohmann::json::object();
  nlohmann::json checks_ = nlohmann::json::array();
  std::vector<std::string> outputs_;
  std::map<std::string, double> splittings_;
  std::string first_failure_;
};

inline std::string file_stem(const std::string& label) {
  std::string s = label;
  for (auto& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  return s;
}

inline std::size_t require_state(const MolecularModel& m, const std::string& label) {
  const auto k = m.find(label);
  if (!k) throw ConfigError("state '" + label + "' does not exist in the built model");
  return *k;
}

inline void record_splitting(RunContext& ctx, nlohmann::json& entry, const std::string& branch,
                             std::optional<double> value, const std::string& why) {
  if (value) {
    entry["splittings"][branch] = *value;
    ctx.splittings().emplace(branch, *value);
  } else {
    entry["splittings"][branch] = nullptr;
    entry["splitting_notes"][branch] = why;
  }
}

inline void run_time_dependent(RunContext& ctx, const RunConfig& c, const MolecularModel& model, LightModel light) {
  const PropagationOptions opt{c.t_end, c.dt, c.record_stride, 1e-6};
  const FftOptions fft{c.damping_tau, c.pad_factor};
  const auto windows = branch_windows(c, model);
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& label : c.initial) {
    const auto k = require_state(model, label);
    const Trajectory tr = light == LightModel::Classical ? propagate_classical(model, c.cavity, c.pulse, k, opt)
                                                          : propagate_quantum(model, c.cavity, c.pulse, k, 0, opt);
    const std::string stem = file_stem(label);
    ctx.check("norm_drift_" + stem, tr.max_norm_drift(), tol::kNorm);
    ctx.check("energy_drift_" + stem, tr.energy_drift(), tol::kEnergy);
    ctx.trajectory(tr, "trajectory_" + stem);

    Spectrum spec = dipole_spectrum(tr, fft);
    PeakSet peaks = detect_peaks(spec, c.peak_threshold);
    nlohmann::json entry{{"initial", label}, {"norm_drift", tr.max_norm_drift()}, {"energy_drift", tr.energy_drift()},
                         {"bin_width_au", spec.bin_width}, {"samples", tr.size()}};
    for (const auto& w : windows) {
      try {
        record_splitting(ctx, entry, w.branch, measure_splitting(peaks, w.lo, w.hi, w.branch), "");
      } catch (const AmbiguityError& e) {
        record_splitting(ctx, entry, w.branch, std::nullopt, e.what());
      }
    }
    ctx.spectrum(spec, "spectrum_" + stem);
    ctx.json(to_json(peaks), "peaks_" + stem + ".json");
    runs.push_back(entry);
  }
  ctx.results()["runs"] = runs;
}

inline std::optional<double> stick_splitting(const Spectrum& s, const BranchWindow& w, double rel, std::string& why) {
  const Spectrum in = sticks_in(s, w.lo, w.hi);
  std::vector<double> keep;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in.intensity[i] >= rel * s.max_intensity()) keep.push_back(in.omega[i]);
  if (keep.size() != 2) {
    why = "expected 2 sticks in window, found " + std::to_string(keep.size());
    return std::nullopt;
  }
  return std::abs(keep[1] - keep[0]);
}

/// Largest distance from a base stick above `rel` of the maximum to the
/// nearest stick of `refined`.
inline double max_stick_shift(const Spectrum& base, const Spectrum& refined, double rel) {
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base.intensity[i] < rel * base.max_intensity()) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double w : refined.omega) best = std::min(best, std::abs(w - base.omega[i]));
    worst = std::max(worst, best);
  }
  return worst;
}

struct StaticSpectra {
  std::vector<std::pair<std::string, Spectrum>> spectra;
};

inline StaticSpectra static_spectra(const RunConfig& c, const MolecularModel& model, const CavityParams& cav) {
  const ProductBasis basis(model.n_states(), cav.n_fock_max);
  const PolaritonSolution sol = solve_polaritons(model, cav, basis);
  const Eigen::MatrixXd eig_mu = eigenbasis_dipole(sol, product_dipole(model, basis));
  StaticSpectra out;
  if (c.temperature) {
    StateFilter filter;
    if (!c.initial.empty()) {
      const std::vector<std::string> keep = c.initial;
      filter = [keep](const StateLabel& l) { return std::find(keep.begin(), keep.end(), l.name()) != keep.end(); };
    }
    const ThermalWeights w = boltzmann_weights(model, *c.temperature, filter);
    out.spectra.emplace_back("thermal", thermal_stick_spectrum(sol, eig_mu, model, basis, w, c.weight_floor).spectrum);
    return out;
  }
  for (const auto& label : c.initial) {
    const auto k = require_state(model, label);
    const auto i = dominant_eigenstate(sol, basis.index(k, 0));
    out.spectra.emplace_back(file_stem(label), static_stick_spectrum(sol, eig_mu, model, basis, {{i, 1.0}}));
  }
  return out;
}

inline void run_static(RunContext& ctx, const RunConfig& c, const MolecularModel& model) {
  const StaticSpectra main = static_spectra(c, model, c.cavity);
  CavityParams finer = c.cavity;
  finer.n_fock_max += 1;
  const StaticSpectra refined = static_spectra(c, model, finer);
  CavityParams bare = c.cavity;
  bare.g = 0.0;
  const StaticSpectra reference = static_spectra(c, model, bare);

  const auto windows = branch_windows(c, model);
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t r = 0; r < main.spectra.size(); ++r) {
    const auto& [name, spec] = main.spectra[r];
    const double shift = max_stick_shift(spec, refined.spectra[r].second, c.peak_threshold);
    ctx.check("fock_convergence_" + name, shift, tol::kFockShift, false);
    nlohmann::json entry{{"initial", name}, {"sticks", spec.size()}, {"fock_convergence_shift_au", shift}};
    for (const auto& w : windows) {
      std::string why;
      record_splitting(ctx, entry, w.branch, stick_splitting(spec, w, c.peak_threshold, why), why);
    }
    ctx.spectrum(spec, "sticks_" + name);
    ctx.spectrum(reference.spectra[r].second, "sticks_bare_" + name);
    if (c.broadening > 0) ctx.spectrum(broaden_sticks(spec, Lineshape::Lorentzian, c.broadening), "broadened_" + name);
    runs.push_back(entry);
  }
  ctx.results()["runs"] = runs;
}

inline ManyMolConfig manymol_config(const RunConfig& c, int n_mol, int n0) {
  ManyMolConfig m;
  m.n_mol = n_mol;
  m.n0 = n0;
  m.symmetric = c.symmetric_initial;
  m.g = c.cavity.g;
  m.mu = c.three_level.mu02;
  m.omega02 = c.three_level.e2 - c.three_level.e0;
  m.omega12 = c.three_level.e2 - c.three_level.e1;
  return m;
}

inline void require_equal_dipoles(const RunConfig& c) {
  if (c.three_level.mu02 != c.three_level.mu12)
    throw ConfigError("analytic many-molecule spectra assume mu02 == mu12 (got " + std::to_string(c.three_level.mu02) +
                      " and " + std::to_string(c.three_level.mu12) + ")");
}

inline std::vector<int> occupations(const RunConfig& c, int n_mol) {
  std::vector<int> out;
  if (c.n0.empty()) {
    for (int k = 0; k <= n_mol; ++k) out.push_back(k);
    return out;
  }
  for (int k : c.n0)
    if (k >= 0 && k <= n_mol) out.push_back(k);
  return out;
}

/// Copies mechanism / branch / side from the nearest analytic stick within
/// `window` onto each brute-force stick.
inline void annotate_from(Spectrum& brute, const Spectrum& analytic, double window) {
  for (std::size_t b = 0; b < brute.size(); ++b) {
    double best = window;
    for (std::size_t a = 0; a < analytic.size(); ++a) {
      const double d = std::abs(analytic.omega[a] - brute.omega[b]);
      if (d <= best) {
        best = d;
        brute.info[b].mechanism = analytic.info[a].mechanism;
        brute.info[b].branch = analytic.info[a].branch;
        brute.info[b].side = analytic.info[a].side;
      }
    }
  }
}

inline nlohmann::json comparison_json(const StickComparison& cmp) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : cmp.groups)
    groups.push_back({{"mechanism", g.mechanism}, {"n0", g.n0}, {"analytic_intensity", g.analytic_intensity},
                      {"brute_intensity", g.brute_intensity}, {"intensity_error", g.intensity_error},
                      {"analytic_position_au", g.analytic_position}, {"brute_position_au", g.brute_position},
                      {"position_error", g.position_error}, {"shift_au", g.shift}});
  return {{"groups", groups},
          {"worst_intensity_error", cmp.worst_intensity_error},
          {"worst_position_error", cmp.worst_position_error}};
}

inline void run_manymol_bruteforce(RunContext& ctx, const RunConfig& c, const MolecularModel& model) {
  const bool compare = c.three_level.mu02 == c.three_level.mu12;
  ManyMolOptions opt;
  opt.n_fock_max = c.cavity.n_fock_max;
  opt.include_dse = c.cavity.include_dse;
  opt.excitation_cutoff = c.excitation_cutoff;
  const double window = 0.5 * c.cavity.g * c.three_level.mu02;
  nlohmann::json runs = nlohmann::json::array();
  for (int n : c.n_mol) {
    const ManyMolSystem sys = build_many_molecule_hamiltonian(model, c.cavity, n, opt);
    const ManyMolSolution sol = solve_many_molecule(sys);
    const std::string tag = "N" + std::to_string(n);
    auto emit = [&](Spectrum bf, const Spectrum& an, const std::string& stem, nlohmann::json entry) {
      if (compare) {
        annotate_from(bf, an, window);
        const StickComparison cmp = compare_sticks(an, bf, window, c.symmetric_initial);
        entry["comparison"] = comparison_json(cmp);
        ctx.check("analytic_agreement_" + stem, cmp.worst(), tol::kAnalyticAgreement, false);
      }
      ctx.spectrum(bf, stem);
      runs.push_back(entry);
    };
    if (c.symmetric_initial) {
      emit(brute_force_symmetric_spectrum(sys, sol), analytic_symmetric_spectrum(manymol_config(c, n, 0)),
           "sticks_" + tag + "_symmetric", {{"n_mol", n}, {"initial", "symmetric"}, {"dimension", sys.size()}});
    } else {
      for (int n0 : occupations(c, n))
        emit(brute_force_thermal_spectrum(sys, sol, n0), analytic_nonsymmetric_spectrum(manymol_config(c, n, n0)),
             "sticks_" + tag + "_n0_" + std::to_string(n0),
             {{"n_mol", n}, {"n0", n0}, {"initial", "thermal"}, {"dimension", sys.size()}});
    }
  }
  ctx.results()["runs"] = runs;
}

inline void run_manymol_analytic(RunContext& ctx, const RunConfig& c) {
  require_equal_dipoles(c);
  nlohmann::json runs = nlohmann::json::array();
  for (int n : c.n_mol) {
    const std::string tag = "N" + std::to_string(n);
    if (c.symmetric_initial) {
      const Spectrum s = analytic_symmetric_spectrum(manymol_config(c, n, 0));
      ctx.spectrum(s, "analytic_" + tag + "_symmetric");
      runs.push_back({{"n_mol", n}, {"initial", "symmetric"}, {"sticks", s.size()}});
    } else {
      for (int n0 : occupations(c, n)) {
        const Spectrum s = analytic_nonsymmetric_spectrum(manymol_config(c, n, n0));
        ctx.spectrum(s, "analytic_" + tag + "_n0_" + std::to_string(n0));
        runs.push_back({{"n_mol", n}, {"n0", n0}, {"initial", "thermal"}, {"sticks", s.size()}});
      }
    }
  }
  ctx.results()["runs"] = runs;
}

inline void run_thermo_limit(RunContext& ctx, const RunConfig& c) {
  require_equal_dipoles(c);
  const auto& t = c.three_level;
  const LimitBranch branch = c.symmetric_initial ? LimitBranch::Symmetric : LimitBranch::Thermal;
  const Spectrum s = thermodynamic_limit_spectrum(c.r0, branch, c.cavity.g, t.mu02, t.e2 - t.e0, t.e2 - t.e1);
  ctx.spectrum(s, c.symmetric_initial ? "limit_symmetric" : "limit_thermal");
  ctx.results()["runs"] = nlohmann::json::array({{{"r0", c.r0}, {"initial", c.symmetric_initial ? "symmetric" : "thermal"}}});
}

inline nlohmann::json base_manifest(const RunConfig& c, const MolecularModel& model, const std::string& command) {
  nlohmann::json m;
  m["program"] = "twinpol";
  m["version"] = kVersion;
  m["command"] = command;
  m["config"] = to_json(c);
  m["config_text"] = to_config_text(c);
  m["model"] = {{"kind", to_string(model.kind)}, {"n_states", model.n_states()}, {"hash", model_hash(model)}};
  m["integrator"] = {{"method", "rk4_fixed_step"},
                     {"dt_au", c.dt},
                     {"t_end_au", c.t_end},
                     {"record_stride", c.record_stride},
                     {"fft_pad_factor", c.pad_factor},
                     {"damping_tau_au", c.damping_tau > 0 ? c.damping_tau : c.t_end / 8.0}};
  m["tolerances"] = {{"norm_drift", tol::kNorm},
                     {"energy_drift_relative", tol::kEnergy},
                     {"stick_merge_au", kStickMergeTolerance},
                     {"peak_threshold_relative", c.peak_threshold},
                     {"fock_convergence_au", tol::kFockShift},
                     {"analytic_agreement_relative", tol::kAnalyticAgreement},
                     {"dominant_weight", 0.5}};
  return m;
}

} // namespace detail

/// One run (no sweep) into `dir`.
inline RunResult run_single(const RunConfig& cfg_in, const std::filesystem::path& dir,
                            const std::string& command = "run") {
  const MolecularModel model = build_model(cfg_in);
  const RunConfig c = resolve_timing(cfg_in, model);
  detail::RunContext ctx(c, dir);
  switch (c.framework) {
  case Framework::Classical:
    detail::run_time_dependent(ctx, c, model, LightModel::Classical);
    break;
  case Framework::QuantumTd:
    detail::run_time_dependent(ctx, c, model, LightModel::Quantum);
    break;
  case Framework::QuantumStatic:
    detail::run_static(ctx, c, model);
    break;
  case Framework::ManymolBruteforce:
    detail::run_manymol_bruteforce(ctx, c, model);
    break;
  case Framework::ManymolAnalytic:
    detail::run_manymol_analytic(ctx, c);
    break;
  case Framework::ThermoLimit:
    detail::run_thermo_limit(ctx, c);
    break;
  }
  RunResult out;
  out.splittings = ctx.splittings();
  out.manifest = ctx.finish(detail::base_manifest(c, model, command));
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least squares through the origin, y = s x. R^2 is taken about the mean of y.
inline LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw NumericalError("fit needs at least two points");
  double sxy = 0, sxx = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    mean += y[i];
  }
  mean /= static_cast<double>(y.size());
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  double res = 0, tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    res += std::pow(y[i] - f.slope * x[i], 2);
    tot += std::pow(y[i] - mean, 2);
  }
  f.r_squared = tot > 0 ? 1.0 - res / tot : (res == 0 ? 1.0 : 0.0);
  return f;
}

/// Child runs for every g of the sweep, each in its own subdirectory, then a
/// splitting-versus-g table with a fit per branch.
inline RunResult run_sweep(const RunConfig& c, const std::filesystem::path& dir) {
  if (c.g_sweep.empty()) throw ConfigError("sweep needs a g_sweep list in [cavity]");
  if (c.framework != Framework::Classical && c.framework != Framework::QuantumTd &&
      c.framework != Framework::QuantumStatic)
    throw ConfigError("g sweeps support the classical, quantum_td and quantum_static frameworks");
  std::filesystem::create_directories(dir);
  std::vector<std::future<RunResult>> jobs;
  std::vector<std::string> subdirs;
  for (std::size_t i = 0; i < c.g_sweep.size(); ++i) {
    RunConfig child = c;
    child.g_sweep.clear();
    child.cavity.g = c.g_sweep[i];
    std::ostringstream name;
    name << "g_" << std::setw(2) << std::setfill('0') << i;
    subdirs.push_back(name.str());
    child.out_dir = name.str();
    jobs.push_back(std::async(std::launch::async, [child, sub = dir / name.str()] { return run_single(child, sub, "sweep-child"); }));
  }
  std::vector<RunResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  const std::vector<std::string> branches{"R", "P"};
  std::ostringstream table;
  table << std::setprecision(17) << "g_au,R_splitting_au,P_splitting_au\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    table << c.g_sweep[i];
    for (const auto& b : branches) {
      table << ',';
      if (auto it = results[i].splittings.find(b); it != results[i].splittings.end()) table << it->second;
    }
    table << '\n';
  }

  RunResult out;
  const MolecularModel model = build_model(c);
  nlohmann::json m = detail::base_manifest(c, model, "sweep");
  nlohmann::json fits = nlohmann::json::object();
  for (const auto& b : branches) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < results.size(); ++i)
      if (auto it = results[i].splittings.find(b); it != results[i].splittings.end()) {
        x.push_back(c.g_sweep[i]);
        y.push_back(it->second);
      }
    if (x.size() == results.size() && x.size() >= 2) {
      const LinearFit f = fit_through_origin(x, y);
      fits[b] = {{"slope", f.slope}, {"r_squared", f.r_squared}, {"points", f.points}};
    } else {
      fits[b] = {{"slope", nullptr}, {"r_squared", nullptr}, {"points", x.size()},
                 {"note", "splitting not measurable at every g"}};
    }
  }
  write_text((dir / "sweep.csv").string(), table.str());
  m["children"] = subdirs;
  m["fits"] = fits;
  m["outputs"] = {"sweep.csv"};
  m["status"] = "ok";
  write_json((dir / "manifest.json").string(), m);
  out.manifest = m;
  return out;
}

inline RunResult run(const RunConfig& c, const std::filesystem::path& dir) {
  return c.g_sweep.empty() ? run_single(c, dir) : run_sweep(c, dir);
}

} // namespace twinpol
