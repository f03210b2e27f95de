#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twinpol/error.hpp"
#include "twinpol/model.hpp"
#include "twinpol/pulse.hpp"
#include "twinpol/units.hpp"

namespace twinpol {

enum class Framework { Classical, QuantumStatic, QuantumTd, ManymolBruteforce, ManymolAnalytic, ThermoLimit };

inline const std::map<std::string, Framework>& framework_names() {
  static const std::map<std::string, Framework> m{{"classical", Framework::Classical},
                                                   {"quantum_static", Framework::QuantumStatic},
                                                   {"quantum_td", Framework::QuantumTd},
                                                   {"manymol_bruteforce", Framework::ManymolBruteforce},
                                                   {"manymol_analytic", Framework::ManymolAnalytic},
                                                   {"thermo_limit", Framework::ThermoLimit}};
  return m;
}

inline std::string to_string(Framework f) {
  for (const auto& [k, v] : framework_names())
    if (v == f) return k;
  return "?";
}

struct ThreeLevelSpec {
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  double mu02 = 1.0, mu12 = 1.0;
};

/// Fully resolved run description. Zero t_end / dt mean "derive from the
/// resolution rules" and are filled in by the runner.
struct RunConfig {
  std::string source;
  ModelKind model_kind = ModelKind::ThreeLevel;
  ThreeLevelSpec three_level;
  MorseParams morse;
  RadialGrid grid;

  std::optional<double> temperature;
  double weight_floor = 1e-6;

  CavityParams cavity;
  std::vector<double> g_sweep;

  Framework framework = Framework::QuantumStatic;
  std::vector<std::string> initial;
  KickPulse pulse;
  double t_end = 0.0;
  double dt = 0.0;
  int record_stride = 4;
  double damping_tau = 0.0;
  int pad_factor = 4;
  double peak_threshold = 0.01;
  double broadening = 0.0;

  std::vector<int> n_mol;
  std::vector<int> n0;
  bool symmetric_initial = false;
  int excitation_cutoff = -1;
  double r0 = 0.5;

  std::string out_dir = "out";
  std::vector<std::string> formats{"csv"};
  bool write_trajectory = true;
};

namespace detail {

enum class Quantity { Energy, Wavenumber, Temperature, Length, InverseLength, Time, Dipole, Mass, Count, Number, Text, Flag };

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct RawValue {
  std::string text;
  int line = 0;
};

using Sections = std::map<std::string, std::map<std::string, RawValue>>;

class ConfigReader {
public:
  ConfigReader(const Sections& s, std::string source) : sections_(s), source_(std::move(source)) {}

  bool has_section(const std::string& sec) const { return sections_.count(sec) > 0; }
  bool has(const std::string& sec, const std::string& key) const {
    auto it = sections_.find(sec);
    return it != sections_.end() && it->second.count(key) > 0;
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (has(sec, key)) os << ":" << sections_.at(sec).at(key).line;
    os << ": [" << sec << "] " << key << ": " << msg;
    throw ConfigError(os.str());
  }

  const RawValue& raw(const std::string& sec, const std::string& key) {
    used_.insert({sec, key});
    return sections_.at(sec).at(key);
  }

  double number(const std::string& sec, const std::string& key, Quantity q) {
    return convert(sec, key, raw(sec, key).text, q, "");
  }

  double number_or(const std::string& sec, const std::string& key, Quantity q, double fallback) {
    return has(sec, key) ? number(sec, key, q) : fallback;
  }

  double required(const std::string& sec, const std::string& key, Quantity q) {
    if (!has(sec, key)) missing(sec, key);
    return number(sec, key, q);
  }

  int integer(const std::string& sec, const std::string& key, int fallback) {
    if (!has(sec, key)) return fallback;
    const double v = number(sec, key, Quantity::Count);
    if (v != std::floor(v)) fail(sec, key, "expected an integer");
    return static_cast<int>(v);
  }

  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
    return has(sec, key) ? raw(sec, key).text : fallback;
  }

  bool flag(const std::string& sec, const std::string& key, bool fallback) {
    if (!has(sec, key)) return fallback;
    std::string v = raw(sec, key).text;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    fail(sec, key, "expected on/off, got '" + v + "'");
  }

  std::vector<std::string> list_items(const std::string& sec, const std::string& key, std::string* trailing_unit) {
    std::string v = raw(sec, key).text;
    if (v.empty() || v.front() != '[') {
      if (trailing_unit) trailing_unit->clear();
      return {v};
    }
    const auto close = v.find(']');
    if (close == std::string::npos) fail(sec, key, "unterminated list");
    if (trailing_unit) *trailing_unit = trim(v.substr(close + 1));
    std::vector<std::string> items;
    std::stringstream ss(v.substr(1, close - 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key, Quantity q) {
    std::string unit;
    std::vector<double> out;
    for (const auto& item : list_items(sec, key, &unit)) out.push_back(convert(sec, key, item, q, unit));
    return out;
  }

  std::vector<int> integers(const std::string& sec, const std::string& key) {
    std::vector<int> out;
    for (double v : numbers(sec, key, Quantity::Count)) {
      if (v != std::floor(v)) fail(sec, key, "expected integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& sec, const std::string& key) {
    return list_items(sec, key, nullptr);
  }

  [[noreturn]] void missing(const std::string& sec, const std::string& key) const {
    throw ConfigError(source_ + ": missing required key '" + key + "' in section [" + sec + "]");
  }

  void reject_unused() const {
    for (const auto& [sec, keys] : sections_)
      for (const auto& [key, val] : keys)
        if (!used_.count({sec, key})) {
          std::ostringstream os;
          os << source_ << ":" << val.line << ": unknown key '" << key << "' in section [" << sec << "]";
          throw ConfigError(os.str());
        }
  }

private:
  double convert(const std::string& sec, const std::string& key, const std::string& item, Quantity q,
                 const std::string& list_unit) const {
    std::istringstream is(item);
    double v = 0.0;
    if (!(is >> v)) fail(sec, key, "cannot parse number from '" + item + "'");
    std::string unit;
    is >> unit;
    std::string extra;
    if (is >> extra) fail(sec, key, "unexpected trailing text '" + extra + "'");
    if (unit.empty()) unit = list_unit;
    if (unit.empty()) return v;
    auto bad = [&](const std::string& allowed) {
      return "unit '" + unit + "' does not fit this quantity (allowed: " + allowed + ")";
    };
    switch (q) {
    case Quantity::Energy:
      if (unit == "au" || unit == "hartree") return v;
      if (unit == "cm-1") return units::cm_to_hartree(v);
      fail(sec, key, bad("au, hartree, cm-1"));
    case Quantity::Wavenumber:
      if (unit == "cm-1") return v;
      if (unit == "au" || unit == "hartree") return units::hartree_to_cm(v);
      fail(sec, key, bad("cm-1, au, hartree"));
    case Quantity::Temperature:
      if (unit == "K") return v;
      fail(sec, key, bad("K"));
    case Quantity::Length:
      if (unit == "bohr" || unit == "au") return v;
      fail(sec, key, bad("bohr, au"));
    case Quantity::InverseLength:
      if (unit == "bohr-1" || unit == "au") return v;
      fail(sec, key, bad("bohr-1, au"));
    case Quantity::Time:
    case Quantity::Dipole:
    case Quantity::Mass:
      if (unit == "au") return v;
      fail(sec, key, bad("au"));
    default:
      fail(sec, key, bad("none"));
    }
  }

  const Sections& sections_;
  std::string source_;
  std::set<std::pair<std::string, std::string>> used_;
};

inline Sections tokenize(std::istream& in, const std::string& source) {
  Sections s;
  std::string line, section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known{"three_level", "morse", "thermal", "cavity", "protocol", "output"};
      if (!known.count(section))
        throw ConfigError(source + ":" + std::to_string(n) + ": unknown section [" + section + "]");
      s[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(n) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError(source + ":" + std::to_string(n) + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(n) + ": empty key");
    if (s[section].count(key))
      throw ConfigError(source + ":" + std::to_string(n) + ": duplicate key '" + key + "' in [" + section + "]");
    s[section][key] = RawValue{val, n};
  }
  return s;
}

} // namespace detail

/// State names a model built from `cfg` will carry, without building it.
inline std::vector<std::string> expected_state_labels(const RunConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.model_kind == ModelKind::ThreeLevel) {
    for (int i = 0; i < 3; ++i) out.push_back(StateLabel{i}.name());
    return out;
  }
  int idx = 0;
  for (int v = 0; v <= cfg.morse.v_max; ++v)
    for (int j = 0; j <= cfg.morse.j_max; ++j)
      for (int m = -j; m <= j; ++m) out.push_back(StateLabel{idx++, v, j, m}.name());
  return out;
}

inline RunConfig parse_config_stream(std::istream& in, const std::string& source) {
  using detail::Quantity;
  const auto sections = detail::tokenize(in, source);
  detail::ConfigReader r(sections, source);
  RunConfig c;
  c.source = source;

  const bool tl = r.has_section("three_level");
  const bool mo = r.has_section("morse");
  if (tl == mo) throw ConfigError(source + ": exactly one model section ([three_level] or [morse]) is required");
  if (tl) {
    c.model_kind = ModelKind::ThreeLevel;
    const std::string s = "three_level";
    c.three_level.e0 = r.number_or(s, "E0", Quantity::Energy, 0.0);
    c.three_level.e1 = r.required(s, "E1", Quantity::Energy);
    c.three_level.e2 = r.required(s, "E2", Quantity::Energy);
    c.three_level.mu02 = r.required(s, "mu02", Quantity::Dipole);
    c.three_level.mu12 = r.required(s, "mu12", Quantity::Dipole);
  } else {
    c.model_kind = ModelKind::Rovibrational;
    const std::string s = "morse";
    auto& m = c.morse;
    m.dissociation_cm = r.number_or(s, "D_e", Quantity::Wavenumber, m.dissociation_cm);
    m.alpha = r.number_or(s, "alpha", Quantity::InverseLength, m.alpha);
    m.r_eq = r.number_or(s, "R_e", Quantity::Length, m.r_eq);
    m.mass1 = r.number_or(s, "m1", Quantity::Mass, m.mass1);
    m.mass2 = r.number_or(s, "m2", Quantity::Mass, m.mass2);
    m.v_max = r.integer(s, "v_max", m.v_max);
    m.j_max = r.integer(s, "J_max", m.j_max);
    if (r.has(s, "dipole_curve")) m.dipole_curve = r.numbers(s, "dipole_curve", Quantity::Dipole);
    c.grid.r_min = r.number_or(s, "r_min", Quantity::Length, c.grid.r_min);
    c.grid.r_max = r.number_or(s, "r_max", Quantity::Length, c.grid.r_max);
    c.grid.n_points = r.integer(s, "n_points", c.grid.n_points);
    c.grid.check_convergence = r.flag(s, "check_convergence", c.grid.check_convergence);
    c.grid.tolerance_cm = r.number_or(s, "grid_tolerance", Quantity::Wavenumber, c.grid.tolerance_cm);
  }

  if (r.has_section("thermal")) {
    if (r.has("thermal", "temperature")) c.temperature = r.number("thermal", "temperature", Quantity::Temperature);
    c.weight_floor = r.number_or("thermal", "weight_floor", Quantity::Number, c.weight_floor);
  }

  if (!r.has_section("cavity")) throw ConfigError(source + ": missing section [cavity]");
  {
    const std::string s = "cavity";
    c.cavity.omega_c = r.required(s, "omega_c", Quantity::Energy);
    if (r.has(s, "g_sweep")) c.g_sweep = r.numbers(s, "g_sweep", Quantity::Energy);
    if (r.has(s, "g"))
      c.cavity.g = r.number(s, "g", Quantity::Energy);
    else if (c.g_sweep.empty())
      r.missing(s, "g");
    else
      c.cavity.g = c.g_sweep.back();
    c.cavity.include_dse = r.flag(s, "dse", true);
    c.cavity.n_fock_max = r.integer(s, "n_fock_max", 2);
  }

  if (!r.has_section("protocol")) throw ConfigError(source + ": missing section [protocol]");
  {
    const std::string s = "protocol";
    if (!r.has(s, "framework")) r.missing(s, "framework");
    const std::string fw = r.text(s, "framework", "");
    const auto it = framework_names().find(fw);
    if (it == framework_names().end()) {
      std::string valid;
      for (const auto& [k, v] : framework_names()) valid += (valid.empty() ? "" : ", ") + k;
      r.fail(s, "framework", "unknown framework '" + fw + "' (valid: " + valid + ")");
    }
    c.framework = it->second;
    if (r.has(s, "initial")) c.initial = r.strings(s, "initial");
    c.pulse.amplitude = r.number_or(s, "pulse_amplitude", Quantity::Energy, c.pulse.amplitude);
    c.pulse.t0 = r.number_or(s, "pulse_t0", Quantity::Time, c.pulse.t0);
    c.pulse.sigma = r.number_or(s, "pulse_sigma", Quantity::Time, c.pulse.sigma);
    c.t_end = r.number_or(s, "t_end", Quantity::Time, 0.0);
    c.dt = r.number_or(s, "dt", Quantity::Time, 0.0);
    c.record_stride = r.integer(s, "record_stride", c.record_stride);
    c.damping_tau = r.number_or(s, "damping_tau", Quantity::Time, 0.0);
    c.pad_factor = r.integer(s, "pad_factor", c.pad_factor);
    c.peak_threshold = r.number_or(s, "peak_threshold", Quantity::Number, c.peak_threshold);
    c.broadening = r.number_or(s, "broadening", Quantity::Energy, 0.0);
    if (r.has(s, "n_mol")) c.n_mol = r.integers(s, "n_mol");
    if (r.has(s, "n0")) c.n0 = r.integers(s, "n0");
    const std::string mm_init = r.text(s, "manymol_initial", "thermal");
    if (mm_init != "thermal" && mm_init != "symmetric")
      r.fail(s, "manymol_initial", "expected thermal or symmetric");
    c.symmetric_initial = mm_init == "symmetric";
    c.excitation_cutoff = r.integer(s, "excitation_cutoff", -1);
    c.r0 = r.number_or(s, "r0", Quantity::Number, c.r0);
  }

  if (r.has_section("output")) {
    const std::string s = "output";
    c.out_dir = r.text(s, "directory", c.out_dir);
    if (r.has(s, "formats")) c.formats = r.strings(s, "formats");
    for (const auto& f : c.formats)
      if (f != "csv" && f != "json") r.fail(s, "formats", "unknown format '" + f + "' (valid: csv, json)");
    c.write_trajectory = r.flag(s, "trajectory", c.write_trajectory);
  }

  r.reject_unused();

  // Cross-field validation.
  try {
    c.cavity.validate();
    c.pulse.validate();
    if (c.model_kind == ModelKind::Rovibrational) c.morse.validate();
  } catch (const InvalidModelError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (c.record_stride < 1 || c.pad_factor < 1) throw ConfigError(source + ": record_stride and pad_factor must be >= 1");
  for (double g : c.g_sweep)
    if (!(g >= 0)) throw ConfigError(source + ": g_sweep values must be non-negative");

  const bool manymol = c.framework == Framework::ManymolBruteforce || c.framework == Framework::ManymolAnalytic ||
                       c.framework == Framework::ThermoLimit;
  if (manymol && c.model_kind != ModelKind::ThreeLevel)
    throw ConfigError(source + ": framework " + to_string(c.framework) + " needs a [three_level] model");
  if ((c.framework == Framework::ManymolBruteforce || c.framework == Framework::ManymolAnalytic) && c.n_mol.empty())
    throw ConfigError(source + ": missing required key 'n_mol' in section [protocol] for " + to_string(c.framework));
  for (int n : c.n_mol)
    if (n < 1) throw ConfigError(source + ": n_mol values must be >= 1");
  if (c.framework == Framework::ThermoLimit && !(c.r0 >= 0 && c.r0 <= 1))
    throw ConfigError(source + ": r0 must lie in [0, 1]");

  const bool needs_initial = c.framework == Framework::Classical || c.framework == Framework::QuantumTd ||
                             (c.framework == Framework::QuantumStatic && !c.temperature);
  if (needs_initial && c.initial.empty())
    throw ConfigError(source + ": missing required key 'initial' in section [protocol]");
  if (!manymol && !c.initial.empty()) {
    const auto labels = expected_state_labels(c);
    for (const auto& l : c.initial)
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
        std::string valid;
        const std::size_t show = std::min<std::size_t>(labels.size(), 12);
        for (std::size_t i = 0; i < show; ++i) valid += (i ? ", " : "") + labels[i];
        if (show < labels.size()) valid += ", ...";
        std::ostringstream os;
        os << source << ":" << sections.at("protocol").at("initial").line << ": [protocol] initial: unknown state '"
           << l << "' (valid labels: " << valid << ")";
        throw ConfigError(os.str());
      }
  }
  return c;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config_stream(in, path);
}

inline RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>") {
  std::istringstream in(text);
  return parse_config_stream(in, source);
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["source"] = c.source;
  if (c.model_kind == ModelKind::ThreeLevel) {
    j["three_level"] = {{"E0_au", c.three_level.e0}, {"E1_au", c.three_level.e1}, {"E2_au", c.three_level.e2},
                        {"mu02_au", c.three_level.mu02}, {"mu12_au", c.three_level.mu12}};
  } else {
    const auto& m = c.morse;
    j["morse"] = {{"D_e_cm1", m.dissociation_cm}, {"alpha_bohr-1", m.alpha}, {"R_e_bohr", m.r_eq},
                  {"m1_au", m.mass1}, {"m2_au", m.mass2}, {"v_max", m.v_max}, {"J_max", m.j_max},
                  {"dipole_curve_au", m.dipole_curve}, {"dipole_curve_is_placeholder", true},
                  {"r_min_bohr", c.grid.r_min}, {"r_max_bohr", c.grid.r_max}, {"n_points", c.grid.n_points},
                  {"check_convergence", c.grid.check_convergence}, {"grid_tolerance_cm1", c.grid.tolerance_cm}};
  }
  if (c.temperature) j["thermal"] = {{"temperature_K", *c.temperature}, {"weight_floor", c.weight_floor}};
  j["cavity"] = {{"omega_c_au", c.cavity.omega_c}, {"g_au", c.cavity.g}, {"dse", c.cavity.include_dse},
                 {"n_fock_max", c.cavity.n_fock_max}, {"g_sweep_au", c.g_sweep}};
  j["protocol"] = {{"framework", to_string(c.framework)},
                   {"initial", c.initial},
                   {"pulse", {{"amplitude_au", c.pulse.amplitude}, {"t0_au", c.pulse.t0}, {"sigma_au", c.pulse.sigma}}},
                   {"t_end_au", c.t_end},
                   {"dt_au", c.dt},
                   {"record_stride", c.record_stride},
                   {"damping_tau_au", c.damping_tau},
                   {"pad_factor", c.pad_factor},
                   {"peak_threshold", c.peak_threshold},
                   {"broadening_hwhm_au", c.broadening},
                   {"n_mol", c.n_mol},
                   {"n0", c.n0},
                   {"manymol_initial", c.symmetric_initial ? "symmetric" : "thermal"},
                   {"excitation_cutoff", c.excitation_cutoff},
                   {"r0", c.r0}};
  j["output"] = {{"directory", c.out_dir}, {"formats", c.formats}, {"trajectory", c.write_trajectory}};
  return j;
}

/// Config text that parses back to `c` bit for bit (all energies in au).
inline std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  auto list = [&](const auto& v, const char* unit) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']' << unit;
  };
  if (c.model_kind == ModelKind::ThreeLevel) {
    const auto& t = c.three_level;
    os << "[three_level]\nE0 = " << t.e0 << " au\nE1 = " << t.e1 << " au\nE2 = " << t.e2 << " au\nmu02 = " << t.mu02
       << " au\nmu12 = " << t.mu12 << " au\n\n";
  } else {
    const auto& m = c.morse;
    os << "[morse]\nD_e = " << m.dissociation_cm << " cm-1\nalpha = " << m.alpha << " bohr-1\nR_e = " << m.r_eq
       << " bohr\nm1 = " << m.mass1 << " au\nm2 = " << m.mass2 << " au\nv_max = " << m.v_max
       << "\nJ_max = " << m.j_max << "\ndipole_curve = ";
    list(m.dipole_curve, " au");
    os << "\nr_min = " << c.grid.r_min << " bohr\nr_max = " << c.grid.r_max << " bohr\nn_points = " << c.grid.n_points
       << "\ncheck_convergence = " << (c.grid.check_convergence ? "on" : "off")
       << "\ngrid_tolerance = " << c.grid.tolerance_cm << " cm-1\n\n";
  }
  if (c.temperature)
    os << "[thermal]\ntemperature = " << *c.temperature << " K\nweight_floor = " << c.weight_floor << "\n\n";
  os << "[cavity]\nomega_c = " << c.cavity.omega_c << " au\ng = " << c.cavity.g << " au\n";
  if (!c.g_sweep.empty()) {
    os << "g_sweep = ";
    list(c.g_sweep, " au");
    os << '\n';
  }
  os << "dse = " << (c.cavity.include_dse ? "on" : "off") << "\nn_fock_max = " << c.cavity.n_fock_max << "\n\n";
  os << "[protocol]\nframework = " << to_string(c.framework) << '\n';
  if (!c.initial.empty()) {
    os << "initial = ";
    list(c.initial, "");
    os << '\n';
  }
  os << "pulse_amplitude = " << c.pulse.amplitude << " au\npulse_t0 = " << c.pulse.t0
     << " au\npulse_sigma = " << c.pulse.sigma << " au\nt_end = " << c.t_end << " au\ndt = " << c.dt
     << " au\nrecord_stride = " << c.record_stride << "\ndamping_tau = " << c.damping_tau
     << " au\npad_factor = " << c.pad_factor << "\npeak_threshold = " << c.peak_threshold
     << "\nbroadening = " << c.broadening << " au\n";
  if (!c.n_mol.empty()) {
    os << "n_mol = ";
    list(c.n_mol, "");
    os << '\n';
  }
  if (!c.n0.empty()) {
    os << "n0 = ";
    list(c.n0, "");
    os << '\n';
  }
  os << "manymol_initial = " << (c.symmetric_initial ? "symmetric" : "thermal")
     << "\nexcitation_cutoff = " << c.excitation_cutoff << "\nr0 = " << c.r0 << "\n\n";
  os << "[output]\ndirectory = " << c.out_dir << "\nformats = ";
  list(c.formats, "");
  os << "\ntrajectory = " << (c.write_trajectory ? "on" : "off") << '\n';
  return os.str();
}

} // namespace twinpol
