#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "twinpol/error.hpp"
#include "twinpol/units.hpp"

namespace twinpol {

enum class ModelKind { ThreeLevel, Rovibrational };

inline std::string to_string(ModelKind k) {
  return k == ModelKind::ThreeLevel ? "three_level" : "rovibrational";
}

/// Quantum numbers of one cavity-free eigenstate. For the 3-level model only
/// `index` is meaningful; rovibrational states carry v, J, M.
struct StateLabel {
  int index = 0;
  int v = -1;
  int J = -1;
  int M = 0;

  bool is_rovib() const { return v >= 0; }

  std::string name() const {
    if (!is_rovib()) return "psi_" + std::to_string(index);
    return "v" + std::to_string(v) + "_J" + std::to_string(J) + "_M" + std::to_string(M);
  }

  bool operator==(const StateLabel&) const = default;
};

/// Cavity-free molecule: eigenenergies (hartree, ground state at zero) and the
/// real symmetric dipole matrix in the eigenbasis. Immutable once built.
struct MolecularModel {
  ModelKind kind = ModelKind::ThreeLevel;
  Eigen::VectorXd energies;
  Eigen::MatrixXd dipole;
  std::vector<StateLabel> labels;

  std::size_t n_states() const { return static_cast<std::size_t>(energies.size()); }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i].name() == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> find_rovib(int v, int J, int M) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i].v == v && labels[i].J == J && labels[i].M == M) return i;
    return std::nullopt;
  }

  double transition(std::size_t from, std::size_t to) const { return energies[to] - energies[from]; }

  /// Throws InvalidModelError if any invariant is broken.
  void validate() const {
    const auto n = energies.size();
    if (n == 0) throw InvalidModelError("model has no states");
    if (dipole.rows() != n || dipole.cols() != n)
      throw InvalidModelError("dipole matrix shape does not match the number of states");
    if (static_cast<Eigen::Index>(labels.size()) != n)
      throw InvalidModelError("label count does not match the number of states");
    if (!energies.allFinite() || !dipole.allFinite()) throw InvalidModelError("non-finite model entries");
    if ((dipole - dipole.transpose()).cwiseAbs().maxCoeff() != 0.0)
      throw InvalidModelError("dipole matrix is not symmetric");
    // A manifold is the whole 3-level ladder, or one v ladder of a rovib model.
    for (Eigen::Index i = 1; i < n; ++i) {
      if (labels[i - 1].v != labels[i].v) continue;
      if (energies[i] < energies[i - 1])
        throw InvalidModelError("energies not sorted within manifold at state " + labels[i].name());
    }
    if (kind == ModelKind::Rovibrational) {
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          if (dipole(i, j) == 0.0) continue;
          const auto& a = labels[i];
          const auto& b = labels[j];
          if (a.M != b.M || std::abs(a.J - b.J) != 1)
            throw InvalidModelError("dipole selection rule violated between " + a.name() + " and " + b.name());
        }
    }
  }
};

// ---------------------------------------------------------------------------
// 3-level Lambda system

inline MolecularModel build_three_level(double e0, double e1, double e2, double mu02, double mu12) {
  if (!(e0 < e1 && e1 < e2)) {
    std::ostringstream os;
    os << "three-level energies must satisfy E0 < E1 < E2 (got " << e0 << ", " << e1 << ", " << e2 << ")";
    throw InvalidModelError(os.str());
  }
  MolecularModel m;
  m.kind = ModelKind::ThreeLevel;
  m.energies = Eigen::Vector3d(0.0, e1 - e0, e2 - e0);
  m.dipole = Eigen::Matrix3d::Zero();
  m.dipole(0, 2) = m.dipole(2, 0) = mu02;
  m.dipole(1, 2) = m.dipole(2, 1) = mu12;
  for (int i = 0; i < 3; ++i) m.labels.push_back(StateLabel{i});
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Morse rovibrational model

struct MorseParams {
  double dissociation_cm = 37209.369; // D_e
  double alpha = 0.993099;            // bohr^-1
  double r_eq = 2.40855;              // bohr
  double mass1 = 1837.1522;           // H
  double mass2 = 63744.3019;          // Cl
  int v_max = 1;
  int j_max = 10;
  /// mu(R) = sum_k c_k (R - R_e)^k. The default linear curve is a placeholder
  /// for the literature HCl dipole function.
  std::vector<double> dipole_curve{0.43, 0.30};

  double reduced_mass() const { return mass1 * mass2 / (mass1 + mass2); }
  double dissociation() const { return units::cm_to_hartree(dissociation_cm); }

  double potential(double r) const {
    const double x = std::exp(-alpha * (r - r_eq));
    return dissociation() * (x * x - 2.0 * x + 1.0);
  }

  double dipole_at(double r) const {
    double acc = 0.0;
    for (auto it = dipole_curve.rbegin(); it != dipole_curve.rend(); ++it) acc = acc * (r - r_eq) + *it;
    return acc;
  }

  /// Rigid-rotor constant 1/(2 m R_e^2), hartree.
  double rotational_constant() const { return 1.0 / (2.0 * reduced_mass() * r_eq * r_eq); }

  void validate() const {
    if (!(dissociation_cm > 0 && alpha > 0 && r_eq > 0 && mass1 > 0 && mass2 > 0))
      throw InvalidModelError("Morse parameters must be positive");
    if (v_max < 0) throw InvalidModelError("v_max must be >= 0");
    if (j_max < 1) throw InvalidModelError("J_max must be >= 1");
    if (dipole_curve.empty()) throw InvalidModelError("dipole curve needs at least one coefficient");
  }
};

struct RadialGrid {
  double r_min = 1.2;
  double r_max = 6.0;
  int n_points = 400;
  bool check_convergence = true;
  /// Allowed eigenvalue change (cm^-1) when the point density is doubled.
  double tolerance_cm = 1e-4;
};

namespace detail {

/// Sine-basis DVR kinetic energy on the open interval (r_min, r_max) with
/// n_points interior points (Colbert-Miller, box variant).
inline Eigen::MatrixXd sine_dvr_kinetic(const RadialGrid& grid, double mass) {
  const int n = grid.n_points + 1;
  const double len = grid.r_max - grid.r_min;
  const double pref = (1.0 / (2.0 * mass)) * M_PI * M_PI / (2.0 * len * len);
  Eigen::MatrixXd t(grid.n_points, grid.n_points);
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (i == j) {
        const double s = std::sin(M_PI * i / n);
        t(i - 1, j - 1) = pref * ((2.0 * n * n + 1.0) / 3.0 - 1.0 / (s * s));
      } else {
        const double sm = std::sin(M_PI * (i - j) / (2.0 * n));
        const double sp = std::sin(M_PI * (i + j) / (2.0 * n));
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        t(i - 1, j - 1) = pref * sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
      }
    }
  }
  return t;
}

inline Eigen::VectorXd dvr_points(const RadialGrid& grid) {
  const int n = grid.n_points + 1;
  Eigen::VectorXd r(grid.n_points);
  for (int i = 1; i < n; ++i) r[i - 1] = grid.r_min + i * (grid.r_max - grid.r_min) / n;
  return r;
}

struct RadialStates {
  Eigen::VectorXd energies;     // lowest v_max+1 levels
  Eigen::MatrixXd wavefunctions; // columns, DVR-normalized
};

inline RadialStates solve_radial(const MorseParams& p, const RadialGrid& grid, int j) {
  const double mass = p.reduced_mass();
  const Eigen::VectorXd r = dvr_points(grid);
  Eigen::MatrixXd h = sine_dvr_kinetic(grid, mass);
  for (Eigen::Index i = 0; i < r.size(); ++i)
    h(i, i) += p.potential(r[i]) + j * (j + 1.0) / (2.0 * mass * r[i] * r[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("radial eigensolver failed for J=" + std::to_string(j));
  const int nv = p.v_max + 1;
  RadialStates out;
  out.energies = es.eigenvalues().head(nv);
  out.wavefunctions = es.eigenvectors().leftCols(nv);
  // Phase convention: the innermost significant lobe is positive.
  for (int v = 0; v < nv; ++v) {
    auto col = out.wavefunctions.col(v);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > 1e-3 * peak) {
        if (col[i] < 0) col *= -1.0;
        break;
      }
    }
  }
  return out;
}

} // namespace detail

/// <J' M| cos(theta) |J M> for a linear rotor.
inline double direction_cosine(int j, int jp, int m) {
  if (std::abs(m) > j || std::abs(m) > jp) return 0.0;
  if (jp == j + 1) return std::sqrt(((j + 1.0) * (j + 1.0) - m * m) / ((2.0 * j + 1.0) * (2.0 * j + 3.0)));
  if (jp == j - 1) return std::sqrt((1.0 * j * j - m * m) / ((2.0 * j - 1.0) * (2.0 * j + 1.0)));
  return 0.0;
}

/// Rovibrational eigenstates |v,J,M> of a Morse diatomic with Z-polarized
/// dipole couplings. States ordered v-major, then J, then M.
inline MolecularModel build_morse_rovib(const MorseParams& params, const RadialGrid& grid = {}) {
  params.validate();
  if (!(grid.r_min > 0 && grid.r_max > grid.r_min && grid.n_points >= 10))
    throw InvalidModelError("radial grid must satisfy 0 < r_min < r_max with at least 10 points");

  const int nv = params.v_max + 1;
  std::vector<detail::RadialStates> radial;
  radial.reserve(params.j_max + 1);
  for (int j = 0; j <= params.j_max; ++j) radial.push_back(detail::solve_radial(params, grid, j));

  // Bound levels must sit below the potential at both box edges.
  const double wall = std::min(params.potential(grid.r_min), params.potential(grid.r_max));
  for (int j = 0; j <= params.j_max; ++j)
    if (radial[j].energies[nv - 1] >= wall)
      throw ConvergenceError("radial grid does not cover the classically allowed region for J=" + std::to_string(j));

  if (grid.check_convergence) {
    RadialGrid fine = grid;
    fine.n_points = 2 * grid.n_points + 1;
    for (int j : {0, params.j_max}) {
      const auto ref = detail::solve_radial(params, fine, j);
      const double drift = units::hartree_to_cm((ref.energies - radial[j].energies).cwiseAbs().maxCoeff());
      if (drift > grid.tolerance_cm) {
        std::ostringstream os;
        os << "radial grid too coarse: eigenvalues for J=" << j << " move by " << drift
           << " cm^-1 when the grid is refined (tolerance " << grid.tolerance_cm << ")";
        throw ConvergenceError(os.str());
      }
    }
  }

  const Eigen::VectorXd r = detail::dvr_points(grid);
  Eigen::VectorXd mu_r(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) mu_r[i] = params.dipole_at(r[i]);

  MolecularModel m;
  m.kind = ModelKind::Rovibrational;
  std::vector<double> e;
  for (int v = 0; v < nv; ++v)
    for (int j = 0; j <= params.j_max; ++j)
      for (int mm = -j; mm <= j; ++mm) {
        m.labels.push_back(StateLabel{static_cast<int>(m.labels.size()), v, j, mm});
        e.push_back(radial[j].energies[v]);
      }
  const auto n = static_cast<Eigen::Index>(e.size());
  m.energies = Eigen::Map<Eigen::VectorXd>(e.data(), n);
  m.energies.array() -= m.energies.minCoeff();

  m.dipole = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const auto& la = m.labels[a];
      const auto& lb = m.labels[b];
      if (la.M != lb.M || std::abs(la.J - lb.J) != 1) continue;
      const double radial_me = (radial[la.J].wavefunctions.col(la.v).array() * mu_r.array() *
                                radial[lb.J].wavefunctions.col(lb.v).array())
                                   .sum();
      const double val = radial_me * direction_cosine(la.J, lb.J, la.M);
      m.dipole(a, b) = m.dipole(b, a) = val;
    }
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------

/// Matrix of mu^2 approximated by the product of dipole matrices over the
/// model's own basis.
inline Eigen::MatrixXd mu_squared_matrix(const MolecularModel& model) {
  Eigen::MatrixXd sq = model.dipole * model.dipole;
  return 0.5 * (sq + sq.transpose());
}

struct ThermalWeights {
  double temperature = 0.0;
  std::vector<double> weights; // one per model state, zero outside the subset
};

using StateFilter = std::function<bool(const StateLabel&)>;

/// Boltzmann populations over the states accepted by `subset` (all states if
/// empty). Each |v,J,M> is weighted individually.
inline ThermalWeights boltzmann_weights(const MolecularModel& model, double temperature_k,
                                        const StateFilter& subset = {}) {
  if (!(temperature_k > 0)) throw InvalidModelError("temperature must be positive");
  const auto n = model.n_states();
  std::vector<bool> keep(n, true);
  if (subset)
    for (std::size_t i = 0; i < n; ++i) keep[i] = subset(model.labels[i]);
  double e_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) e_min = std::min(e_min, model.energies[i]);
  if (!std::isfinite(e_min)) throw InvalidModelError("thermal subset selects no states");

  const double kt = units::kBoltzmannHartreePerKelvin * temperature_k;
  ThermalWeights out{temperature_k, std::vector<double>(n, 0.0)};
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    out.weights[i] = std::exp(-(model.energies[i] - e_min) / kt);
    z += out.weights[i];
  }
  for (auto& w : out.weights) w /= z;
  return out;
}

// ---------------------------------------------------------------------------
// JSON round trip

inline nlohmann::json to_json(const MolecularModel& m) {
  nlohmann::json j;
  j["kind"] = to_string(m.kind);
  j["energies_hartree"] = std::vector<double>(m.energies.data(), m.energies.data() + m.energies.size());
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.dipole.rows(); ++i) {
    std::vector<double> row(m.dipole.cols());
    for (Eigen::Index k = 0; k < m.dipole.cols(); ++k) row[k] = m.dipole(i, k);
    rows.push_back(row);
  }
  j["dipole"] = rows;
  auto labels = nlohmann::json::array();
  for (const auto& l : m.labels) {
    nlohmann::json e{{"index", l.index}, {"name", l.name()}};
    if (l.is_rovib()) {
      e["v"] = l.v;
      e["J"] = l.J;
      e["M"] = l.M;
    }
    labels.push_back(e);
  }
  j["labels"] = labels;
  return j;
}

inline MolecularModel model_from_json(const nlohmann::json& j) {
  MolecularModel m;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "three_level")
    m.kind = ModelKind::ThreeLevel;
  else if (kind == "rovibrational")
    m.kind = ModelKind::Rovibrational;
  else
    throw InvalidModelError("unknown model kind '" + kind + "'");
  const auto e = j.at("energies_hartree").get<std::vector<double>>();
  const auto n = static_cast<Eigen::Index>(e.size());
  m.energies = Eigen::Map<const Eigen::VectorXd>(e.data(), n);
  const auto& rows = j.at("dipole");
  if (static_cast<Eigen::Index>(rows.size()) != n) throw InvalidModelError("dipole row count mismatch");
  m.dipole.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != n) throw InvalidModelError("dipole column count mismatch");
    for (Eigen::Index k = 0; k < n; ++k) m.dipole(i, k) = row[k];
  }
  for (const auto& l : j.at("labels")) {
    StateLabel s;
    s.index = l.at("index").get<int>();
    if (l.contains("v")) {
      s.v = l.at("v").get<int>();
      s.J = l.at("J").get<int>();
      s.M = l.at("M").get<int>();
    }
    m.labels.push_back(s);
  }
  m.validate();
  return m;
}

} // namespace twinpol
