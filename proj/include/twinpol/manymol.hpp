#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "twinpol/error.hpp"
#include "twinpol/model.hpp"
#include "twinpol/pulse.hpp"
#include "twinpol/quantum.hpp"
#include "twinpol/spectrum.hpp"

namespace twinpol {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

struct ManyMolConfig {
  int n_mol = 1;
  int n0 = 1;              // molecules in psi_0 (thermal case)
  bool symmetric = false;  // ((psi_0 + psi_1)/sqrt 2)^N initial state instead
  double g = 2e-4;         // bare coupling; each molecule sees g/sqrt(N)
  double mu = 1.0;
  double omega02 = 1e-2;
  double omega12 = 8e-3;

  int n1() const { return n_mol - n0; }

  void validate() const {
    if (n_mol < 1) throw InvalidModelError("n_mol must be at least 1");
    if (!symmetric && (n0 < 0 || n0 > n_mol))
      throw InvalidModelError("occupation n0 = " + std::to_string(n0) + " incompatible with n_mol = " +
                              std::to_string(n_mol));
  }
};

/// Coefficient rows of the symmetric and dark excited states built over the
/// n0 molecules initially in psi_0.
struct ManifoldBasis {
  int n0 = 0;
  Eigen::RowVectorXd symmetric;
  Eigen::MatrixXd dark; // (n0 - 1) x n0, orthonormal rows summing to zero
};

/// Gram-Schmidt over the seeds e_1, e_2, ... against the symmetric row.
inline ManifoldBasis manifold_basis(int n0) {
  if (n0 < 1) throw InvalidModelError("manifold basis needs n0 >= 1");
  ManifoldBasis b;
  b.n0 = n0;
  b.symmetric = Eigen::RowVectorXd::Constant(n0, 1.0 / std::sqrt(static_cast<double>(n0)));
  std::vector<Eigen::RowVectorXd> rows{b.symmetric};
  for (int seed = 0; seed < n0 && static_cast<int>(rows.size()) < n0; ++seed) {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(n0);
    v[seed] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& r : rows) v -= v.dot(r) * r;
    const double nrm = v.norm();
    if (nrm < 1e-8) continue;
    rows.push_back(v / nrm);
  }
  b.dark.resize(n0 - 1, n0);
  for (int k = 1; k < n0; ++k) b.dark.row(k - 1) = rows[k];
  return b;
}

// ---------------------------------------------------------------------------
// Brute-force product basis

struct ManyMolOptions {
  int n_fock_max = 2;
  bool include_dse = false;
  /// Keep only states with (molecules above psi_1) + photons <= cutoff; -1 keeps all.
  int excitation_cutoff = -1;
  std::size_t max_dimension = 8000;
};

inline constexpr int kMaxBruteForceMolecules = 8;

/// Product basis |c_1..c_N>|N> with c_j the molecular state of molecule j.
struct ManyMolSystem {
  int n_mol = 0;
  int n_states = 0; // per molecule
  ManyMolOptions options;
  std::vector<long> config;  // base-n_states code, molecule j is digit j
  std::vector<int> photons;
  Eigen::MatrixXd hamiltonian;
  Eigen::MatrixXd dipole;    // total dipole (x) 1

  std::size_t size() const { return config.size(); }

  int digit(long code, int j) const {
    for (int i = 0; i < j; ++i) code /= n_states;
    return static_cast<int>(code % n_states);
  }

  std::vector<int> occupation(std::size_t i) const {
    std::vector<int> occ(n_mol);
    long code = config[i];
    for (int j = 0; j < n_mol; ++j) {
      occ[j] = static_cast<int>(code % n_states);
      code /= n_states;
    }
    return occ;
  }

  std::string label(std::size_t i) const {
    std::string s;
    for (int k : occupation(i)) s += std::to_string(k);
    return s + "_N" + std::to_string(photons[i]);
  }
};

/// H = sum_j H_mol(j) + N w_c + (g/sqrt N)(a + a^dagger) sum_j mu(j) [+ dse on the total dipole].
inline ManyMolSystem build_many_molecule_hamiltonian(const MolecularModel& model, const CavityParams& cav, int n_mol,
                                                     const ManyMolOptions& opt = {}) {
  cav.validate();
  if (n_mol < 1) throw InvalidModelError("n_mol must be at least 1");
  if (n_mol > kMaxBruteForceMolecules)
    throw SizeError("brute-force many-molecule basis limited to n_mol <= " + std::to_string(kMaxBruteForceMolecules) +
                    " (requested " + std::to_string(n_mol) + "); use the analytic spectra");
  const int m = static_cast<int>(model.n_states());
  long n_conf = 1;
  for (int j = 0; j < n_mol; ++j) n_conf *= m;

  ManyMolSystem sys;
  sys.n_mol = n_mol;
  sys.n_states = m;
  sys.options = opt;

  auto excitation = [&](long code) {
    int e = 0;
    for (int j = 0; j < n_mol; ++j, code /= m) e += (code % m) >= 2 ? 1 : 0;
    return e;
  };
  std::vector<long> index_of(static_cast<std::size_t>(n_conf) * (opt.n_fock_max + 1), -1);
  for (int n = 0; n <= opt.n_fock_max; ++n)
    for (long c = 0; c < n_conf; ++c) {
      if (opt.excitation_cutoff >= 0 && excitation(c) + n > opt.excitation_cutoff) continue;
      index_of[static_cast<std::size_t>(n * n_conf + c)] = static_cast<long>(sys.config.size());
      sys.config.push_back(c);
      sys.photons.push_back(n);
    }
  const auto dim = sys.size();
  if (dim > opt.max_dimension) {
    std::ostringstream os;
    os << "many-molecule basis has " << dim << " states, above the dense limit " << opt.max_dimension
       << "; lower n_fock_max or set an excitation cutoff";
    throw SizeError(os.str());
  }

  // Total dipole over configurations.
  using T = Eigen::Triplet<double>;
  std::vector<T> trip;
  long stride = 1;
  for (int j = 0; j < n_mol; ++j, stride *= m) {
    for (long c = 0; c < n_conf; ++c) {
      const int kj = static_cast<int>((c / stride) % m);
      for (int k = 0; k < m; ++k) {
        const double d = model.dipole(kj, k);
        if (d != 0.0) trip.emplace_back(static_cast<int>(c + (k - kj) * stride), static_cast<int>(c), d);
      }
    }
  }
  Eigen::SparseMatrix<double> mu_conf(n_conf, n_conf);
  mu_conf.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> mu2_conf;
  if (opt.include_dse) mu2_conf = mu_conf * mu_conf;

  const double g = cav.g / std::sqrt(static_cast<double>(n_mol));
  const double dse = opt.include_dse ? g * g / cav.omega_c : 0.0;
  sys.hamiltonian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  sys.dipole = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto& h = sys.hamiltonian;
  for (std::size_t i = 0; i < dim; ++i) {
    const long c = sys.config[i];
    const int n = sys.photons[i];
    double e = n * cav.omega_c;
    long code = c;
    for (int j = 0; j < n_mol; ++j, code /= m) e += model.energies[code % m];
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += e;
  }
  for (long c = 0; c < n_conf; ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(mu_conf, c); it; ++it) {
      const long c2 = it.row();
      for (int n = 0; n <= opt.n_fock_max; ++n) {
        const long a = index_of[static_cast<std::size_t>(n * n_conf + c)];
        if (a < 0) continue;
        const long b = index_of[static_cast<std::size_t>(n * n_conf + c2)];
        if (b >= 0) sys.dipole(b, a) = it.value();
        if (n < opt.n_fock_max) {
          const long b1 = index_of[static_cast<std::size_t>((n + 1) * n_conf + c2)];
          if (b1 >= 0) {
            const double v = g * std::sqrt(n + 1.0) * it.value();
            h(b1, a) += v;
            h(a, b1) += v;
          }
        }
      }
    }
    if (opt.include_dse) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(mu2_conf, c); it; ++it) {
        for (int n = 0; n <= opt.n_fock_max; ++n) {
          const long a = index_of[static_cast<std::size_t>(n * n_conf + c)];
          const long b = index_of[static_cast<std::size_t>(n * n_conf + it.row())];
          if (a >= 0 && b >= 0) h(b, a) += dse * it.value();
        }
      }
    }
  }
  return sys;
}

namespace detail {

inline int count_state(const std::vector<int>& occ, int k) {
  return static_cast<int>(std::count(occ.begin(), occ.end(), k));
}

inline bool in_ground_manifold(const std::vector<int>& occ) {
  return std::all_of(occ.begin(), occ.end(), [](int k) { return k <= 1; });
}

} // namespace detail

struct ManyMolSolution {
  PolaritonSolution polaritons;
  Eigen::MatrixXd eig_dipole;
};

inline ManyMolSolution solve_many_molecule(const ManyMolSystem& sys) {
  ManyMolSolution s;
  s.polaritons = diagonalize_polaritons(sys.hamiltonian);
  s.eig_dipole = eigenbasis_dipole(s.polaritons, sys.dipole);
  return s;
}

/// Thermal (nonsymmetric) spectrum: every eigenstate with more than half of its
/// weight on configurations holding n0 molecules in psi_0 and the rest in psi_1
/// (no photons) is an initial state with weight 1.
inline Spectrum brute_force_thermal_spectrum(const ManyMolSystem& sys, const ManyMolSolution& sol, int n0) {
  if (n0 < 0 || n0 > sys.n_mol) throw InvalidModelError("n0 outside 0..n_mol");
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (sys.photons[i] != 0) continue;
    const auto occ = sys.occupation(i);
    if (detail::in_ground_manifold(occ) && detail::count_state(occ, 0) == n0) rows.push_back(static_cast<Eigen::Index>(i));
  }
  const auto& v = sol.polaritons.eigenvectors;
  std::vector<std::pair<std::size_t, double>> initial;
  for (Eigen::Index e = 0; e < v.cols(); ++e) {
    double w = 0.0;
    for (auto r : rows) w += v(r, e) * v(r, e);
    if (w > 0.5) initial.emplace_back(static_cast<std::size_t>(e), 1.0);
  }
  const double expected = binomial(sys.n_mol, n0);
  if (static_cast<double>(initial.size()) != expected) {
    std::ostringstream os;
    os << "identified " << initial.size() << " initial eigenstates for n0 = " << n0 << ", expected " << expected;
    throw AmbiguityError(os.str());
  }
  Spectrum raw;
  raw.kind = SpectrumKind::Sticks;
  const auto& d = sol.eig_dipole;
  const auto& ev = sol.polaritons.eigenvalues;
  for (const auto& [i, w] : initial) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index f = 0; f < ev.size(); ++f) {
      const double om = ev[f] - ev[ii];
      if (om > kStickMergeTolerance && d(ii, f) != 0.0) raw.push_stick(om, w * d(ii, f) * d(ii, f));
    }
  }
  Spectrum out = prune_sticks(merge_sticks(raw, kStickMergeTolerance), 1e-12);
  for (auto& si : out.info) {
    si.n_mol = sys.n_mol;
    si.n0 = n0;
  }
  return out;
}

/// Spectrum of |0> ((psi_0 + psi_1)/sqrt 2)^N.
inline Spectrum brute_force_symmetric_spectrum(const ManyMolSystem& sys, const ManyMolSolution& sol) {
  Eigen::VectorXd init = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.size()));
  const double amp = std::pow(2.0, -0.5 * sys.n_mol);
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (sys.photons[i] == 0 && detail::in_ground_manifold(sys.occupation(i))) init[static_cast<Eigen::Index>(i)] = amp;
  const Eigen::VectorXd c = sol.polaritons.eigenvectors.transpose() * init;
  Spectrum out = superposition_stick_spectrum(sol.polaritons, sol.eig_dipole, c);
  for (auto& si : out.info) si.n_mol = sys.n_mol;
  return out;
}

// ---------------------------------------------------------------------------
// Analytic spectra

inline Spectrum analytic_nonsymmetric_spectrum(const ManyMolConfig& cfg) {
  ManyMolConfig c = cfg;
  c.symmetric = false;
  c.validate();
  const int n = c.n_mol, n0 = c.n0;
  const double mu2 = c.mu * c.mu;
  Spectrum s;
  s.kind = SpectrumKind::Sticks;
  if (n0 > 0) {
    const double split = c.g * std::sqrt(static_cast<double>(n0) / n) * c.mu;
    const double inten = n0 * 0.5 * mu2 * binomial(n, n0);
    for (int side : {-1, 1})
      s.push_stick(c.omega02 + side * split, inten, StickInfo{"", "", "polariton", "R", n0, n, side});
  }
  const double c_up = binomial(n, n0 + 1);
  if (c_up > 0) {
    const double split = c.g * std::sqrt(static_cast<double>(n0 + 1) / n) * c.mu;
    for (int side : {-1, 1})
      s.push_stick(c.omega12 + side * split, 0.5 * mu2 * c_up, StickInfo{"", "", "twin", "P", n0, n, side});
    if (n0 > 0) s.push_stick(c.omega12, n0 * mu2 * c_up, StickInfo{"", "", "dark", "P", n0, n, 0});
  }
  return s;
}

inline Spectrum analytic_symmetric_spectrum(const ManyMolConfig& cfg) {
  if (cfg.n_mol < 1) throw InvalidModelError("n_mol must be at least 1");
  const int n = cfg.n_mol;
  const double mu2 = cfg.mu * cfg.mu;
  const double norm = std::pow(2.0, -n);
  Spectrum s;
  s.kind = SpectrumKind::Sticks;
  for (int n0 = 0; n0 <= n; ++n0) {
    const double w = binomial(n, n0) * norm * mu2;
    if (n0 > 0) {
      const double split = cfg.g * cfg.mu * std::sqrt(static_cast<double>(n0) / n);
      for (int side : {-1, 1})
        s.push_stick(cfg.omega02 + side * split, n0 * w, StickInfo{"", "", "polariton", "R", n0, n, side});
    }
    if (n0 < n) {
      const double split = cfg.g * cfg.mu * std::sqrt(static_cast<double>(n0 + 1) / n);
      for (int side : {-1, 1})
        s.push_stick(cfg.omega12 + side * split, (n - n0) * w, StickInfo{"", "", "twin", "P", n0, n, side});
    }
  }
  return s;
}

enum class LimitBranch { Thermal, Symmetric };

inline Spectrum thermodynamic_limit_spectrum(double r0, LimitBranch branch, double g, double mu, double omega02,
                                             double omega12) {
  if (!(r0 >= 0.0 && r0 <= 1.0)) throw InvalidModelError("r0 must lie in [0, 1]");
  const double mu2 = mu * mu;
  Spectrum s;
  s.kind = SpectrumKind::Sticks;
  if (branch == LimitBranch::Thermal) {
    const double split = g * std::sqrt(r0) * mu;
    for (int side : {-1, 1})
      s.push_stick(omega02 + side * split, 0.5 * mu2, StickInfo{"", "", "polariton", "R", -1, -1, side});
    s.push_stick(omega12, mu2, StickInfo{"", "", "dark", "P", -1, -1, 0});
  } else {
    const double split = std::sqrt(2.0) * g * mu;
    for (int side : {-1, 1})
      s.push_stick(omega02 + side * split, 0.5 * mu2, StickInfo{"", "", "polariton", "R", -1, -1, side});
    for (int side : {-1, 1})
      s.push_stick(omega12 + side * split, 0.5 * mu2, StickInfo{"", "", "twin", "P", -1, -1, side});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Analytic versus brute force

struct GroupComparison {
  std::string mechanism;
  int n0 = -1;
  double analytic_intensity = 0.0;
  double brute_intensity = 0.0;
  double analytic_position = 0.0; // doublet splitting, or singlet centre
  double brute_position = 0.0;
  double intensity_error = 0.0;   // relative
  double position_error = 0.0;    // relative splitting error, or |shift| / w for singlets
  double shift = 0.0;             // brute minus analytic position (hartree)
};

struct StickComparison {
  std::vector<GroupComparison> groups;
  double worst_intensity_error = 0.0;
  double worst_position_error = 0.0;
  double worst() const { return std::max(worst_intensity_error, worst_position_error); }
};

/// Each brute-force stick is assigned to the nearest analytic stick within
/// `window`; sticks farther from every analytic line are ignored. Groups are
/// (mechanism, n0). Doublets are compared by the splitting of their intensity
/// centroids, singlets by their centroid frequency. With `normalize` both
/// spectra are scaled to unit total intensity over the compared sticks first.
inline StickComparison compare_sticks(const Spectrum& analytic, const Spectrum& brute, double window,
                                      bool normalize = false) {
  const std::size_t na = analytic.size();
  std::vector<double> mass(na, 0.0), moment(na, 0.0);
  const double floor = 1e-9 * brute.max_intensity();
  for (std::size_t b = 0; b < brute.size(); ++b) {
    if (brute.intensity[b] < floor) continue;
    std::size_t best = na;
    double dist = window;
    for (std::size_t a = 0; a < na; ++a) {
      const double d = std::abs(analytic.omega[a] - brute.omega[b]);
      if (d <= dist) {
        dist = d;
        best = a;
      }
    }
    if (best == na) continue;
    mass[best] += brute.intensity[b];
    moment[best] += brute.intensity[b] * brute.omega[b];
  }
  double an_total = 1.0, bf_total = 1.0;
  if (normalize) {
    an_total = analytic.total_intensity();
    bf_total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(bf_total > 0)) throw NumericalError("no brute-force sticks near the analytic lines");
  }

  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < na; ++a) groups[{analytic.info[a].mechanism, analytic.info[a].n0}].push_back(a);

  StickComparison out;
  for (const auto& [key, members] : groups) {
    GroupComparison gc;
    gc.mechanism = key.first;
    gc.n0 = key.second;
    for (auto a : members) {
      gc.analytic_intensity += analytic.intensity[a] / an_total;
      gc.brute_intensity += mass[a] / bf_total;
    }
    gc.intensity_error = std::abs(gc.brute_intensity / gc.analytic_intensity - 1.0);
    auto centroid = [&](std::size_t a) { return mass[a] > 0 ? moment[a] / mass[a] : 0.0; };
    if (members.size() == 2) {
      const auto lo = analytic.info[members[0]].side < 0 ? members[0] : members[1];
      const auto hi = lo == members[0] ? members[1] : members[0];
      gc.analytic_position = analytic.omega[hi] - analytic.omega[lo];
      gc.brute_position = (mass[lo] > 0 && mass[hi] > 0) ? centroid(hi) - centroid(lo) : 0.0;
    } else {
      gc.analytic_position = analytic.omega[members[0]];
      gc.brute_position = centroid(members[0]);
    }
    gc.shift = gc.brute_position - gc.analytic_position;
    gc.position_error = std::abs(gc.shift / gc.analytic_position);
    out.worst_intensity_error = std::max(out.worst_intensity_error, gc.intensity_error);
    out.worst_position_error = std::max(out.worst_position_error, gc.position_error);
    out.groups.push_back(gc);
  }
  return out;
}

} // namespace twinpol
