#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "twinpol/classical.hpp"
#include "twinpol/error.hpp"
#include "twinpol/model.hpp"
#include "twinpol/pulse.hpp"
#include "twinpol/rk4.hpp"
#include "twinpol/spectrum.hpp"
#include "twinpol/trajectory.hpp"

namespace twinpol {

/// |psi_k, N> product states, N-major: index = N * n_mol + k.
struct ProductBasis {
  std::size_t n_mol = 0;
  int n_fock_max = 0;

  ProductBasis() = default;
  ProductBasis(std::size_t molecular_states, int fock_max) : n_mol(molecular_states), n_fock_max(fock_max) {
    if (molecular_states == 0 || fock_max < 0) throw DimensionError("empty product basis");
  }

  std::size_t size() const { return n_mol * static_cast<std::size_t>(n_fock_max + 1); }
  std::size_t index(std::size_t k, int n) const { return static_cast<std::size_t>(n) * n_mol + k; }
  std::size_t molecular(std::size_t i) const { return i % n_mol; }
  int photons(std::size_t i) const { return static_cast<int>(i / n_mol); }

  std::string label(std::size_t i, const MolecularModel& model) const {
    return model.labels[molecular(i)].name() + "_N" + std::to_string(photons(i));
  }
};

/// H = diag(E_k + N w_c) + g (sqrt(N+1) d_{N',N+1} + sqrt(N) d_{N',N-1}) mu_{k'k}
///     + (g^2/w_c) mu^2_{k'k} d_{N'N}  (last term only with dse on).
inline Eigen::MatrixXd assemble_hamiltonian(const MolecularModel& model, const CavityParams& cav,
                                            const ProductBasis& basis) {
  cav.validate();
  if (basis.n_mol != model.n_states())
    throw DimensionError("product basis built for " + std::to_string(basis.n_mol) + " molecular states, model has " +
                         std::to_string(model.n_states()));
  const auto nm = static_cast<Eigen::Index>(basis.n_mol);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::MatrixXd mu2 = cav.include_dse ? Eigen::MatrixXd(cav.dse_prefactor() * mu_squared_matrix(model))
                                              : Eigen::MatrixXd::Zero(nm, nm);
  for (int n = 0; n <= basis.n_fock_max; ++n) {
    const Eigen::Index off = n * nm;
    h.block(off, off, nm, nm) = mu2;
    for (Eigen::Index k = 0; k < nm; ++k) h(off + k, off + k) += model.energies[k] + n * cav.omega_c;
    if (n < basis.n_fock_max) {
      const Eigen::MatrixXd v = cav.g * std::sqrt(n + 1.0) * model.dipole;
      h.block(off + nm, off, nm, nm) = v;
      h.block(off, off + nm, nm, nm) = v.transpose();
    }
  }
  return h;
}

/// mu (x) 1 on the product basis.
inline Eigen::MatrixXd product_dipole(const MolecularModel& model, const ProductBasis& basis) {
  const auto nm = static_cast<Eigen::Index>(basis.n_mol);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= basis.n_fock_max; ++n) m.block(n * nm, n * nm, nm, nm) = model.dipole;
  return m;
}

struct PolaritonSolution {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors; // columns
};

inline PolaritonSolution diagonalize_polaritons(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw DimensionError("Hamiltonian is not square");
  const double scale = h.cwiseAbs().maxCoeff();
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw NumericalError("Hamiltonian is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver did not converge for a " << h.rows() << "x" << h.cols() << " matrix (max |H_ij| = " << scale
       << ", Frobenius norm = " << h.norm() << ")";
    throw NumericalError(os.str());
  }
  return PolaritonSolution{es.eigenvalues(), es.eigenvectors()};
}

/// Diagonalizes each invariant block separately so that degenerate states in
/// different blocks (e.g. +M and -M) are never mixed. `blocks` must partition
/// the basis and H must not couple different blocks.
inline PolaritonSolution diagonalize_polaritons(const Eigen::MatrixXd& h,
                                                const std::vector<std::vector<Eigen::Index>>& blocks) {
  const auto dim = h.rows();
  std::vector<int> owner(static_cast<std::size_t>(dim), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto i : blocks[b]) {
      if (i < 0 || i >= dim || owner[i] >= 0) throw DimensionError("symmetry blocks do not partition the basis");
      owner[i] = static_cast<int>(b);
    }
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (owner[i] < 0) throw DimensionError("symmetry blocks do not cover the basis");
    for (Eigen::Index j = 0; j < dim; ++j)
      if (h(i, j) != 0.0 && owner[i] != owner[j]) throw DimensionError("Hamiltonian couples different symmetry blocks");
  }
  std::vector<double> vals;
  std::vector<Eigen::VectorXd> vecs;
  vals.reserve(dim);
  vecs.reserve(dim);
  for (const auto& blk : blocks) {
    const auto n = static_cast<Eigen::Index>(blk.size());
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) sub(a, b) = h(blk[a], blk[b]);
    const auto part = diagonalize_polaritons(sub);
    for (Eigen::Index e = 0; e < n; ++e) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
      for (Eigen::Index a = 0; a < n; ++a) v[blk[a]] = part.eigenvectors(a, e);
      vals.push_back(part.eigenvalues[e]);
      vecs.push_back(std::move(v));
    }
  }
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
  PolaritonSolution sol;
  sol.eigenvalues.resize(dim);
  sol.eigenvectors.resize(dim, dim);
  for (Eigen::Index e = 0; e < dim; ++e) {
    sol.eigenvalues[e] = vals[order[e]];
    sol.eigenvectors.col(e) = vecs[order[e]];
  }
  return sol;
}

/// Invariant subspaces of the product basis: one per M for rovibrational
/// models (Z polarization conserves M), a single block otherwise.
inline std::vector<std::vector<Eigen::Index>> symmetry_blocks(const MolecularModel& model, const ProductBasis& basis) {
  std::map<int, std::vector<Eigen::Index>> by_m;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int key = model.kind == ModelKind::Rovibrational ? model.labels[basis.molecular(i)].M : 0;
    by_m[key].push_back(static_cast<Eigen::Index>(i));
  }
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& [m, idx] : by_m) out.push_back(std::move(idx));
  return out;
}

/// Polariton eigenproblem for a model coupled to the cavity, using the
/// model's symmetry blocks.
inline PolaritonSolution solve_polaritons(const MolecularModel& model, const CavityParams& cav,
                                          const ProductBasis& basis) {
  return diagonalize_polaritons(assemble_hamiltonian(model, cav, basis), symmetry_blocks(model, basis));
}

/// <Psi_i| mu (x) 1 |Psi_f> for all eigenstate pairs.
inline Eigen::MatrixXd eigenbasis_dipole(const PolaritonSolution& sol, const Eigen::MatrixXd& product_mu) {
  return sol.eigenvectors.transpose() * product_mu * sol.eigenvectors;
}

/// Eigenstate with the largest weight on basis state `b`; the weight must
/// exceed one half for the identification to be unambiguous.
inline std::size_t dominant_eigenstate(const PolaritonSolution& sol, std::size_t b) {
  Eigen::Index best = 0;
  const double w = sol.eigenvectors.row(static_cast<Eigen::Index>(b)).cwiseAbs2().maxCoeff(&best);
  if (!(w > 0.5)) {
    std::ostringstream os;
    os << "no eigenstate has more than half of its weight on basis state " << b << " (best " << w << ")";
    throw AmbiguityError(os.str());
  }
  return static_cast<std::size_t>(best);
}

/// Name of the eigenstate after its largest basis component.
inline std::string eigenstate_label(const PolaritonSolution& sol, std::size_t i, const MolecularModel& model,
                                    const ProductBasis& basis) {
  Eigen::Index b = 0;
  sol.eigenvectors.col(static_cast<Eigen::Index>(i)).cwiseAbs2().maxCoeff(&b);
  return basis.label(static_cast<std::size_t>(b), model);
}

inline constexpr double kStickMergeTolerance = 1e-10;

/// Absorption sticks from the weighted initial eigenstates: w = E_f - E_i > 0,
/// I = sum_i weight_i |<Psi_i|mu|Psi_f>|^2.
inline Spectrum static_stick_spectrum(const PolaritonSolution& sol, const Eigen::MatrixXd& eig_mu,
                                      const MolecularModel& model, const ProductBasis& basis,
                                      const std::vector<std::pair<std::size_t, double>>& initial,
                                      double rel_floor = 1e-12) {
  Spectrum raw;
  raw.kind = SpectrumKind::Sticks;
  const auto dim = sol.eigenvalues.size();
  double top = 0.0;
  for (const auto& [i, w] : initial) {
    if (static_cast<Eigen::Index>(i) >= dim) throw DimensionError("initial eigenstate index out of range");
    top = std::max(top, w * eig_mu.row(static_cast<Eigen::Index>(i)).cwiseAbs2().maxCoeff());
  }
  for (const auto& [i, w] : initial) {
    const auto ii = static_cast<Eigen::Index>(i);
    const std::string li = eigenstate_label(sol, i, model, basis);
    for (Eigen::Index f = 0; f < dim; ++f) {
      const double omega = sol.eigenvalues[f] - sol.eigenvalues[ii];
      const double inten = w * eig_mu(ii, f) * eig_mu(ii, f);
      if (omega <= kStickMergeTolerance || inten <= rel_floor * top) continue;
      StickInfo si;
      si.label_i = li;
      si.label_f = eigenstate_label(sol, static_cast<std::size_t>(f), model, basis);
      raw.push_stick(omega, inten, std::move(si));
    }
  }
  return merge_sticks(raw, kStickMergeTolerance);
}

inline Spectrum static_stick_spectrum(const PolaritonSolution& sol, const MolecularModel& model,
                                      const ProductBasis& basis,
                                      const std::vector<std::pair<std::size_t, double>>& initial) {
  return static_stick_spectrum(sol, eigenbasis_dipole(sol, product_dipole(model, basis)), model, basis, initial);
}

/// Sticks for an initial superposition sum_i c_i |Psi_i> (coefficients in the
/// eigenbasis). Components within one degenerate cluster interfere:
/// I_f = sum_clusters |sum_{i in cluster} c_i <Psi_i|mu|Psi_f>|^2.
inline Spectrum superposition_stick_spectrum(const PolaritonSolution& sol, const Eigen::MatrixXd& eig_mu,
                                             const Eigen::VectorXd& c, double coeff_floor = 1e-8,
                                             double rel_floor = 1e-12) {
  const auto dim = sol.eigenvalues.size();
  if (c.size() != dim) throw DimensionError("superposition coefficients do not match the eigenbasis");
  Spectrum raw;
  raw.kind = SpectrumKind::Sticks;
  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index end = start + 1;
    while (end < dim && sol.eigenvalues[end] - sol.eigenvalues[start] <= kStickMergeTolerance) ++end;
    Eigen::VectorXd amp = Eigen::VectorXd::Zero(dim);
    bool any = false;
    for (Eigen::Index i = start; i < end; ++i) {
      if (std::abs(c[i]) < coeff_floor) continue;
      amp += c[i] * eig_mu.row(i).transpose();
      any = true;
    }
    if (any) {
      for (Eigen::Index f = 0; f < dim; ++f) {
        const double omega = sol.eigenvalues[f] - sol.eigenvalues[start];
        if (omega > kStickMergeTolerance && amp[f] != 0.0) raw.push_stick(omega, amp[f] * amp[f]);
      }
    }
    start = end;
  }
  return prune_sticks(merge_sticks(raw, kStickMergeTolerance), rel_floor);
}

/// Cavity-dressed static spectrum of a thermal molecular ensemble: each
/// |psi_k, 0> with Boltzmann weight above `weight_floor` is represented by its
/// dominant eigenstate. `initial_of[k]` receives that eigenstate (or -1).
struct ThermalStaticResult {
  Spectrum spectrum;
  std::vector<long> initial_of;
};

inline ThermalStaticResult thermal_stick_spectrum(const PolaritonSolution& sol, const Eigen::MatrixXd& eig_mu,
                                                  const MolecularModel& model, const ProductBasis& basis,
                                                  const ThermalWeights& weights, double weight_floor = 1e-6) {
  ThermalStaticResult out;
  out.initial_of.assign(model.n_states(), -1);
  std::vector<std::pair<std::size_t, double>> initial;
  for (std::size_t k = 0; k < model.n_states(); ++k) {
    if (weights.weights[k] < weight_floor) continue;
    const auto i = dominant_eigenstate(sol, basis.index(k, 0));
    out.initial_of[k] = static_cast<long>(i);
    initial.emplace_back(i, weights.weights[k]);
  }
  out.spectrum = static_stick_spectrum(sol, eig_mu, model, basis, initial);
  out.spectrum.metadata["temperature_K"] = weights.temperature;
  out.spectrum.metadata["weight_floor"] = weight_floor;
  return out;
}

// ---------------------------------------------------------------------------
// Time-dependent framework

/// (a + a^dagger) / sqrt(2 w_c) and its exact square on the truncated Fock space.
struct PhotonOperators {
  Eigen::SparseMatrix<double> q, q2;
};

inline PhotonOperators photon_operators(const ProductBasis& basis, double omega_c) {
  using T = Eigen::Triplet<double>;
  std::vector<T> tq, tq2;
  const double s = 1.0 / std::sqrt(2.0 * omega_c);
  const double s2 = 1.0 / (2.0 * omega_c);
  for (std::size_t k = 0; k < basis.n_mol; ++k) {
    for (int n = 0; n <= basis.n_fock_max; ++n) {
      const auto i = static_cast<int>(basis.index(k, n));
      tq2.emplace_back(i, i, s2 * (2.0 * n + 1.0));
      if (n + 1 <= basis.n_fock_max) {
        const auto j = static_cast<int>(basis.index(k, n + 1));
        tq.emplace_back(i, j, s * std::sqrt(n + 1.0));
        tq.emplace_back(j, i, s * std::sqrt(n + 1.0));
      }
      if (n + 2 <= basis.n_fock_max) {
        const auto j = static_cast<int>(basis.index(k, n + 2));
        const double v = s2 * std::sqrt((n + 1.0) * (n + 2.0));
        tq2.emplace_back(i, j, v);
        tq2.emplace_back(j, i, v);
      }
    }
  }
  const auto dim = static_cast<int>(basis.size());
  PhotonOperators ops;
  ops.q.resize(dim, dim);
  ops.q2.resize(dim, dim);
  ops.q.setFromTriplets(tq.begin(), tq.end());
  ops.q2.setFromTriplets(tq2.begin(), tq2.end());
  return ops;
}

/// (<q>, <q^2>) for Schroedinger-picture amplitudes on the product basis.
inline std::pair<double, double> photon_observables(const Eigen::VectorXcd& amplitudes, const PhotonOperators& ops) {
  const Eigen::VectorXcd qa = ops.q.cast<std::complex<double>>() * amplitudes;
  const Eigen::VectorXcd q2a = ops.q2.cast<std::complex<double>>() * amplitudes;
  return {amplitudes.dot(qa).real(), amplitudes.dot(q2a).real()};
}

inline std::pair<double, double> photon_observables(const Eigen::VectorXcd& amplitudes, const ProductBasis& basis,
                                                    const CavityParams& cav) {
  return photon_observables(amplitudes, photon_operators(basis, cav.omega_c));
}

/// TDSE in the interaction picture of H0 = diag(E_k + N w_c):
/// dC/dt = -i e^{i H0 t} (V + f(t) mu) e^{-i H0 t} C.
class QuantumPropagator {
public:
  using Sparse = Eigen::SparseMatrix<std::complex<double>>;

  QuantumPropagator(const MolecularModel& model, const CavityParams& cav, const KickPulse& pulse)
      : cav_(cav), pulse_(pulse), basis_(model.n_states(), cav.n_fock_max) {
    cav_.validate();
    pulse_.validate();
    const Eigen::MatrixXd h = assemble_hamiltonian(model, cav_, basis_);
    h0_.resize(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      h0_[static_cast<Eigen::Index>(i)] =
          model.energies[static_cast<Eigen::Index>(basis_.molecular(i))] + basis_.photons(i) * cav_.omega_c;
    // The dse diagonal stays in V.
    Eigen::MatrixXd v = h;
    v.diagonal() -= h0_;
    h_ = h.sparseView().cast<std::complex<double>>();
    v_ = v.sparseView().cast<std::complex<double>>();
    mu_ = product_dipole(model, basis_).sparseView().cast<std::complex<double>>();
    const auto dim = static_cast<Eigen::Index>(basis_.size());
    phase_.resize(dim);
    work_.resize(dim);
  }

  const ProductBasis& basis() const { return basis_; }
  const Eigen::VectorXd& bare_energies() const { return h0_; }

  void rhs(double t, const Eigen::VectorXcd& c, Eigen::VectorXcd& dc) {
    for (Eigen::Index i = 0; i < c.size(); ++i) phase_[i] = std::polar(1.0, h0_[i] * t);
    work_ = phase_.conjugate().cwiseProduct(c);
    Eigen::VectorXcd w = v_ * work_;
    const double f = pulse_(t);
    if (f != 0.0) w += f * (mu_ * work_);
    dc = std::complex<double>(0.0, -1.0) * phase_.cwiseProduct(w);
  }

  void advance(Eigen::VectorXcd& c, double& t, long steps, double dt) {
    auto f = [this](double tt, const Eigen::VectorXcd& y, Eigen::VectorXcd& d) { rhs(tt, y, d); };
    const double t0 = t;
    for (long i = 0; i < steps; ++i) rk4_.step(f, t0 + i * dt, dt, c);
    t = t0 + steps * dt;
  }

  Eigen::VectorXcd amplitudes(const Eigen::VectorXcd& c, double t) const {
    Eigen::VectorXcd a(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) a[i] = c[i] * std::polar(1.0, -h0_[i] * t);
    return a;
  }

  double dipole(const Eigen::VectorXcd& a) const { return a.dot(mu_ * a).real(); }
  double energy(const Eigen::VectorXcd& a) const { return a.dot(h_ * a).real(); }

private:
  CavityParams cav_;
  KickPulse pulse_;
  ProductBasis basis_;
  Eigen::VectorXd h0_;
  Sparse h_, v_, mu_;
  Eigen::VectorXcd phase_, work_;
  Rk4<Eigen::VectorXcd> rk4_;
};

/// Kick propagation from |psi_k, N>. Population series are labelled
/// "<state>_N<photons>".
inline Trajectory propagate_quantum(const MolecularModel& model, const CavityParams& cav, const KickPulse& pulse,
                                    std::size_t init_k, int init_n, const PropagationOptions& opt) {
  if (init_k >= model.n_states() || init_n < 0 || init_n > cav.n_fock_max)
    throw InvalidModelError("initial product state outside the basis");
  if (!(opt.t_end > 0) || !(opt.dt > 0) || opt.record_stride < 1)
    throw IntegrationError("t_end, dt and record_stride must be positive");
  check_time_step(opt.dt, fastest_frequency(model, cav.omega_c));

  QuantumPropagator prop(model, cav, pulse);
  const auto& basis = prop.basis();
  const PhotonOperators ops = photon_operators(basis, cav.omega_c);
  const Eigen::SparseMatrix<std::complex<double>> qc = ops.q.cast<std::complex<double>>();
  const Eigen::SparseMatrix<std::complex<double>> q2c = ops.q2.cast<std::complex<double>>();

  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  c[static_cast<Eigen::Index>(basis.index(init_k, init_n))] = 1.0;
  double t = 0.0;

  const long steps = std::lround(opt.t_end / opt.dt);
  const long n_rec = steps / opt.record_stride + 1;

  Trajectory tr;
  tr.light = LightModel::Quantum;
  tr.dt = opt.dt;
  tr.record_stride = opt.record_stride;
  tr.pulse_start = pulse.support_start();
  tr.pulse_end = pulse.support_end();
  for (std::size_t i = 0; i < basis.size(); ++i) tr.population_labels.push_back(basis.label(i, model));
  tr.populations.assign(basis.size(), {});
  tr.reserve(static_cast<std::size_t>(n_rec));

  auto record = [&]() {
    const Eigen::VectorXcd a = prop.amplitudes(c, t);
    tr.times.push_back(t);
    tr.dipole.push_back(prop.dipole(a));
    tr.q_expect.push_back(a.dot(qc * a).real());
    tr.q2_expect.push_back(a.dot(q2c * a).real());
    tr.energy.push_back(prop.energy(a));
    const double nrm = c.squaredNorm();
    tr.norm.push_back(nrm);
    for (Eigen::Index i = 0; i < c.size(); ++i) tr.populations[i].push_back(std::norm(c[i]));
    if (std::abs(nrm - 1.0) > opt.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << std::abs(nrm - 1.0) << " at t = " << t << " exceeds " << opt.norm_tolerance
         << "; reduce dt (currently " << opt.dt << ")";
      throw IntegrationError(os.str());
    }
  };

  record();
  for (long rec = 1; rec < n_rec; ++rec) {
    prop.advance(c, t, opt.record_stride, opt.dt);
    t = static_cast<double>(rec) * opt.record_stride * opt.dt;
    record();
  }
  return tr;
}

} // namespace twinpol
