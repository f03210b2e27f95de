#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>

#include <Eigen/Dense>

#include "twinpol/error.hpp"
#include "twinpol/model.hpp"
#include "twinpol/pulse.hpp"
#include "twinpol/rk4.hpp"
#include "twinpol/trajectory.hpp"

namespace twinpol {

/// Molecule in the interaction picture, C_k = a_k e^{i E_k t}, plus the
/// classical mode coordinates.
struct ClassicalState {
  Eigen::VectorXcd coeffs;
  double q = 0.0;
  double p = 0.0;
  double t = 0.0;

  /// Schroedinger-picture amplitudes a_k = C_k e^{-i E_k t}.
  Eigen::VectorXcd amplitudes(const Eigen::VectorXd& energies) const {
    Eigen::VectorXcd a(coeffs.size());
    for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = coeffs[k] * std::polar(1.0, -energies[k] * t);
    return a;
  }
};

/// Largest frequency the integrator has to follow: max|E_k - E_l| + omega_c.
inline double fastest_frequency(const MolecularModel& model, double omega_c) {
  return (model.energies.maxCoeff() - model.energies.minCoeff()) + omega_c;
}

inline void check_time_step(double dt, double fastest) {
  if (!(std::abs(dt) * fastest < 0.1)) {
    std::ostringstream os;
    os << "time step " << dt << " does not resolve the fastest phase (dt * omega_max = " << std::abs(dt) * fastest
       << ", must be < 0.1)";
    throw IntegrationError(os.str());
  }
}

inline double classical_total_energy(const ClassicalState& s, const MolecularModel& model, const CavityParams& cav,
                                     const Eigen::MatrixXd& mu2) {
  const Eigen::VectorXcd a = s.amplitudes(model.energies);
  const double e_mol = (a.cwiseAbs2().array() * model.energies.array()).sum();
  const double mu = (a.adjoint() * model.dipole * a)(0, 0).real();
  double e = e_mol + cav.field_coupling() * s.q * mu + 0.5 * (s.p * s.p + cav.omega_c * cav.omega_c * s.q * s.q);
  if (cav.include_dse) e += cav.dse_prefactor() * (a.adjoint() * mu2 * a)(0, 0).real();
  return e;
}

inline double classical_total_energy(const ClassicalState& s, const MolecularModel& model, const CavityParams& cav) {
  return classical_total_energy(s, model, cav, mu_squared_matrix(model));
}

/// Ehrenfest propagator for the molecular coefficients coupled to a classical
/// mode. The packed RK4 state is (C_0..C_{n-1}, q, p).
class ClassicalPropagator {
public:
  ClassicalPropagator(const MolecularModel& model, const CavityParams& cav, const KickPulse& pulse)
      : model_(model), cav_(cav), pulse_(pulse), mu2_(mu_squared_matrix(model)) {
    cav_.validate();
    pulse_.validate();
    n_ = static_cast<Eigen::Index>(model.n_states());
    phase_.resize(n_);
    work_.resize(n_);
  }

  Eigen::VectorXcd pack(const ClassicalState& s) const {
    Eigen::VectorXcd y(n_ + 2);
    y.head(n_) = s.coeffs;
    y[n_] = s.q;
    y[n_ + 1] = s.p;
    return y;
  }

  ClassicalState unpack(const Eigen::VectorXcd& y, double t) const {
    return ClassicalState{y.head(n_), y[n_].real(), y[n_ + 1].real(), t};
  }

  void rhs(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    for (Eigen::Index k = 0; k < n_; ++k) phase_[k] = std::polar(1.0, model_.energies[k] * t);
    // a = conj(phase) * C
    work_ = phase_.conjugate().cwiseProduct(y.head(n_));
    const double q = y[n_].real();
    const double p = y[n_ + 1].real();
    const double drive = cav_.field_coupling() * q + pulse_(t);
    Eigen::VectorXcd wa = drive * (model_.dipole * work_);
    if (cav_.include_dse) wa += cav_.dse_prefactor() * (mu2_ * work_);
    const double mu = work_.dot(model_.dipole * work_).real();
    dy.resize(y.size());
    dy.head(n_) = std::complex<double>(0.0, -1.0) * phase_.cwiseProduct(wa);
    dy[n_] = p;
    dy[n_ + 1] = -cav_.omega_c * cav_.omega_c * q - cav_.field_coupling() * mu;
  }

  /// Advances `s` by `steps` RK4 steps of size dt (dt may be negative).
  void advance(ClassicalState& s, long steps, double dt) {
    Eigen::VectorXcd y = pack(s);
    double t = s.t;
    auto f = [this](double tt, const Eigen::VectorXcd& yy, Eigen::VectorXcd& d) { rhs(tt, yy, d); };
    for (long i = 0; i < steps; ++i) {
      rk4_.step(f, t, dt, y);
      t = s.t + (i + 1) * dt;
    }
    s = unpack(y, t);
  }

  double dipole(const ClassicalState& s) const {
    const Eigen::VectorXcd a = s.amplitudes(model_.energies);
    return a.dot(model_.dipole * a).real();
  }

private:
  const MolecularModel& model_;
  CavityParams cav_;
  KickPulse pulse_;
  Eigen::MatrixXd mu2_;
  Eigen::Index n_ = 0;
  Eigen::VectorXcd phase_, work_;
  Rk4<Eigen::VectorXcd> rk4_;
};

inline Trajectory propagate_classical(const MolecularModel& model, const CavityParams& cav, const KickPulse& pulse,
                                      std::size_t init_state, const PropagationOptions& opt) {
  if (init_state >= model.n_states())
    throw InvalidModelError("initial state index " + std::to_string(init_state) + " outside the model");
  if (!(opt.t_end > 0) || !(opt.dt > 0) || opt.record_stride < 1)
    throw IntegrationError("t_end, dt and record_stride must be positive");
  check_time_step(opt.dt, fastest_frequency(model, cav.omega_c));

  ClassicalPropagator prop(model, cav, pulse);
  const Eigen::MatrixXd mu2 = mu_squared_matrix(model);
  ClassicalState s;
  s.coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model.n_states()));
  s.coeffs[static_cast<Eigen::Index>(init_state)] = 1.0;

  const long steps = std::lround(opt.t_end / opt.dt);
  const long n_rec = steps / opt.record_stride + 1;

  Trajectory tr;
  tr.light = LightModel::Classical;
  tr.dt = opt.dt;
  tr.record_stride = opt.record_stride;
  tr.pulse_start = pulse.support_start();
  tr.pulse_end = pulse.support_end();
  for (const auto& l : model.labels) tr.population_labels.push_back(l.name());
  tr.populations.assign(model.n_states(), {});
  tr.reserve(static_cast<std::size_t>(n_rec));

  auto record = [&](const ClassicalState& st) {
    const Eigen::VectorXcd a = st.amplitudes(model.energies);
    tr.times.push_back(st.t);
    tr.dipole.push_back(a.dot(model.dipole * a).real());
    tr.q.push_back(st.q);
    tr.p.push_back(st.p);
    tr.energy.push_back(classical_total_energy(st, model, cav, mu2));
    const double nrm = st.coeffs.squaredNorm();
    tr.norm.push_back(nrm);
    for (Eigen::Index k = 0; k < a.size(); ++k) tr.populations[k].push_back(std::norm(st.coeffs[k]));
    if (std::abs(nrm - 1.0) > opt.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << std::abs(nrm - 1.0) << " at t = " << st.t << " exceeds " << opt.norm_tolerance
         << "; reduce dt (currently " << opt.dt << ")";
      throw IntegrationError(os.str());
    }
  };

  record(s);
  for (long rec = 1; rec < n_rec; ++rec) {
    prop.advance(s, opt.record_stride, opt.dt);
    s.t = static_cast<double>(rec) * opt.record_stride * opt.dt;
    record(s);
  }
  return tr;
}

} // namespace twinpol
