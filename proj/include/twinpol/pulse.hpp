#pragma once

#include <cmath>

#include "twinpol/error.hpp"

namespace twinpol {

/// Gaussian kick f(t) = A exp(-(t - t0)^2 / (2 sigma^2)).
struct KickPulse {
  double amplitude = 1e-4;
  double t0 = 25.0;
  double sigma = 5.0;

  double operator()(double t) const {
    const double x = (t - t0) / sigma;
    return amplitude * std::exp(-0.5 * x * x);
  }

  /// First time after which |f(t)| stays below `floor`.
  double support_end(double floor = 1e-15) const {
    if (std::abs(amplitude) <= floor) return 0.0;
    return t0 + sigma * std::sqrt(2.0 * std::log(std::abs(amplitude) / floor));
  }

  /// Mirror of support_end about t0.
  double support_start(double floor = 1e-15) const { return 2.0 * t0 - support_end(floor); }

  void validate() const {
    if (!(sigma > 0)) throw InvalidModelError("pulse width sigma must be positive");
    if (!std::isfinite(amplitude) || !std::isfinite(t0)) throw InvalidModelError("pulse parameters must be finite");
  }
};

struct CavityParams {
  double omega_c = 1e-2;
  double g = 2e-4;
  bool include_dse = true;
  int n_fock_max = 2;

  /// Prefactor of q in the classical dipole coupling, g sqrt(2 omega_c).
  double field_coupling() const { return g * std::sqrt(2.0 * omega_c); }
  double dse_prefactor() const { return include_dse ? g * g / omega_c : 0.0; }

  void validate() const {
    if (!(omega_c > 0)) throw InvalidModelError("omega_c must be positive");
    if (!(g >= 0)) throw InvalidModelError("coupling g must be non-negative");
    if (n_fock_max < 1) throw InvalidModelError("n_fock_max must be at least 1");
  }
};

} // namespace twinpol
