#pragma once

#include <utility>

namespace twinpol {

/// Classic fixed-step fourth-order Runge-Kutta. `State` must support
/// `a + s * b` arithmetic (Eigen vectors do); scratch buffers are reused
/// between steps.
template <class State>
class Rk4 {
public:
  /// `rhs(t, y, dydt)` writes the derivative into `dydt`.
  template <class Rhs>
  void step(Rhs&& rhs, double t, double dt, State& y) {
    if (k1_.size() != y.size()) {
      k1_.resize(y.size());
      k2_.resize(y.size());
      k3_.resize(y.size());
      k4_.resize(y.size());
      tmp_.resize(y.size());
    }
    const double h2 = 0.5 * dt;
    rhs(t, y, k1_);
    tmp_ = y + h2 * k1_;
    rhs(t + h2, tmp_, k2_);
    tmp_ = y + h2 * k2_;
    rhs(t + h2, tmp_, k3_);
    tmp_ = y + dt * k3_;
    rhs(t + dt, tmp_, k4_);
    y += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

private:
  State k1_, k2_, k3_, k4_, tmp_;
};

} // namespace twinpol
