#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>
#include <vector>

#include "twinpol/error.hpp"

namespace twinpol {

struct PropagationOptions {
  double t_end = 0.0;
  double dt = 0.0;
  int record_stride = 4;
  double norm_tolerance = 1e-6;
};

enum class LightModel { Classical, Quantum };

/// Time series produced by either propagator. Every series has one entry per
/// recorded time. Classical runs fill q/p; quantum runs fill q_expect/q2_expect.
struct Trajectory {
  LightModel light = LightModel::Classical;
  double dt = 0.0;
  int record_stride = 1;
  double pulse_start = 0.0;
  double pulse_end = 0.0;

  std::vector<double> times;
  std::vector<double> dipole;
  std::vector<std::string> population_labels;
  std::vector<std::vector<double>> populations; // [state][sample]
  std::vector<double> q, p;
  std::vector<double> q_expect, q2_expect;
  std::vector<double> energy;
  std::vector<double> norm;

  std::size_t size() const { return times.size(); }
  double sample_spacing() const { return dt * record_stride; }

  /// Index of the first sample at or after the pulse support end.
  std::size_t first_post_pulse() const {
    return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), pulse_end) - times.begin());
  }

  double max_norm_drift() const {
    double d = 0.0;
    for (double n : norm) d = std::max(d, std::abs(n - 1.0));
    return d;
  }

  /// max |E(t) - E_ref| / |E_ref| after the pulse, E_ref the first post-pulse
  /// sample.
  double energy_drift() const {
    const auto i0 = first_post_pulse();
    if (i0 >= energy.size()) return 0.0;
    const double ref = energy[i0];
    double d = 0.0;
    for (std::size_t i = i0; i < energy.size(); ++i) d = std::max(d, std::abs(energy[i] - ref));
    return ref == 0.0 ? d : d / std::abs(ref);
  }

  const std::vector<double>& population(const std::string& label) const {
    for (std::size_t i = 0; i < population_labels.size(); ++i)
      if (population_labels[i] == label) return populations[i];
    throw DimensionError("trajectory has no population series '" + label + "'");
  }

  void reserve(std::size_t n) {
    times.reserve(n);
    dipole.reserve(n);
    energy.reserve(n);
    norm.reserve(n);
    for (auto& s : populations) s.reserve(n);
    if (light == LightModel::Classical) {
      q.reserve(n);
      p.reserve(n);
    } else {
      q_expect.reserve(n);
      q2_expect.reserve(n);
    }
  }

  void check_consistent() const {
    const auto n = times.size();
    auto ok = [n](const std::vector<double>& s) { return s.empty() || s.size() == n; };
    bool good = ok(dipole) && ok(q) && ok(p) && ok(q_expect) && ok(q2_expect) && ok(energy) && ok(norm);
    for (const auto& s : populations) good = good && s.size() == n;
    if (!good) throw DimensionError("trajectory series lengths differ from the time grid");
  }
};

inline void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
  tr.check_consistent();
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const bool classical = tr.light == LightModel::Classical;
  out << "t,mu";
  if (classical)
    out << ",q,p";
  else
    out << ",q_expect,q2_expect";
  out << ",energy,norm";
  for (const auto& l : tr.population_labels) out << ",p_" << l;
  out << '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << tr.times[i] << ',' << tr.dipole[i];
    if (classical)
      out << ',' << tr.q[i] << ',' << tr.p[i];
    else
      out << ',' << tr.q_expect[i] << ',' << tr.q2_expect[i];
    out << ',' << tr.energy[i] << ',' << tr.norm[i];
    for (const auto& s : tr.populations) out << ',' << s[i];
    out << '\n';
  }
}

} // namespace twinpol
