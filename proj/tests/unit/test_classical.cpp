#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "twinpol/classical.hpp"
#include "twinpol/spectrum.hpp"

using namespace twinpol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MolecularModel lambda_model() { return build_three_level(0.0, 2e-3, 10e-3, 1.0, 1.0); }

CavityParams cavity(double g = 2e-4) {
  CavityParams c;
  c.g = g;
  c.include_dse = false;
  return c;
}

PropagationOptions short_run(double t_end = 65536.0) { return {t_end, 0.5, 4, 1e-6}; }

double strongest_in(const PeakSet& ps, double lo, double hi) {
  double best = 0.0, where = 0.0;
  for (auto i : peaks_in(ps, lo, hi))
    if (ps.peaks[i].height > best) {
      best = ps.peaks[i].height;
      where = ps.peaks[i].omega;
    }
  return where;
}

} // namespace

TEST_CASE("time step precondition", "[classical]") {
  const auto m = lambda_model();
  const double fastest = fastest_frequency(m, 1e-2);
  CHECK_THAT(fastest, WithinAbs(2e-2, 1e-15));
  CHECK_NOTHROW(check_time_step(4.9, fastest));
  CHECK_THROWS_AS(check_time_step(5.0, fastest), IntegrationError);
  PropagationOptions opt = short_run(1000.0);
  opt.dt = 6.0;
  CHECK_THROWS_AS(propagate_classical(m, cavity(), KickPulse{}, 0, opt), IntegrationError);
}

TEST_CASE("classical initial state must exist", "[classical]") {
  CHECK_THROWS_AS(propagate_classical(lambda_model(), cavity(), KickPulse{}, 3, short_run(100.0)), InvalidModelError);
}

TEST_CASE("classical propagation runs backwards to the start", "[classical]") {
  const auto m = lambda_model();
  ClassicalPropagator prop(m, cavity(), KickPulse{});
  ClassicalState s;
  s.coeffs = Eigen::VectorXcd::Zero(3);
  s.coeffs[0] = 1.0;
  const ClassicalState start = s;
  prop.advance(s, 4000, 0.5);
  CHECK(std::abs(s.q) > 1e-6);
  prop.advance(s, 4000, -0.5);
  CHECK_THAT(s.t, WithinAbs(0.0, 1e-12));
  CHECK((s.coeffs - start.coeffs).norm() < 1e-9);
  CHECK(std::abs(s.q) < 1e-9);
  CHECK(std::abs(s.p) < 1e-11);
}

TEST_CASE("classical norm and post-pulse energy are conserved", "[classical]") {
  const auto tr = propagate_classical(lambda_model(), cavity(), KickPulse{}, 0, short_run());
  CHECK(tr.max_norm_drift() < 1e-8);
  CHECK(tr.energy_drift() < 1e-7);
}

TEST_CASE("classical P line carries the dispersive shift", "[classical]") {
  // Linear response of psi_1 -> psi_2 dressed by a classical oscillator that
  // is not resonant with it: the pole moves by -2 w_c g^2 mu^2 / (w_c^2 - w12^2).
  const double wc = 1e-2, w12 = 8e-3, g = 2e-4;
  const double expected = w12 - 2.0 * wc * g * g / (wc * wc - w12 * w12);
  const auto tr = propagate_classical(lambda_model(), cavity(g), KickPulse{}, 1, short_run(524288.0));
  const auto spec = dipole_spectrum(tr);
  auto ps = detect_peaks(spec, 0.01);
  const auto idx = peaks_in(ps, w12 - 4e-4, w12 + 4e-4);
  REQUIRE(idx.size() == 1);
  CHECK_THAT(ps.peaks[idx[0]].omega, WithinAbs(expected, spec.bin_width));
}

TEST_CASE("uncoupled classical run shows the bare transition", "[classical]") {
  const auto tr = propagate_classical(lambda_model(), cavity(0.0), KickPulse{}, 0, short_run());
  const auto spec = dipole_spectrum(tr);
  const auto ps = detect_peaks(spec, 0.01);
  REQUIRE(ps.peaks.size() == 1);
  CHECK_THAT(ps.peaks[0].omega, WithinAbs(1e-2, spec.bin_width));
}

TEST_CASE("spectral power scales with the square of the kick", "[classical][spectra]") {
  KickPulse full, half;
  half.amplitude = 0.5 * full.amplitude;
  const auto a = dipole_spectrum(propagate_classical(lambda_model(), cavity(), full, 0, short_run()));
  const auto b = dipole_spectrum(propagate_classical(lambda_model(), cavity(), half, 0, short_run()));
  CHECK_THAT(integrated_intensity(a) / integrated_intensity(b), WithinRel(4.0, 0.02));
}

TEST_CASE("classical P run keeps populations fixed after the kick", "[classical]") {
  const auto tr = propagate_classical(lambda_model(), cavity(), KickPulse{}, 1, short_run());
  for (const std::string label : {"psi_1", "psi_2"}) {
    const auto& p = tr.population(label);
    const auto first = tr.first_post_pulse();
    const auto [lo, hi] = std::minmax_element(p.begin() + static_cast<long>(first), p.end());
    CHECK(*hi - *lo < 1e-4);
  }
}

TEST_CASE("classical R run exchanges population at the Rabi frequency", "[classical]") {
  const auto tr = propagate_classical(lambda_model(), cavity(), KickPulse{}, 0, short_run(131072.0));
  const auto& p2 = tr.population("psi_2");
  const auto& p0 = tr.population("psi_0");
  // p0 + p2 is conserved (psi_1 is never populated from psi_0).
  for (std::size_t i = 0; i < p2.size(); i += 97) CHECK_THAT(p0[i] + p2[i], WithinAbs(1.0, 1e-9));
  // Count zero crossings of p2 - mean after the pulse to estimate the frequency.
  const auto first = tr.first_post_pulse();
  double mean = 0.0;
  for (std::size_t i = first; i < p2.size(); ++i) mean += p2[i];
  mean /= static_cast<double>(p2.size() - first);
  std::vector<double> crossings;
  for (std::size_t i = first + 1; i < p2.size(); ++i)
    if ((p2[i - 1] - mean) * (p2[i] - mean) < 0) crossings.push_back(tr.times[i]);
  REQUIRE(crossings.size() > 4);
  const double period = 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  CHECK_THAT(2.0 * M_PI / period, WithinRel(2.0 * 2e-4, 0.05));
}

TEST_CASE("without a kick nothing moves", "[classical]") {
  KickPulse none;
  none.amplitude = 0.0;
  const auto tr = propagate_classical(lambda_model(), cavity(), none, 1, short_run(4096.0));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(std::abs(tr.q[i]) == 0.0);
    CHECK(tr.dipole[i] == 0.0);
  }
}

TEST_CASE("strongest R peak sits between the polariton pair", "[classical]") {
  const auto tr = propagate_classical(lambda_model(), cavity(), KickPulse{}, 0, short_run(262144.0));
  const auto spec = dipole_spectrum(tr);
  auto ps = detect_peaks(spec, 0.01);
  const double split = measure_splitting(ps, 9.6e-3, 10.4e-3, "R");
  CHECK_THAT(split, WithinRel(4e-4, 0.02));
  const double top = strongest_in(ps, 9.6e-3, 10.4e-3);
  CHECK(std::abs(top - 1e-2) < 3e-4);
}
