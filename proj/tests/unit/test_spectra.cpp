#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "twinpol/io.hpp"
#include "twinpol/spectrum.hpp"

using namespace twinpol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Series {
  std::vector<double> t, mu;
};

Series cosines(const std::vector<std::pair<double, double>>& lines, double t_end = 20000.0, double dt = 1.0) {
  Series s;
  for (double t = 0.0; t <= t_end + 1e-9; t += dt) {
    double v = 0.0;
    for (const auto& [w, a] : lines) v += a * std::cos(w * t);
    s.t.push_back(t);
    s.mu.push_back(v);
  }
  return s;
}

Spectrum continuous(std::vector<double> y) {
  Spectrum s;
  s.kind = SpectrumKind::Continuous;
  s.bin_width = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) s.omega.push_back(static_cast<double>(i));
  s.intensity = std::move(y);
  return s;
}

// Half width at half maximum around the global maximum, by linear interpolation.
double hwhm(const Spectrum& s) {
  const auto top = static_cast<std::size_t>(
      std::max_element(s.intensity.begin(), s.intensity.end()) - s.intensity.begin());
  const double half = 0.5 * s.intensity[top];
  std::size_t r = top;
  while (s.intensity[r + 1] > half) ++r;
  std::size_t l = top;
  while (s.intensity[l - 1] > half) --l;
  auto cross = [&](std::size_t a, std::size_t b) {
    return s.omega[a] + (half - s.intensity[a]) / (s.intensity[b] - s.intensity[a]) * (s.omega[b] - s.omega[a]);
  };
  return 0.5 * (cross(r, r + 1) - cross(l, l - 1));
}

} // namespace

TEST_CASE("damped cosine gives a Lorentzian of HWHM 1/tau", "[spectra]") {
  const double w0 = 0.05;
  const auto s = cosines({{w0, 1.0}});
  const auto spec = dipole_spectrum(s.t, s.mu, -1.0);
  const double tau = 20000.0 / 8.0;
  const auto ps = detect_peaks(spec, 0.01);
  REQUIRE(ps.peaks.size() == 1);
  CHECK_THAT(ps.peaks[0].omega, WithinAbs(w0, spec.bin_width));
  CHECK_THAT(hwhm(spec), WithinRel(1.0 / tau, 0.05));
  CHECK_THAT(spec.bin_width, WithinRel(2.0 * M_PI / (131072.0 * 1.0), 1e-12));
}

TEST_CASE("two cosines give two peaks and their splitting", "[spectra]") {
  // 25 half widths apart, so neither line pulls the other by a bin.
  const auto s = cosines({{0.050, 1.0}, {0.060, 0.5}});
  const auto spec = dipole_spectrum(s.t, s.mu, -1.0);
  auto ps = detect_peaks(spec, 0.01);
  const double d = measure_splitting(ps, 0.045, 0.065, "R");
  CHECK_THAT(d, WithinAbs(0.010, spec.bin_width));
  REQUIRE(ps.splittings.size() == 1);
  CHECK(ps.peaks[ps.splittings[0].a].branch == "R");
  CHECK_THROWS_AS(measure_splitting(ps, 0.049, 0.051), AmbiguityError);
  const auto j = to_json(ps);
  CHECK(j["bin_width"] == spec.bin_width);
  CHECK(j["splittings"].size() == 1);
}

TEST_CASE("three peaks in a window are ambiguous", "[spectra]") {
  const auto s = cosines({{0.050, 1.0}, {0.052, 1.0}, {0.054, 1.0}});
  auto ps = detect_peaks(dipole_spectrum(s.t, s.mu, -1.0), 0.01);
  CHECK_THROWS_AS(measure_splitting(ps, 0.045, 0.06), AmbiguityError);
}

TEST_CASE("pre-kick baseline is removed", "[spectra]") {
  Series a, b;
  for (double t = 0.0; t <= 8000.0; t += 1.0) {
    const double sig = t < 100.0 ? 0.0 : std::sin(0.05 * (t - 100.0));
    a.t.push_back(t);
    b.t.push_back(t);
    a.mu.push_back(sig);
    b.mu.push_back(0.3 + sig);
  }
  const auto sa = dipole_spectrum(a.t, a.mu, 100.0);
  const auto sb = dipole_spectrum(b.t, b.mu, 100.0);
  CHECK(sb.metadata["baseline"].get<double>() == Catch::Approx(0.3));
  for (std::size_t i = 0; i < sa.size(); i += 37) CHECK_THAT(sb.intensity[i], WithinAbs(sa.intensity[i], 1e-9));
}

TEST_CASE("FFT input checks", "[spectra]") {
  CHECK_THROWS_AS(dipole_spectrum({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0}, 0.0), GridMismatchError);
  CHECK_THROWS_AS(dipole_spectrum({0.0, 1.0, 2.5, 3.0, 4.0}, {0.0, 1.0, 0.0, 1.0, 0.0}, 0.0), GridMismatchError);
}

TEST_CASE("peak detection on plateaus and edges", "[spectra]") {
  CHECK(detect_peaks(continuous({0, 1, 2, 2, 1, 0})).peaks.size() == 1);
  CHECK(detect_peaks(continuous({0, 1, 2, 2})).peaks.empty());
  CHECK(detect_peaks(continuous({0, 1, 3, 1, 0, 2, 0})).peaks.size() == 2);
  // The parabola through (1,1), (2,3), (3,1) peaks at 2.
  CHECK_THAT(detect_peaks(continuous({0, 1, 3, 1, 0})).peaks[0].omega, WithinAbs(2.0, 1e-15));
  // Threshold relative to the global maximum.
  CHECK(detect_peaks(continuous({0, 100, 0, 0.5, 0}), 0.01).peaks.size() == 1);
}

TEST_CASE("stick merging keeps the strongest member's label", "[spectra]") {
  Spectrum s;
  s.push_stick(1.0, 1.0, StickInfo{"a", "b", "", "", -1, -1, 0});
  s.push_stick(1.0 + 5e-11, 3.0, StickInfo{"c", "d", "", "", -1, -1, 0});
  s.push_stick(2.0, 1.0, StickInfo{"e", "f", "", "", -1, -1, 0});
  const auto m = merge_sticks(s);
  REQUIRE(m.size() == 2);
  CHECK_THAT(m.omega[0], WithinAbs(1.0 + 0.75 * 5e-11, 1e-15));
  CHECK(m.intensity[0] == 4.0);
  CHECK(m.info[0].label_i == "c");
  CHECK(m.info[1].label_i == "e");
}

TEST_CASE("thermal averaging", "[spectra]") {
  Spectrum s;
  s.push_stick(1.0, 2.0);
  s.push_stick(3.0, 1.0);
  const auto one = thermal_average_spectra({{s, 1.0}});
  CHECK(one.omega == s.omega);
  CHECK(one.intensity == s.intensity);
  const auto two = thermal_average_spectra({{s, 0.5}, {s, 0.5}});
  CHECK(two.omega == s.omega);
  CHECK(two.intensity == s.intensity);

  const auto c = continuous({1, 2, 3});
  const auto avg = thermal_average_spectra({{c, 0.5}, {c, 0.5}});
  CHECK(avg.intensity == c.intensity);
  auto shifted = c;
  shifted.omega[1] += 0.5;
  CHECK_THROWS_AS(thermal_average_spectra({{c, 0.5}, {shifted, 0.5}}), GridMismatchError);
  CHECK_THROWS_AS(thermal_average_spectra({{c, 0.5}, {s, 0.5}}), GridMismatchError);
}

TEST_CASE("broadening preserves the integrated intensity", "[spectra]") {
  Spectrum s;
  s.push_stick(0.010, 1.0);
  s.push_stick(0.011, 0.4);
  for (auto shape : {Lineshape::Lorentzian, Lineshape::Gaussian}) {
    const auto b = broaden_sticks(s, shape, 1e-4);
    CHECK_THAT(integrated_intensity(b), WithinRel(1.4, 1e-3));
  }
  CHECK_THROWS_AS(broaden_sticks(s, Lineshape::Lorentzian, 0.0), GridMismatchError);
}

TEST_CASE("broadened sticks are recovered by peak detection", "[spectra]") {
  const double w = 1e-4;
  Spectrum s;
  s.push_stick(0.0100, 1.0);
  s.push_stick(0.0100 + 3.5 * w, 0.6);
  s.push_stick(0.0110, 0.3);
  for (auto shape : {Lineshape::Lorentzian, Lineshape::Gaussian}) {
    const auto ps = detect_peaks(broaden_sticks(s, shape, w), 0.01);
    REQUIRE(ps.peaks.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ps.peaks[i].omega - s.omega[i]) < 0.1 * w);
  }
}

TEST_CASE("sticks closer than half a width merge into one maximum", "[spectra]") {
  const double w = 1e-4;
  Spectrum s;
  s.push_stick(0.0100, 1.0);
  s.push_stick(0.0100 + 0.4 * w, 1.0);
  const auto ps = detect_peaks(broaden_sticks(s, Lineshape::Lorentzian, w), 0.01);
  REQUIRE(ps.peaks.size() == 1);
  CHECK_THAT(ps.peaks[0].omega, WithinAbs(0.0100 + 0.2 * w, 0.01 * w));
}

TEST_CASE("spectrum CSV layout", "[spectra][io]") {
  const auto dir = std::filesystem::temp_directory_path() / "twinpol_csv_test";
  std::filesystem::create_directories(dir);
  Spectrum s;
  s.push_stick(1e-2, 2.0, StickInfo{"psi_0_N0", "psi_2_N0", "polariton", "R", 1, 2, 1});
  write_spectrum_csv(s, (dir / "s.csv").string());
  std::ifstream in(dir / "s.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "omega_cm1,omega_au,intensity,label_i,label_f,n_mol,n0,branch,mechanism");
  CHECK(row.find(",1,psi_0_N0,psi_2_N0,2,1,R,polariton") != std::string::npos);
  const auto j = spectrum_json(s);
  CHECK(j["intensity"][0] == 1.0);
  CHECK(j["intensity_scale"] == 2.0);
  std::filesystem::remove_all(dir);
}
