#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/FFT>

#include "twinpol/error.hpp"
#include "twinpol/trajectory.hpp"
#include "twinpol/units.hpp"

namespace twinpol {

enum class SpectrumKind { Continuous, Sticks };

/// Bookkeeping carried by each stick. Fields that do not apply stay empty or -1.
struct StickInfo {
  std::string label_i;
  std::string label_f;
  std::string mechanism; // polariton | twin | dark
  std::string branch;    // R | P
  int n0 = -1;
  int n_mol = -1;
  int side = 0; // +1 / -1 for the upper / lower member of a polariton doublet
};

/// Intensity versus frequency (hartree). Intensities are raw; exports scale
/// them to the global maximum.
struct Spectrum {
  SpectrumKind kind = SpectrumKind::Sticks;
  std::vector<double> omega;
  std::vector<double> intensity;
  std::vector<StickInfo> info; // parallel to omega for sticks, empty otherwise
  double bin_width = 0.0;      // continuous spectra only
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const { return omega.size(); }

  double max_intensity() const {
    return intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
  }

  double total_intensity() const { return std::accumulate(intensity.begin(), intensity.end(), 0.0); }

  void push_stick(double w, double inten, StickInfo si = {}) {
    omega.push_back(w);
    intensity.push_back(inten);
    info.push_back(std::move(si));
  }
};

// ---------------------------------------------------------------------------
// Stick utilities

/// Sorts sticks by frequency and merges those closer than `tol` to the first
/// member of their cluster. The merged stick sits at the intensity-weighted
/// centre and keeps the metadata of its strongest member.
inline Spectrum merge_sticks(const Spectrum& in, double tol = 1e-10) {
  if (in.kind != SpectrumKind::Sticks) throw GridMismatchError("merge_sticks needs a stick spectrum");
  std::vector<std::size_t> order(in.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return in.omega[a] < in.omega[b]; });
  Spectrum out;
  out.kind = SpectrumKind::Sticks;
  out.metadata = in.metadata;
  std::size_t i = 0;
  while (i < order.size()) {
    const double start = in.omega[order[i]];
    double sum = 0.0, moment = 0.0, best = -1.0;
    std::size_t keep = order[i];
    std::size_t j = i;
    for (; j < order.size() && in.omega[order[j]] - start <= tol; ++j) {
      const auto k = order[j];
      sum += in.intensity[k];
      moment += in.intensity[k] * in.omega[k];
      if (in.intensity[k] > best) {
        best = in.intensity[k];
        keep = k;
      }
    }
    const double centre = sum > 0 ? moment / sum : start;
    out.push_stick(centre, sum, in.info.empty() ? StickInfo{} : in.info[keep]);
    i = j;
  }
  return out;
}

/// Drops sticks weaker than `rel` times the strongest one.
inline Spectrum prune_sticks(const Spectrum& in, double rel) {
  const double cut = rel * in.max_intensity();
  Spectrum out;
  out.kind = in.kind;
  out.metadata = in.metadata;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in.intensity[i] > cut) out.push_stick(in.omega[i], in.intensity[i], in.info.empty() ? StickInfo{} : in.info[i]);
  return out;
}

/// Sticks with frequency inside [lo, hi].
inline Spectrum sticks_in(const Spectrum& in, double lo, double hi) {
  Spectrum out;
  out.kind = in.kind;
  out.metadata = in.metadata;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in.omega[i] >= lo && in.omega[i] <= hi)
      out.push_stick(in.omega[i], in.intensity[i], in.info.empty() ? StickInfo{} : in.info[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Fourier-transform spectrum

struct FftOptions {
  double damping_tau = 0.0; // 0 selects t_end / 8
  int pad_factor = 4;
};

/// I(w) = w^2 |F[(<mu(t)> - mu_pre) e^{-t/tau}](w)|^2 for w > 0. The FFT length
/// is the next power of two at or above pad_factor times the sample count.
inline Spectrum dipole_spectrum(const std::vector<double>& times, const std::vector<double>& dipole,
                                double pulse_start, const FftOptions& opt = {}) {
  const std::size_t n = times.size();
  if (n < 4 || dipole.size() != n) throw GridMismatchError("dipole series too short or mismatched with time grid");
  const double dt = times[1] - times[0];
  if (!(dt > 0)) throw GridMismatchError("time grid must be increasing");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * dt * std::max<double>(1.0, static_cast<double>(i)))
      throw GridMismatchError("time grid is not uniform");
  if (opt.pad_factor < 1) throw GridMismatchError("pad_factor must be >= 1");
  const double t_end = times.back() - times.front();
  const double tau = opt.damping_tau > 0 ? opt.damping_tau : t_end / 8.0;

  double base = 0.0;
  std::size_t n_pre = 0;
  for (std::size_t i = 0; i < n && times[i] < pulse_start; ++i, ++n_pre) base += dipole[i];
  base = n_pre > 0 ? base / static_cast<double>(n_pre) : dipole.front();

  std::size_t m = 1;
  while (m < static_cast<std::size_t>(opt.pad_factor) * n) m <<= 1;
  std::vector<double> x(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = (dipole[i] - base) * std::exp(-(times[i] - times.front()) / tau);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> f;
  fft.fwd(f, x);

  Spectrum s;
  s.kind = SpectrumKind::Continuous;
  s.bin_width = 2.0 * M_PI / (static_cast<double>(m) * dt);
  s.omega.reserve(m / 2);
  s.intensity.reserve(m / 2);
  for (std::size_t j = 1; j <= m / 2; ++j) {
    const double w = static_cast<double>(j) * s.bin_width;
    s.omega.push_back(w);
    s.intensity.push_back(w * w * std::norm(f[j] * dt));
  }
  s.metadata = {{"damping_tau", tau}, {"pad_factor", opt.pad_factor}, {"fft_length", m},
                {"bin_width", s.bin_width}, {"baseline", base}};
  return s;
}

inline Spectrum dipole_spectrum(const Trajectory& tr, const FftOptions& opt = {}) {
  return dipole_spectrum(tr.times, tr.dipole, tr.pulse_start, opt);
}

// ---------------------------------------------------------------------------
// Peaks

struct Peak {
  double omega = 0.0;
  double height = 0.0;
  std::string branch;
};

struct Splitting {
  std::size_t a = 0, b = 0; // indices into PeakSet::peaks
  double delta = 0.0;
  std::string branch;
};

struct PeakSet {
  std::vector<Peak> peaks;
  std::vector<Splitting> splittings;
  double bin_width = 0.0;
};

/// Local maxima above rel_threshold * global max, refined by a parabola through
/// the maximum and its neighbours. A flat top counts once, at its low-frequency
/// end, and only if the spectrum falls on both sides.
inline PeakSet detect_peaks(const Spectrum& s, double rel_threshold = 0.01) {
  if (s.kind != SpectrumKind::Continuous) throw GridMismatchError("detect_peaks needs a continuous spectrum");
  PeakSet ps;
  ps.bin_width = s.bin_width;
  const auto& y = s.intensity;
  const std::size_t n = y.size();
  const double top = s.max_intensity();
  if (n < 3 || !(top > 0)) return ps;
  const double cut = rel_threshold * top;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1]) || y[i] < cut) continue;
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) {
      i = j;
      continue;
    }
    double centre = s.omega[i], height = y[i];
    if (j == i) {
      const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
      if (denom < 0) {
        const double d = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        centre = s.omega[i] + d * (s.omega[i + 1] - s.omega[i]);
        height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d;
      }
    }
    ps.peaks.push_back(Peak{centre, height, ""});
    i = j;
  }
  return ps;
}

inline std::vector<std::size_t> peaks_in(const PeakSet& ps, double lo, double hi) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ps.peaks.size(); ++i)
    if (ps.peaks[i].omega >= lo && ps.peaks[i].omega <= hi) idx.push_back(i);
  return idx;
}

/// |w_a - w_b| for the two peaks inside [lo, hi]; the pair is recorded in
/// `ps` under `branch`.
inline double measure_splitting(PeakSet& ps, double lo, double hi, const std::string& branch = "") {
  const auto idx = peaks_in(ps, lo, hi);
  if (idx.size() != 2) {
    std::ostringstream os;
    os << "expected 2 peaks in [" << lo << ", " << hi << "], found " << idx.size();
    if (!idx.empty()) {
      os << ":";
      for (auto i : idx) os << ' ' << ps.peaks[i].omega;
    }
    throw AmbiguityError(os.str());
  }
  const double d = std::abs(ps.peaks[idx[1]].omega - ps.peaks[idx[0]].omega);
  ps.peaks[idx[0]].branch = ps.peaks[idx[1]].branch = branch;
  ps.splittings.push_back(Splitting{idx[0], idx[1], d, branch});
  return d;
}

// ---------------------------------------------------------------------------
// Averaging and broadening

inline Spectrum thermal_average_spectra(const std::vector<std::pair<Spectrum, double>>& runs) {
  if (runs.empty()) throw GridMismatchError("no spectra to average");
  const auto kind = runs.front().first.kind;
  for (const auto& [s, w] : runs) {
    if (s.kind != kind) throw GridMismatchError("cannot average stick and continuous spectra together");
    if (!(w >= 0)) throw GridMismatchError("negative thermal weight");
  }
  if (kind == SpectrumKind::Sticks) {
    Spectrum all;
    all.kind = SpectrumKind::Sticks;
    for (const auto& [s, w] : runs)
      for (std::size_t i = 0; i < s.size(); ++i)
        all.push_stick(s.omega[i], w * s.intensity[i], s.info.empty() ? StickInfo{} : s.info[i]);
    return merge_sticks(all);
  }
  Spectrum out = runs.front().first;
  std::fill(out.intensity.begin(), out.intensity.end(), 0.0);
  for (const auto& [s, w] : runs) {
    if (s.size() != out.size()) throw GridMismatchError("spectra have different grid lengths");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(s.omega[i] - out.omega[i]) > 1e-12 * std::max(1.0, std::abs(out.omega[i])))
        throw GridMismatchError("spectra are on different frequency grids");
      out.intensity[i] += w * s.intensity[i];
    }
  }
  return out;
}

enum class Lineshape { Lorentzian, Gaussian };

/// Sum of unit-area lines (half width at half maximum `width`) scaled by the
/// stick intensities, on a grid of spacing width/20 spanning the sticks +-10
/// widths. Each line is normalized on the grid itself, so the total intensity
/// survives the truncated tails.
inline Spectrum broaden_sticks(const Spectrum& sticks, Lineshape shape, double width) {
  if (!(width > 0)) throw GridMismatchError("broadening width must be positive");
  if (sticks.size() == 0) throw GridMismatchError("no sticks to broaden");
  const auto [lo_it, hi_it] = std::minmax_element(sticks.omega.begin(), sticks.omega.end());
  const double lo = *lo_it - 10.0 * width;
  const double hi = *hi_it + 10.0 * width;
  const double h = width / 20.0;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;

  Spectrum out;
  out.kind = SpectrumKind::Continuous;
  out.bin_width = h;
  out.metadata = sticks.metadata;
  out.metadata["broadening"] = {{"lineshape", shape == Lineshape::Lorentzian ? "lorentzian" : "gaussian"},
                                {"hwhm", width}};
  out.omega.resize(n);
  out.intensity.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.omega[i] = lo + static_cast<double>(i) * h;

  const double sigma = width / std::sqrt(2.0 * std::log(2.0));
  std::vector<double> line(n);
  for (std::size_t s = 0; s < sticks.size(); ++s) {
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = out.omega[i] - sticks.omega[s];
      line[i] = shape == Lineshape::Lorentzian ? width / (M_PI * (x * x + width * width))
                                               : std::exp(-0.5 * x * x / (sigma * sigma));
      area += line[i] * h;
    }
    for (std::size_t i = 0; i < n; ++i) out.intensity[i] += sticks.intensity[s] * line[i] / area;
  }
  return out;
}

/// Trapezoid integral of a continuous spectrum, or the stick sum.
inline double integrated_intensity(const Spectrum& s) {
  if (s.kind == SpectrumKind::Sticks) return s.total_intensity();
  double acc = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    acc += 0.5 * (s.intensity[i] + s.intensity[i - 1]) * (s.omega[i] - s.omega[i - 1]);
  return acc;
}

// ---------------------------------------------------------------------------
// Export

inline void write_spectrum_csv(const Spectrum& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const double top = s.max_intensity();
  const double scale = top > 0 ? 1.0 / top : 1.0;
  if (s.kind == SpectrumKind::Continuous) {
    out << "omega_au,omega_cm1,intensity\n";
    for (std::size_t i = 0; i < s.size(); ++i)
      out << s.omega[i] << ',' << units::hartree_to_cm(s.omega[i]) << ',' << s.intensity[i] * scale << '\n';
    return;
  }
  out << "omega_cm1,omega_au,intensity,label_i,label_f,n_mol,n0,branch,mechanism\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const StickInfo si = s.info.empty() ? StickInfo{} : s.info[i];
    out << units::hartree_to_cm(s.omega[i]) << ',' << s.omega[i] << ',' << s.intensity[i] * scale << ','
        << si.label_i << ',' << si.label_f << ',';
    if (si.n_mol >= 0) out << si.n_mol;
    out << ',';
    if (si.n0 >= 0) out << si.n0;
    out << ',' << si.branch << ',' << si.mechanism << '\n';
  }
}

inline nlohmann::json to_json(const PeakSet& ps) {
  nlohmann::json j;
  j["bin_width"] = ps.bin_width;
  auto peaks = nlohmann::json::array();
  for (const auto& p : ps.peaks)
    peaks.push_back({{"omega_au", p.omega}, {"omega_cm1", units::hartree_to_cm(p.omega)}, {"height", p.height},
                     {"branch", p.branch}});
  j["peaks"] = peaks;
  auto spl = nlohmann::json::array();
  for (const auto& s : ps.splittings)
    spl.push_back({{"pair", {s.a, s.b}}, {"delta_au", s.delta}, {"delta_cm1", units::hartree_to_cm(s.delta)},
                   {"branch", s.branch}});
  j["splittings"] = spl;
  return j;
}

} // namespace twinpol
