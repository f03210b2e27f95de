#pragma once

// Atomic units are used everywhere inside the library; these helpers convert
// at the I/O boundary only.

namespace twinpol::units {

inline constexpr double kCmPerHartree = 219474.6313632;
inline constexpr double kBoltzmannHartreePerKelvin = 3.166811563e-6;

constexpr double hartree_to_cm(double e) { return e * kCmPerHartree; }
constexpr double cm_to_hartree(double e) { return e / kCmPerHartree; }

} // namespace twinpol::units
