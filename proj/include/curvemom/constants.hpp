#pragma once

namespace curvemom {

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kEta0 = 376.730313668;              // free-space impedance, ohms
inline constexpr double kPi = 3.14159265358979323846;

inline double wavelength(double freq_hz) { return kSpeedOfLight / freq_hz; }
inline double wavenumber(double freq_hz) { return 2.0 * kPi * freq_hz / kSpeedOfLight; }

}  // namespace curvemom
