#pragma once

// Physical constants (CODATA 2018), fixed for bit-reproducible output.
namespace qlink::constants {

inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double epsilon0 = 8.8541878128e-12;           // F/m
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

} // namespace qlink::constants
