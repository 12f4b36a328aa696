#pragma once

namespace cqlad::constants {

// CODATA 2018 (exact by SI definition)
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C

// Reduced flux quantum hbar / 2e, the scale in E_J cos(phi / phi0) and L = phi0^2 / E_J.
inline constexpr double phi0 = hbar / (2.0 * elementary_charge);  // Wb

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace cqlad::constants
