#pragma once

namespace scr1d::constants {

// Exact SI values (2019 redefinition) where the SI defines them.
inline constexpr double q = 1.602176634e-19;      // elementary charge [C]
inline constexpr double k_boltzmann = 1.380649e-23;  // [J/K]
inline constexpr double eps0 = 8.8541878128e-12;  // vacuum permittivity [F/m]

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double two_over_sqrt_pi = 1.12837916709551257390;

}  // namespace scr1d::constants
