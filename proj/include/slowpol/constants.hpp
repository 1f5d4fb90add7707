#ifndef SLOWPOL_CONSTANTS_HPP
#define SLOWPOL_CONSTANTS_HPP

namespace slowpol {

// CODATA 2018 values, SI units. Fixed at compile time; never mutated.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;  // reduced Planck constant (J s)
    double eps0 = 8.8541878128e-12; // vacuum permittivity (F/m)
    double c = 2.99792458e8;        // speed of light (m/s), exact
};

inline constexpr PhysicalConstants constants{};

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace slowpol

#endif // SLOWPOL_CONSTANTS_HPP
