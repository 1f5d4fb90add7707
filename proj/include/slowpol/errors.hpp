#ifndef SLOWPOL_ERRORS_HPP
#define SLOWPOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slowpol {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Denominator of the polarizability or of the refractive index vanished.
// Carries the two resonance detunings dw_minus < 0 < dw_plus of
// dw^2 + beta*dw - Omega_c^2 = 0 so callers can re-bracket around them.
struct PoleError : Error {
    double pole_minus;
    double pole_plus;
    PoleError(const std::string& msg, double dw_minus, double dw_plus)
        : Error(msg), pole_minus(dw_minus), pole_plus(dw_plus) {}
};

// n^2 <= 0 at the requested frequency: no propagating mode.
struct StopBandError : Error {
    using Error::Error;
};

// Fixed-point or bracketing iteration failed to converge.
struct NoConvergenceError : Error {
    using Error::Error;
};

// The dispersion function has no sign change inside a branch window.
struct NoRootInWindowError : Error {
    using Error::Error;
};

// A propagating window narrower than the scan tolerance was detected.
struct DegenerateWindowError : Error {
    using Error::Error;
};

// An input violates a mathematical precondition (e.g. n*v_g/c > 1).
struct DomainError : Error {
    using Error::Error;
};

// Requested packet bandwidth does not fit inside the slow-branch window.
struct BandTooWideError : Error {
    using Error::Error;
};

// Config text could not be parsed; message carries line numbers.
struct ParseError : Error {
    using Error::Error;
};

// Parsed config violates a parameter invariant; message names it with units.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace slowpol

#endif // SLOWPOL_ERRORS_HPP
