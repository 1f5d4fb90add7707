#ifndef SLOWPOL_MEDIUM_HPP
#define SLOWPOL_MEDIUM_HPP

#include <cmath>
#include <sstream>
#include <string>

#include "slowpol/constants.hpp"
#include "slowpol/errors.hpp"

namespace slowpol {

// All frequencies are angular (rad/s); wavevectors are signed scalars
// (rad/m) along a single propagation axis. Strict SI throughout.

enum class Level { q, e };

struct MediumParams {
    double rho;      // atomic number density (m^-3)
    double mu;       // g-e transition dipole moment (C m)
    double omega_e;  // bare excited-state frequency (rad/s)
    double omega_q;  // bare hyperfine-state frequency (rad/s)
    double omega_c;  // control-laser frequency (rad/s)
    double Omega_c;  // control Rabi frequency (rad/s)
    double k_c;      // control wavevector, signed (rad/m)
    double M;        // atomic mass (kg)
    double Gamma0;   // atomic radiative decay rate (1/s)
    double x = 2.0 / 3.0;  // contact-interaction (local-field) factor

    // |delta_omega| above this fraction of omega_c is outside the stated
    // validity range of the polarizability; a warning, not an error.
    double detuning_warn_ratio = 1e-3;

    void validate() const;
};

struct Detunings {
    double delta_omega;  // two-photon detuning (rad/s)
    double beta;         // control-laser frequency mismatch (rad/s)
};

// Denominators are treated as singular below 1e-9 of their natural scale
// (Omega_c^2 for the polarizability, 1 for the refractive index).
inline constexpr double pole_tol_ratio = 1e-9;

inline void MediumParams::validate() const {
    std::ostringstream err;
    if (!(rho > 0.0))
        err << "rho (m^-3) must be > 0, got " << rho;
    else if (!(mu > 0.0))
        err << "mu (C m) must be > 0, got " << mu;
    else if (!(Omega_c > 0.0))
        err << "Omega_c (rad/s) must be > 0, got " << Omega_c;
    else if (!(M > 0.0))
        err << "M (kg) must be > 0, got " << M;
    else if (!(Gamma0 >= 0.0))
        err << "Gamma0 (1/s) must be >= 0, got " << Gamma0;
    else if (!(x >= 0.0 && x <= 1.0))
        err << "x (dimensionless) must be in [0, 1], got " << x;
    else if (!(omega_q >= 0.0))
        err << "omega_q (rad/s) must be >= 0, got " << omega_q;
    else if (!(omega_e > omega_q))
        err << "omega_e (rad/s) must exceed omega_q, got omega_e = " << omega_e
            << ", omega_q = " << omega_q;
    else if (!(omega_c > 0.0))
        err << "omega_c (rad/s) must be > 0, got " << omega_c;
    else if (!(detuning_warn_ratio > 0.0))
        err << "detuning_warn_ratio (dimensionless) must be > 0, got "
            << detuning_warn_ratio;
    if (!err.str().empty()) throw ValidationError(err.str());
}

// omega_{j,k} = omega_j + hbar k^2 / 2M; even in k.
inline double atomic_excitation_frequency(const MediumParams& p, Level j,
                                          double k) {
    const double omega_j = (j == Level::q) ? p.omega_q : p.omega_e;
    return omega_j + constants.hbar * k * k / (2.0 * p.M);
}

// Two-photon detuning of a probe (omega, k):
//   delta_omega = omega - omega_c - omega_{q, k - k_c}
inline double two_photon_detuning(const MediumParams& p, double omega,
                                  double k) {
    if (!(omega > 0.0))
        throw DomainError("two_photon_detuning: omega (rad/s) must be > 0");
    return omega - p.omega_c -
           atomic_excitation_frequency(p, Level::q, k - p.k_c);
}

// Control mismatch: beta = omega_{q, k - k_c} + omega_c - omega_{e, k}.
// Not even in k when k_c != 0 (the recoil terms differ). Grouped as the
// bare mismatch plus the recoil difference so beta is not quantized to
// the ~0.5 rad/s ulp of the optical frequencies.
inline double control_mismatch(const MediumParams& p, double k) {
    const double kappa = k - p.k_c;
    const double bare = p.omega_q - (p.omega_e - p.omega_c);
    const double recoil =
        constants.hbar * (kappa * kappa - k * k) / (2.0 * p.M);
    return bare + recoil;
}

struct PolePair {
    double minus;  // dw_- < 0
    double plus;   // dw_+ > 0
};

// The two resonance detunings dw_-, dw_+ of dw^2 + beta dw - Omega_c^2 = 0,
// evaluated stably (Vieta for the small root). dw_- < 0 < dw_+ always,
// since their product is -Omega_c^2.
inline PolePair pole_pair(const MediumParams& p, double beta) {
    if (beta == 0.0) return PolePair{-p.Omega_c, p.Omega_c};
    const double disc = std::sqrt(beta * beta + 4.0 * p.Omega_c * p.Omega_c);
    const double big = -0.5 * (beta + std::copysign(disc, beta));
    const double small = -p.Omega_c * p.Omega_c / big;
    return (big > 0.0) ? PolePair{small, big} : PolePair{big, small};
}

inline double pole_denominator(const MediumParams& p, const Detunings& d) {
    return d.delta_omega * d.delta_omega + d.beta * d.delta_omega -
           p.Omega_c * p.Omega_c;
}

// Atomic polarizability, valid for |delta_omega| << omega:
//   alpha = -(mu^2/hbar) dw / (dw^2 + beta dw - Omega_c^2)
inline double polarizability(const MediumParams& p, const Detunings& d) {
    const double den = pole_denominator(p, d);
    if (std::abs(den) < pole_tol_ratio * p.Omega_c * p.Omega_c) {
        const PolePair poles = pole_pair(p, d.beta);
        std::ostringstream msg;
        msg << "polarizability: denominator " << den
            << " within tolerance of the resonance poles dw- = "
            << poles.minus << ", dw+ = " << poles.plus << " rad/s";
        throw PoleError(msg.str(), poles.minus, poles.plus);
    }
    return -(p.mu * p.mu / constants.hbar) * d.delta_omega / den;
}

// d(alpha)/d(delta_omega) = (mu^2/hbar)(dw^2 + Omega_c^2) / den^2.
// Strictly positive away from the poles: no anomalous dispersion in the
// dissipationless model.
inline double polarizability_derivative(const MediumParams& p,
                                        const Detunings& d) {
    const double den = pole_denominator(p, d);
    if (std::abs(den) < pole_tol_ratio * p.Omega_c * p.Omega_c) {
        const PolePair poles = pole_pair(p, d.beta);
        throw PoleError("polarizability_derivative: at resonance pole",
                        poles.minus, poles.plus);
    }
    const double num =
        d.delta_omega * d.delta_omega + p.Omega_c * p.Omega_c;
    return (p.mu * p.mu / constants.hbar) * num / (den * den);
}

// Local-field-corrected refractive index:
//   n^2 = (1 + x a) / (1 - (1-x) a),   a = alpha rho / eps0.
// Returned as a signed real; n^2 <= 0 means a stop band. For |a| -> inf
// the value tends to -x/(1-x); evaluated through 1/a in that regime so
// the alpha poles do not overflow.
inline double refractive_index_squared(const MediumParams& p, double alpha) {
    const double a = alpha * p.rho / constants.eps0;
    if (std::abs(a) > 1e8) {
        const double inv = 1.0 / a;
        return (inv + p.x) / (inv - (1.0 - p.x));
    }
    const double den = 1.0 - (1.0 - p.x) * a;
    if (std::abs(den) < pole_tol_ratio) {
        const double alpha_pole =
            constants.eps0 / ((1.0 - p.x) * p.rho);
        std::ostringstream msg;
        msg << "refractive_index_squared: local-field pole at alpha = "
            << alpha_pole << " C m^2/V (denominator " << den << ")";
        throw PoleError(msg.str(), alpha_pole, alpha_pole);
    }
    return (1.0 + p.x * a) / den;
}

// True when |delta_omega| is inside the |dw| << omega validity range.
inline bool detuning_within_validity(const MediumParams& p,
                                     const Detunings& d) {
    return std::abs(d.delta_omega) <= p.detuning_warn_ratio * p.omega_c;
}

} // namespace slowpol

#endif // SLOWPOL_MEDIUM_HPP
