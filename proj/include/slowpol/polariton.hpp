#ifndef SLOWPOL_POLARITON_HPP
#define SLOWPOL_POLARITON_HPP

#include <cmath>
#include <sstream>

#include "slowpol/dispersion.hpp"

namespace slowpol {

// Mode content of one polariton. The photon coefficients carry the
// counter-rotating structure of the diagonalization: the Bose commutator
// fixes photon_plus^2 - photon_minus^2 (note the minus) plus the matter
// weight to one.
struct PolaritonComposition {
    double u = 0;             // spin-excitation amplitude
    double photon_plus = 0;   // sqrt(v_g/c) (n+1)/2, co-propagating photon
    double photon_minus = 0;  // sqrt(v_g/c) (n-1)/2, counter-rotating photon
    double excited = 0;       // u * dw/Omega_c, excited-state amplitude
    double gamma = 0;         // radiative decay rate (1/s)
};

// u = (1 - n v_g/c)^(1/2) [1 + (dw/Omega_c)^2]^(-1/2); u ~ 1 near the EIT
// center, 0 on photon-like branch sections. n v_g/c <= 1 analytically
// (no anomalous dispersion in the windows); beyond 1 + 1e-12 the solution
// is inconsistent.
inline double hopfield_u(const MediumParams& p, const BranchSolution& sol) {
    const double radiative_weight = sol.n * sol.v_g / constants.c;
    if (radiative_weight > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "hopfield_u: n v_g/c = " << radiative_weight
            << " > 1; inconsistent branch solution";
        throw DomainError(msg.str());
    }
    const double spin_weight = std::max(0.0, 1.0 - radiative_weight);
    const double r = sol.delta_omega / p.Omega_c;
    return std::sqrt(spin_weight / (1.0 + r * r));
}

inline PolaritonComposition composition(const MediumParams& p,
                                        const BranchSolution& sol) {
    PolaritonComposition c;
    c.u = hopfield_u(p, sol);
    const double root_vgc = std::sqrt(sol.v_g / constants.c);
    c.photon_plus = root_vgc * (sol.n + 1.0) / 2.0;
    c.photon_minus = root_vgc * (sol.n - 1.0) / 2.0;
    const double r = sol.delta_omega / p.Omega_c;
    c.excited = c.u * r;
    c.gamma = c.u * c.u * r * r * p.Gamma0;
    return c;
}

// Gamma = u^2 (dw/Omega_c)^2 Gamma0: the dark state (dw = 0) is lossless;
// quasiparticle-number (population) decay convention.
inline double decay_rate(const MediumParams& p,
                         const PolaritonComposition& comp,
                         const Detunings& d) {
    const double r = d.delta_omega / p.Omega_c;
    return comp.u * comp.u * r * r * p.Gamma0;
}

// photon_plus^2 - photon_minus^2 + u^2 [1 + (dw/Omega_c)^2] - 1, written
// through excited = u dw/Omega_c. Zero to ~1e-15 for any self-consistent
// composition; this couples n, v_g, u and dw across three modules.
inline double normalization_residual(const PolaritonComposition& c) {
    return c.photon_plus * c.photon_plus - c.photon_minus * c.photon_minus +
           c.u * c.u + c.excited * c.excited - 1.0;
}

} // namespace slowpol

#endif // SLOWPOL_POLARITON_HPP
