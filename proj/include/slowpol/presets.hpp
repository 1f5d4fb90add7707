#ifndef SLOWPOL_PRESETS_HPP
#define SLOWPOL_PRESETS_HPP

#include <cmath>

#include "slowpol/dispersion.hpp"
#include "slowpol/medium.hpp"

namespace slowpol {

// Sodium BEC slow-light parameter set, assembled from the published
// experimental conditions (D-line at 589 nm, ground hyperfine splitting
// 1.7716 GHz, excited-state decay 6.15e7 1/s, 23Na mass). The control
// Rabi frequency and condensate density are chosen so the slow-branch
// group velocity at the EIT center is 22 m/s (v_g/c = 7.3e-8), which
// also places the reverted-pulse frequency shift at 2pi x 260 Hz.
inline MediumParams hau2001() {
    MediumParams p{};
    const double lambda = 589.0e-9;
    p.omega_e = two_pi * constants.c / lambda;
    p.omega_q = two_pi * 1.7716e9;
    p.omega_c = p.omega_e - p.omega_q;  // control resonant with q-e
    p.k_c = p.omega_c / constants.c;    // co-propagating with the probe
    p.Gamma0 = 6.15e7;
    p.M = 3.8175e-26;
    p.Omega_c = two_pi * 20.0e6;
    // dipole moment from the Wigner-Weisskopf relation
    // Gamma0 = omega_e^3 mu^2 / (3 pi eps0 hbar c^3)  ->  2.11e-29 C m
    p.mu = std::sqrt(3.0 * pi * constants.eps0 * constants.hbar *
                     constants.c * constants.c * constants.c * p.Gamma0 /
                     (p.omega_e * p.omega_e * p.omega_e));
    p.rho = 2.818e20;
    p.x = 2.0 / 3.0;
    return p;
}

// Signed wavevector of the EIT resonance (dw = 0, n = 1) for a probe
// travelling in the given direction: the fixed point of
// |k| = (omega_c + omega_{q,k-k_c})/c. Recoil shifts it by parts in 1e10,
// so a few iterations converge to machine precision.
inline double resonant_wavevector(const MediumParams& p, int direction = +1) {
    const double sign = direction < 0 ? -1.0 : 1.0;
    double k = sign * p.omega_e / constants.c;
    for (int it = 0; it < 20; ++it) {
        const double k_new =
            sign *
            (p.omega_c + atomic_excitation_frequency(p, Level::q, k - p.k_c)) /
            constants.c;
        if (k_new == k) break;
        k = k_new;
    }
    return k;
}

// Density scale factor reproducing the Fig. 2(a) regime: with
// omega0 rho' mu^2 / (2 eps0 hbar Omega_c^2) = 9 the EIT-center group
// velocity is exactly c/10.
inline double fig2a_density_ratio(const MediumParams& p) {
    const double k0 = resonant_wavevector(p);
    const double omega0 = detail::reference_frequency(p, k0);
    const double coupling_per_rho = p.mu * p.mu / (constants.hbar * constants.eps0);
    return 9.0 * 2.0 * p.Omega_c * p.Omega_c /
           (omega0 * coupling_per_rho * p.rho);
}

} // namespace slowpol

#endif // SLOWPOL_PRESETS_HPP
