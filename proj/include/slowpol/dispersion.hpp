#ifndef SLOWPOL_DISPERSION_HPP
#define SLOWPOL_DISPERSION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "slowpol/medium.hpp"

namespace slowpol {

// One point of the polariton dispersion omega = c|k|/n(omega, k).
// delta_omega is the primary root coordinate: omega itself is ~1e15 rad/s
// with ulp ~0.5 rad/s, far coarser than the root tolerance, so all
// precision-critical quantities derive from delta_omega.
struct BranchSolution {
    int m = 0;               // branch index, 1 (lowest) .. 3 (highest)
    double k = 0;            // signed wavevector (rad/m)
    double omega = 0;        // eigenfrequency (rad/s)
    double delta_omega = 0;  // two-photon detuning at the solution (rad/s)
    double n = 0;            // refractive index (> 0)
    double v_g = 0;          // radiative group velocity (m/s, > 0)
    double v_full = 0;       // d(omega)/dk including atomic drift (m/s)
};

enum class EdgeKind {
    zero,      // n^2 = 0 at the edge (branch terminates at k -> 0)
    pole,      // n^2 -> +inf at the edge (branch saturates as k -> inf)
    unbounded  // no finite edge (outer branches)
};

struct Window {
    int m = 0;
    double lo = 0, hi = 0;  // open interval in delta_omega (rad/s)
    EdgeKind lo_kind = EdgeKind::zero;
    EdgeKind hi_kind = EdgeKind::zero;

    bool contains(double dw) const { return dw > lo && dw < hi; }
};

struct BranchWindows {
    PolePair poles;               // resonance detunings dw_- < 0 < dw_+
    std::vector<Window> windows;  // ascending in delta_omega, tagged m=1..3
};

namespace detail {

// omega = omega_ref + delta_omega at fixed k.
inline double reference_frequency(const MediumParams& p, double k) {
    return p.omega_c + atomic_excitation_frequency(p, Level::q, k - p.k_c);
}

// n^2 as a function of delta_omega at fixed beta, as a total function:
// the sign scan and the root bracketing must walk arbitrarily close to
// the local-field pole, so a tiny Moebius denominator yields a huge
// signed value instead of the user-facing PoleError. The alpha poles keep
// their exclusion (the scan never samples inside it).
inline double n2_total(const MediumParams& p, double beta, double dw) {
    const double alpha = polarizability(p, Detunings{dw, beta});
    const double a = alpha * p.rho / constants.eps0;
    if (std::abs(a) > 1e8) {
        const double inv = 1.0 / a;
        return (inv + p.x) / (inv - (1.0 - p.x));
    }
    return (1.0 + p.x * a) / (1.0 - (1.0 - p.x) * a);
}

// Half-width of the detuning interval around each pole inside which
// polarizability() throws, padded by 4x.
inline double pole_exclusion(const MediumParams& p, const PolePair& poles) {
    const double gap = poles.plus - poles.minus;
    return 4.0 * pole_tol_ratio * p.Omega_c * p.Omega_c / gap;
}

// Grid over (a, b) clustered geometrically toward both endpoints, so that
// window edges crowding the poles are still bracketed.
inline void log_refined_grid(double a, double b, int count,
                             std::vector<double>& out) {
    const double span = b - a;
    if (!(span > 0.0) || count < 4) return;
    const int uniform = count / 2;
    const int per_end = count / 4;
    for (int i = 0; i <= uniform; ++i)
        out.push_back(a + span * static_cast<double>(i) / uniform);
    // offsets span*10^-1 .. span*10^-14 from each end
    for (int j = 0; j < per_end; ++j) {
        const double expo = -1.0 - 13.0 * static_cast<double>(j) /
                                       std::max(1, per_end - 1);
        const double off = span * std::pow(10.0, expo);
        out.push_back(a + off);
        out.push_back(b - off);
    }
}

// Bisect a sign change of n^2 between lo (sign slo) and hi to relative
// width 1e-13.
inline double refine_edge(const MediumParams& p, double beta, double lo,
                          double hi, bool lo_positive) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const bool pos = n2_total(p, beta, mid) > 0.0;
        if (pos == lo_positive)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * (std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Zero edge if the numerator 1 + x*a of n^2 vanishes there, pole edge if
// the denominator 1 - (1-x)*a does.
inline EdgeKind classify_edge(const MediumParams& p, double beta,
                              double dw) {
    const double a =
        polarizability(p, Detunings{dw, beta}) * p.rho / constants.eps0;
    const double num = std::abs(1.0 + p.x * a);
    const double den = std::abs(1.0 - (1.0 - p.x) * a);
    return num <= den ? EdgeKind::zero : EdgeKind::pole;
}

inline void check_degenerate(const Window& w) {
    const double scale = std::max(std::abs(w.lo), std::abs(w.hi));
    const double width = w.hi - w.lo;
    if (width <= 8.0 * std::numeric_limits<double>::epsilon() * scale) {
        std::ostringstream msg;
        msg << "degenerate propagating window [" << w.lo << ", " << w.hi
            << "] rad/s: narrower than scan tolerance";
        throw DegenerateWindowError(msg.str());
    }
}

} // namespace detail

// Locates the propagating windows (n^2 > 0) in delta_omega at fixed k.
// Poles come from the closed-form quadratic; window edges from a sign
// scan of n^2 on a logarithmically refined grid between and beyond the
// poles, followed by bisection of each sign change.
inline BranchWindows branch_windows(const MediumParams& p, double k,
                                    int scan_resolution = 4096) {
    if (scan_resolution < 1000)
        throw DomainError("branch_windows: scan_resolution must be >= 1000");
    const double beta = control_mismatch(p, k);
    const PolePair poles = pole_pair(p, beta);
    const double om_ref = detail::reference_frequency(p, k);
    const double excl = detail::pole_exclusion(p, poles);
    const double pole_scale = p.Omega_c + std::abs(beta);

    // Closed-form edge candidates (n^2 zeros and poles of the Moebius map)
    // are used only to size the scan domain; the scan itself decides.
    double lo_dom = poles.minus - 10.0 * pole_scale;
    double hi_dom = poles.plus + 10.0 * pole_scale;
    const double coupling = p.mu * p.mu * p.rho / (constants.hbar * constants.eps0);
    const double targets[2] = {-1.0 / (p.x > 0.0 ? p.x : 1.0),
                               p.x < 1.0 ? 1.0 / (1.0 - p.x) : 0.0};
    for (double a : targets) {
        if (a == 0.0) continue;
        const double qb = a * beta + coupling;
        const double disc = std::sqrt(qb * qb + 4.0 * a * a * p.Omega_c * p.Omega_c);
        for (double root : {(-qb - disc) / (2.0 * a), (-qb + disc) / (2.0 * a)}) {
            lo_dom = std::min(lo_dom, root - 10.0 * pole_scale);
            hi_dom = std::max(hi_dom, root + 10.0 * pole_scale);
        }
    }
    lo_dom = std::max(lo_dom, -0.999999999 * om_ref);  // keep omega > 0

    const int per_region = std::max(scan_resolution / 3, 334);
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(scan_resolution) + 16);
    detail::log_refined_grid(lo_dom, poles.minus - excl, per_region, grid);
    detail::log_refined_grid(poles.minus + excl, poles.plus - excl,
                             per_region, grid);
    detail::log_refined_grid(poles.plus + excl, hi_dom, per_region, grid);
    grid.push_back(0.0);  // the slow window always contains dw = 0
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    struct Edge {
        double dw;
        EdgeKind kind;
        bool opens;  // true: window starts here
    };
    std::vector<Edge> edges;
    bool prev_positive = false;
    bool have_prev = false;
    double prev_dw = 0;
    for (double dw : grid) {
        // skip the excluded slivers at the poles
        if (std::abs(dw - poles.minus) < excl ||
            std::abs(dw - poles.plus) < excl)
            continue;
        const bool pos = detail::n2_total(p, beta, dw) > 0.0;
        if (!have_prev) {
            // positive from the start of the domain: the lowest window is
            // open down to the physical floor omega = 0
            if (pos) edges.push_back({-om_ref, EdgeKind::unbounded, true});
            have_prev = true;
        } else if (pos != prev_positive) {
            // sign change crossing a pole means the window ends/starts at
            // the pole itself (x = 1 collapses the n^2 pole onto it)
            const bool crosses_minus =
                prev_dw < poles.minus && dw > poles.minus;
            const bool crosses_plus = prev_dw < poles.plus && dw > poles.plus;
            if (crosses_minus || crosses_plus) {
                const double at = crosses_minus ? poles.minus : poles.plus;
                edges.push_back({at, EdgeKind::pole, pos});
            } else {
                const double e =
                    detail::refine_edge(p, beta, prev_dw, dw, prev_positive);
                edges.push_back({e, detail::classify_edge(p, beta, e), pos});
            }
        }
        prev_positive = pos;
        prev_dw = dw;
    }

    BranchWindows out;
    out.poles = poles;
    Window cur;
    bool open = false;
    // Leading edge: if n^2 > 0 at the start of the domain the lowest
    // branch extends to omega -> 0 (unbounded below).
    for (const Edge& e : edges) {
        if (e.opens) {
            cur = Window{};
            cur.lo = e.dw;
            cur.lo_kind = e.kind;
            open = true;
        } else if (open) {
            cur.hi = e.dw;
            cur.hi_kind = e.kind;
            out.windows.push_back(cur);
            open = false;
        }
    }
    if (open) {
        cur.hi = std::numeric_limits<double>::infinity();
        cur.hi_kind = EdgeKind::unbounded;
        out.windows.push_back(cur);
    }

    if (out.windows.size() != 3) {
        std::ostringstream msg;
        msg << "branch_windows: expected 3 propagating windows, scan found "
            << out.windows.size() << " (k = " << k
            << " rad/m); a stop band narrower than the pole tolerance "
               "cannot be resolved";
        throw DegenerateWindowError(msg.str());
    }
    for (size_t i = 0; i < out.windows.size(); ++i) {
        out.windows[i].m = static_cast<int>(i) + 1;
        if (std::isfinite(out.windows[i].hi))
            detail::check_degenerate(out.windows[i]);
    }
    if (!out.windows[1].contains(0.0))
        throw DegenerateWindowError(
            "branch_windows: slow-branch window does not contain dw = 0");
    return out;
}

namespace detail {

// Dispersion function G(dw) = omega^2 n^2 - c^2 k^2 with
// omega^2 = omega_ref^2 + (2 omega_ref + dw) dw expanded analytically, so
// dw enters at full double precision (omega_ref + dw would quantize dw to
// the ~0.5 rad/s ulp of omega).
struct DispersionFn {
    const MediumParams& p;
    double beta;
    double om_ref;
    double ck2;

    double operator()(double dw) const {
        // inside the alpha-pole sliver n^2 -> -x/(1-x) from both sides,
        // but a window can touch the pole only where n^2 -> +inf (x -> 1),
        // so a positive sentinel keeps the bracket orientation
        double n2;
        try {
            n2 = n2_total(p, beta, dw);
        } catch (const PoleError&) {
            return 1e300;
        }
        const double om2 = std::fma(2.0 * om_ref + dw, dw, om_ref * om_ref);
        return om2 * n2 - ck2;
    }
};

} // namespace detail

inline double radiative_group_velocity(const MediumParams& p,
                                       const BranchSolution& sol);

// Solves omega n(omega, k) = c |k| for branch m by bisection of the
// dispersion function inside the branch window, then a bracketed secant
// polish down to the double-precision noise floor.
inline BranchSolution frequency_of_wavevector(const MediumParams& p,
                                              double k, int m) {
    if (m < 1 || m > 3)
        throw DomainError("frequency_of_wavevector: branch index must be 1..3");
    if (k == 0.0)
        throw DomainError("frequency_of_wavevector: k = 0 has no propagating solution");
    const BranchWindows bw = branch_windows(p, k);
    const Window& w = bw.windows[static_cast<size_t>(m - 1)];
    const double beta = control_mismatch(p, k);
    const double om_ref = detail::reference_frequency(p, k);
    const double ck = constants.c * std::abs(k);
    const detail::DispersionFn G{p, beta, om_ref, ck * ck};
    const double excl = detail::pole_exclusion(p, bw.poles);

    // The smallest inset from a window edge into the window: at least the
    // representability floor, and enough to clear the alpha-pole
    // exclusion sliver when the edge sits on (or hugs) a pole, as it does
    // for x -> 1. The n^2 divergence at a pole-kind edge itself needs no
    // clearance (n2_total is total there).
    const auto inset_floor = [&](double edge) {
        const double gap = std::min(std::abs(edge - bw.poles.minus),
                                    std::abs(edge - bw.poles.plus));
        return std::max(4.0 * std::numeric_limits<double>::epsilon() *
                            std::abs(edge),
                        excl - gap);
    };

    // Lower bracket: G < 0 (n^2 -> 0 at a zero edge, omega -> 0 below the
    // lowest branch).
    double lo, glo;
    if (w.lo_kind == EdgeKind::unbounded) {
        double om_lo = om_ref * 1e-9;
        for (int it = 0;; ++it) {
            lo = om_lo - om_ref;
            glo = G(lo);
            if (glo < 0.0) break;
            om_lo *= 1e-2;
            if (it > 100 || om_lo <= 0.0)
                throw NoRootInWindowError(
                    "frequency_of_wavevector: no negative bracket below branch 1");
        }
    } else {
        const double width =
            (std::isfinite(w.hi) ? w.hi - w.lo : std::abs(w.lo) + p.Omega_c);
        const double floor = inset_floor(w.lo);
        double off = std::max(width * 1e-9, floor);
        bool at_floor = off == floor;
        for (int it = 0;; ++it) {
            lo = w.lo + off;
            glo = G(lo);
            if (glo < 0.0) break;
            if (at_floor || it > 200) {
                std::ostringstream msg;
                msg << "frequency_of_wavevector: no sign change in branch-"
                    << m << " window [" << w.lo << ", " << w.hi << "] rad/s";
                throw NoRootInWindowError(msg.str());
            }
            off *= 0.25;
            if (off <= floor) {
                off = floor;
                at_floor = true;
            }
        }
    }

    // Upper bracket: G > 0 (n^2 -> +inf at a pole edge; omega -> inf on
    // the unbounded top branch).
    double hi, ghi;
    if (w.hi_kind == EdgeKind::pole) {
        const double floor = inset_floor(w.hi);
        double off = std::max((w.hi - w.lo) * 1e-12, floor);
        bool at_floor = off == floor;
        for (int it = 0;; ++it) {
            hi = w.hi - off;
            ghi = G(hi);
            if (ghi > 0.0 && hi > lo) break;
            if (at_floor || it > 200) {
                std::ostringstream msg;
                msg << "frequency_of_wavevector: no positive bracket at the "
                       "pole edge of branch-" << m << " window [" << w.lo
                    << ", " << w.hi << "] rad/s";
                throw NoRootInWindowError(msg.str());
            }
            off *= 0.25;
            if (off <= floor) {
                off = floor;
                at_floor = true;
            }
        }
    } else {
        double step = std::max(std::abs(w.lo), 10.0 * (p.Omega_c + std::abs(beta)));
        hi = w.lo + step;
        ghi = G(hi);
        int it = 0;
        while (ghi <= 0.0) {
            step *= 2.0;
            hi = w.lo + step;
            ghi = G(hi);
            if (++it > 200)
                throw NoRootInWindowError(
                    "frequency_of_wavevector: dispersion function never "
                    "turns positive on the unbounded branch");
        }
    }

    // Bisection: absolute tolerance 1e-12 Omega_c or 60 iterations,
    // whichever first.
    const double tol = 1e-12 * p.Omega_c;
    for (int it = 0; it < 60 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = G(mid);
        if (gm < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    // Bracketed polish, alternating secant and midpoint steps, down to a
    // one-ulp bracket.
    for (int it = 0; it < 64; ++it) {
        double s = (it % 2 == 0 && ghi != glo)
                       ? hi - ghi * (hi - lo) / (ghi - glo)
                       : 0.5 * (lo + hi);
        if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
        if (s <= lo || s >= hi) break;  // bracket at representability
        const double gs = G(s);
        if (gs == 0.0) {
            lo = hi = s;
            break;
        }
        if (gs < 0.0) {
            lo = s;
            glo = gs;
        } else {
            hi = s;
            ghi = gs;
        }
    }
    const double dw = 0.5 * (lo + hi);

    BranchSolution sol;
    sol.m = m;
    sol.k = k;
    sol.delta_omega = dw;
    sol.omega = om_ref + dw;
    const double n2 = detail::n2_total(p, beta, dw);
    if (!(n2 > 0.0))
        throw StopBandError("frequency_of_wavevector: root landed in a stop band");
    sol.n = std::sqrt(n2);
    sol.v_g = radiative_group_velocity(p, sol);
    sol.v_full = std::copysign(sol.v_g, k) +
                 constants.hbar * (k - p.k_c) / p.M;
    return sol;
}

// v_g = c (n + omega dn/domega)^-1 with dn/domega assembled analytically
// through d(n^2)/d(alpha) and d(alpha)/d(delta_omega).
inline double radiative_group_velocity(const MediumParams& p,
                                       const BranchSolution& sol) {
    const Detunings d{sol.delta_omega, control_mismatch(p, sol.k)};
    const double alpha = polarizability(p, d);
    const double a = alpha * p.rho / constants.eps0;
    const double den = 1.0 - (1.0 - p.x) * a;
    const double dn2_dalpha = (p.rho / constants.eps0) / (den * den);
    const double dn_domega =
        dn2_dalpha * polarizability_derivative(p, d) / (2.0 * sol.n);
    return constants.c / (sol.n + sol.omega * dn_domega);
}

// d(omega)/dk = sign(k) v_g + hbar (k - k_c)/M. The drift term is the
// recoil velocity of the underlying spin excitation; for k = k_c the two
// group velocities coincide exactly.
inline double full_group_velocity(const MediumParams& p,
                                  const BranchSolution& sol) {
    return std::copysign(sol.v_g, sol.k) +
           constants.hbar * (sol.k - p.k_c) / p.M;
}

// |omega n - c |k|| / (c |k|); < 1e-10 for every returned solution.
inline double dispersion_residual(const BranchSolution& sol) {
    const double ck = constants.c * std::abs(sol.k);
    return std::abs(sol.omega * sol.n - ck) / ck;
}

// Direct evaluation k = omega n(omega, k)/c iterated to a fixed point;
// n depends on k only through recoil, so this converges in a few steps.
inline double wavevector_of_frequency(const MediumParams& p, double omega,
                                      double k_seed) {
    if (!(omega > 0.0))
        throw DomainError("wavevector_of_frequency: omega (rad/s) must be > 0");
    const double sign = (k_seed < 0.0) ? -1.0 : 1.0;
    double k = k_seed;
    for (int it = 0; it < 100; ++it) {
        const Detunings d{two_photon_detuning(p, omega, k),
                          control_mismatch(p, k)};
        const double n2 = refractive_index_squared(p, polarizability(p, d));
        if (!(n2 > 0.0)) {
            std::ostringstream msg;
            msg << "wavevector_of_frequency: n^2 = " << n2
                << " <= 0 at omega = " << omega
                << " rad/s (stop band, no propagating mode)";
            throw StopBandError(msg.str());
        }
        const double k_new = sign * omega * std::sqrt(n2) / constants.c;
        if (std::abs(k_new - k) <=
            4.0 * std::numeric_limits<double>::epsilon() * std::abs(k_new))
            return k_new;
        k = k_new;
    }
    throw NoConvergenceError(
        "wavevector_of_frequency: fixed point not reached in 100 iterations");
}

struct SweepFailure {
    double k;
    int m;
    std::string message;
};

struct DispersionSweep {
    std::vector<BranchSolution> points;  // branch-major, ascending k
    std::vector<SweepFailure> failures;
};

// Uniform k sweep over all three branches; per-point failures are
// collected, not fatal.
inline DispersionSweep dispersion_sweep(const MediumParams& p, double k_min,
                                        double k_max, int samples) {
    if (samples < 2)
        throw DomainError("dispersion_sweep: samples must be >= 2");
    if (!(k_min < k_max))
        throw DomainError("dispersion_sweep: require k_min < k_max");
    DispersionSweep sweep;
    sweep.points.reserve(static_cast<size_t>(samples) * 3);
    for (int m = 1; m <= 3; ++m) {
        for (int i = 0; i < samples; ++i) {
            const double k =
                k_min + (k_max - k_min) * static_cast<double>(i) /
                            static_cast<double>(samples - 1);
            try {
                sweep.points.push_back(frequency_of_wavevector(p, k, m));
            } catch (const Error& e) {
                sweep.failures.push_back(SweepFailure{k, m, e.what()});
            }
        }
    }
    return sweep;
}

} // namespace slowpol

#endif // SLOWPOL_DISPERSION_HPP
