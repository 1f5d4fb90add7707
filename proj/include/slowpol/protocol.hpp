#ifndef SLOWPOL_PROTOCOL_HPP
#define SLOWPOL_PROTOCOL_HPP

#include <complex>
#include <span>
#include <sstream>
#include <vector>

#include "slowpol/polariton.hpp"

namespace slowpol {

using Complex = std::complex<double>;

enum class Stage { polariton, magnon, regenerated };
enum class Scenario { degenerate, reverted, counter_propagating, general };

inline const char* to_string(Stage s) {
    switch (s) {
        case Stage::polariton: return "polariton";
        case Stage::magnon: return "magnon";
        default: return "regenerated";
    }
}

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::degenerate: return "degenerate";
        case Scenario::reverted: return "reverted";
        case Scenario::counter_propagating: return "counter_propagating";
        default: return "general";
    }
}

// Many-mode coherent-state amplitudes on a uniform signed-k grid. The
// quasiparticle number sum |alpha_k|^2 is the conserved bookkeeping
// quantity across the protocol.
struct WavePacket {
    std::vector<double> grid;   // strictly increasing, uniform spacing
    std::vector<Complex> amps;  // coherent amplitude per grid point
    int branch = 2;
    Stage stage = Stage::polariton;
    double carrier_k = 0;  // central wavevector (rad/m)
    double time = 0;       // elapsed protocol time (s)

    double number() const {
        double n = 0;
        for (const Complex& a : amps) n += std::norm(a);
        return n;
    }

    void validate() const {
        if (grid.size() != amps.size())
            throw DomainError("WavePacket: grid/amps size mismatch");
        if (grid.empty()) throw DomainError("WavePacket: empty grid");
        if (grid.size() < 2) return;
        const double d0 = grid[1] - grid[0];
        double kmax = 0;
        for (double k : grid) kmax = std::max(kmax, std::abs(k));
        const double tol =
            8.0 * std::numeric_limits<double>::epsilon() * kmax;
        for (size_t i = 1; i < grid.size(); ++i) {
            const double d = grid[i] - grid[i - 1];
            if (!(d > 0.0) || std::abs(d - d0) > tol)
                throw DomainError(
                    "WavePacket: grid not strictly increasing with uniform "
                    "spacing");
        }
    }
};

// Switch-off time t1, switch-on time t2 >= t1, and the new control field.
struct ProtocolSchedule {
    double t1 = 0;
    double t2 = 0;
    double new_Omega_c = 0;  // Rabi frequency after switch-on (rad/s)
    double new_k_c = 0;      // control wavevector after switch-on (rad/m)
};

// Quasiparticle weight discarded at the switch events.
struct LeakageRecord {
    double radiative = 0;       // n v_g/c photon content, switch-off
    double excited = 0;         // u^2 (dw/Omega_c)^2 content, switch-off
    double other_branches = 0;  // m = 1,3 projection weight, switch-on
};

inline MediumParams with_new_control(const MediumParams& p,
                                     const ProtocolSchedule& s) {
    MediumParams q = p;
    q.Omega_c = s.new_Omega_c;
    q.k_c = s.new_k_c;
    q.validate();
    return q;
}

inline Scenario classify_scenario(const MediumParams& p, double k,
                                  const ProtocolSchedule& s) {
    const double scale = std::max(std::abs(p.k_c), std::abs(s.new_k_c));
    const auto same = [scale](double a, double b) {
        return std::abs(a - b) <= 1e-12 * scale;
    };
    if (same(s.new_k_c, p.k_c)) return Scenario::degenerate;
    if (same(s.new_k_c, -p.k_c)) {
        return (k * p.k_c > 0.0) ? Scenario::reverted
                                 : Scenario::counter_propagating;
    }
    return Scenario::general;
}

// Gaussian slow-branch packet, N = sum |alpha|^2 = 1. bandwidth_ratio is
// the detuning spread sigma(dw)/Omega_c of the weight profile; it converts
// to a k spread through the carrier group velocity. The grid spans
// +-4 sigma_k; the corresponding detuning band must fit inside the
// slow-branch window.
inline WavePacket gaussian_packet(const MediumParams& p, double carrier_k,
                                  double bandwidth_ratio, int samples) {
    if (bandwidth_ratio < 0.0)
        throw DomainError("gaussian_packet: bandwidth_ratio must be >= 0");
    const BranchSolution sol0 = frequency_of_wavevector(p, carrier_k, 2);

    WavePacket pkt;
    pkt.branch = 2;
    pkt.stage = Stage::polariton;
    pkt.carrier_k = carrier_k;
    if (bandwidth_ratio == 0.0) {
        pkt.grid = {carrier_k};
        pkt.amps = {Complex{1.0, 0.0}};
        return pkt;
    }
    if (samples < 8)
        throw DomainError(
            "gaussian_packet: need >= 8 samples for a finite bandwidth");

    const double sigma_dw = bandwidth_ratio * p.Omega_c;
    const Window& slow = branch_windows(p, carrier_k).windows[1];
    const double band_lo = sol0.delta_omega - 4.0 * sigma_dw;
    const double band_hi = sol0.delta_omega + 4.0 * sigma_dw;
    if (band_lo <= slow.lo || band_hi >= slow.hi) {
        std::ostringstream msg;
        msg << "gaussian_packet: requested band [" << band_lo << ", "
            << band_hi << "] rad/s exceeds the slow-branch window ["
            << slow.lo << ", " << slow.hi << "] rad/s";
        throw BandTooWideError(msg.str());
    }

    const double sigma_k = sigma_dw / sol0.v_g;
    const double half = 4.0 * sigma_k;
    pkt.grid.resize(static_cast<size_t>(samples));
    pkt.amps.resize(static_cast<size_t>(samples));
    double norm = 0;
    for (int i = 0; i < samples; ++i) {
        const double k = carrier_k - half +
                         2.0 * half * static_cast<double>(i) /
                             static_cast<double>(samples - 1);
        const double dk = k - carrier_k;
        const double a = std::exp(-dk * dk / (4.0 * sigma_k * sigma_k));
        pkt.grid[static_cast<size_t>(i)] = k;
        pkt.amps[static_cast<size_t>(i)] = Complex{a, 0.0};
        norm += a * a;
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (Complex& a : pkt.amps) a *= scale;
    return pkt;
}

// alpha_k -> alpha_k exp(-i omega_k dt) exp(-Gamma_k dt / 2): coherent
// phase evolution plus frequency-dependent radiative decay. Valid for the
// initial polariton stage and for the regenerated stage (pass the
// post-switch parameters then).
inline WavePacket evolve_polariton_stage(const WavePacket& in,
                                         const MediumParams& p, double dt) {
    if (in.stage == Stage::magnon)
        throw DomainError(
            "evolve_polariton_stage: packet is in the magnon stage");
    if (dt < 0.0)
        throw DomainError("evolve_polariton_stage: dt must be >= 0");
    WavePacket out = in;
    if (dt == 0.0) return out;
    for (size_t i = 0; i < out.grid.size(); ++i) {
        const BranchSolution sol =
            frequency_of_wavevector(p, out.grid[i], out.branch);
        const double u = hopfield_u(p, sol);
        const double r = sol.delta_omega / p.Omega_c;
        const double gamma = u * u * r * r * p.Gamma0;
        out.amps[i] *=
            std::polar(std::exp(-0.5 * gamma * dt), -sol.omega * dt);
    }
    out.time += dt;
    return out;
}

struct SwitchOffResult {
    WavePacket packet;      // magnon packet on the k - k_c grid
    LeakageRecord leakage;  // discarded radiative and excited weight
    std::vector<double> u;  // per-mode retention amplitude
};

// Sudden control switch-off: each polariton collapses to its
// spin-excitation content, alpha_k -> u_k alpha_k on the magnon grid
// k - k_c. The photonic (n v_g/c) and excited-state (u^2 (dw/Omega_c)^2)
// weights are discarded into the leakage record; retained + discarded = 1
// per mode.
inline SwitchOffResult switch_off_map(const WavePacket& in,
                                      const MediumParams& p) {
    if (in.stage != Stage::polariton)
        throw DomainError("switch_off_map: packet is not in the polariton stage");
    SwitchOffResult res;
    res.packet = in;
    res.u.resize(in.grid.size());
    for (size_t i = 0; i < in.grid.size(); ++i) {
        const BranchSolution sol =
            frequency_of_wavevector(p, in.grid[i], in.branch);
        const double u = hopfield_u(p, sol);
        const double r = sol.delta_omega / p.Omega_c;
        const double w = std::norm(in.amps[i]);
        res.leakage.radiative += w * sol.n * sol.v_g / constants.c;
        res.leakage.excited += w * u * u * r * r;
        res.packet.amps[i] *= u;
        res.u[i] = u;
        res.packet.grid[i] = in.grid[i] - p.k_c;
    }
    res.packet.stage = Stage::magnon;
    res.packet.carrier_k = in.carrier_k - p.k_c;
    return res;
}

// Free magnon evolution: a pure phase exp(-i omega_{q,kappa} dt) per mode.
// Storage is lossless in this model, so |alpha| is untouched for any dt.
inline WavePacket evolve_magnon_stage(const WavePacket& in,
                                      const MediumParams& p, double dt) {
    if (in.stage != Stage::magnon)
        throw DomainError("evolve_magnon_stage: packet is not in the magnon stage");
    if (dt < 0.0)
        throw DomainError("evolve_magnon_stage: dt must be >= 0");
    WavePacket out = in;
    if (dt == 0.0) return out;
    for (size_t i = 0; i < out.grid.size(); ++i) {
        const double omega_q =
            atomic_excitation_frequency(p, Level::q, out.grid[i]);
        out.amps[i] *= std::polar(1.0, -omega_q * dt);
    }
    out.time += dt;
    return out;
}

struct SwitchOnResult {
    WavePacket packet;            // regenerated slow polariton
    LeakageRecord leakage;        // m = 1,3 projection weight
    std::vector<double> u_prime;  // per-mode retention amplitude
};

// Sudden switch-on with the new control field: each magnon mode kappa maps
// to the slow polariton at k' = kappa + k_c' with amplitude factor
// u'_{k'} computed from the new parameters. The complementary spin weight
// 1 - u'^2 projects onto the m = 1,3 branches and is routed to the
// leakage record, as is the full weight of any mode without a propagating
// slow-branch solution.
inline SwitchOnResult switch_on_map(const WavePacket& in,
                                    const MediumParams& p,
                                    const ProtocolSchedule& sched) {
    if (in.stage != Stage::magnon)
        throw DomainError("switch_on_map: packet is not in the magnon stage");
    const MediumParams pnew = with_new_control(p, sched);
    SwitchOnResult res;
    res.packet = in;
    res.u_prime.resize(in.grid.size());
    for (size_t i = 0; i < in.grid.size(); ++i) {
        const double k_prime = in.grid[i] + sched.new_k_c;
        const double w = std::norm(in.amps[i]);
        double u = 0;
        try {
            const BranchSolution sol =
                frequency_of_wavevector(pnew, k_prime, 2);
            u = hopfield_u(pnew, sol);
            res.leakage.other_branches += w * (1.0 - u * u);
            res.packet.amps[i] *= u;
        } catch (const Error&) {
            res.leakage.other_branches += w;
            res.packet.amps[i] = Complex{0.0, 0.0};
        }
        res.u_prime[i] = u;
        res.packet.grid[i] = k_prime;
    }
    res.packet.stage = Stage::regenerated;
    res.packet.branch = 2;
    res.packet.carrier_k = in.carrier_k + sched.new_k_c;
    return res;
}

// Four-wave-mixing bookkeeping for one probe mode: the regenerated
// wavevector from the phase-matching condition k - k_c = k' - k_c', the
// frequency shift delta_omega', and the decay rate of the regenerated
// polariton. For the reverted scenario the shift is returned through the
// closed form 2 v_g' (k_c - k); otherwise it is the difference of the two
// slow-branch eigenfrequencies.
struct FwmReport {
    Scenario scenario = Scenario::general;
    double k = 0;
    double k_prime = 0;
    double delta_omega_prime = 0;
    double gamma_regenerated = 0;
};

inline FwmReport fwm_analyze(const MediumParams& p, double k,
                             const ProtocolSchedule& sched) {
    const MediumParams pnew = with_new_control(p, sched);
    FwmReport rep;
    rep.scenario = classify_scenario(p, k, sched);
    rep.k = k;
    rep.k_prime = (k - p.k_c) + sched.new_k_c;
    const BranchSolution sol = frequency_of_wavevector(p, k, 2);
    const BranchSolution sol_new =
        frequency_of_wavevector(pnew, rep.k_prime, 2);
    if (rep.scenario == Scenario::reverted) {
        rep.delta_omega_prime = 2.0 * sol_new.v_g * (p.k_c - k);
    } else {
        // the magnon reference omega_{q,kappa} is common to both sides
        const double ref_shift =
            atomic_excitation_frequency(p, Level::q,
                                        rep.k_prime - sched.new_k_c) -
            atomic_excitation_frequency(p, Level::q, k - p.k_c);
        rep.delta_omega_prime =
            sol_new.delta_omega - sol.delta_omega + ref_shift;
    }
    rep.gamma_regenerated = composition(pnew, sol_new).gamma;
    return rep;
}

// Full three-stage run with the conservation ledger:
// retained + radiative + excited + other-branch leakage + decay = initial N.
struct ProtocolResult {
    WavePacket final_packet;
    std::vector<double> per_mode_efficiency;  // (u_k u'_k')^2 per mode
    double total_efficiency = 0;
    double leakage_radiative = 0;
    double leakage_excited = 0;
    double leakage_other_branches = 0;
    double decay_loss = 0;
    double regenerated_shift = 0;  // delta_omega' of the carrier (rad/s)
    Scenario scenario = Scenario::general;
    double initial_number = 0;
    std::vector<std::string> warnings;

    double ledger_residual() const {
        const double accounted = final_packet.number() + leakage_radiative +
                                 leakage_excited + leakage_other_branches +
                                 decay_loss;
        return (initial_number - accounted) / initial_number;
    }
};

inline ProtocolResult run_protocol(const WavePacket& initial,
                                   const MediumParams& p,
                                   const ProtocolSchedule& sched,
                                   double t_final) {
    if (initial.stage != Stage::polariton)
        throw DomainError("run_protocol: initial packet must be a polariton");
    if (!(sched.t1 >= 0.0) || !(sched.t2 >= sched.t1) ||
        !(t_final >= sched.t2))
        throw DomainError("run_protocol: require 0 <= t1 <= t2 <= t_final");
    initial.validate();

    ProtocolResult res;
    res.initial_number = initial.number();

    WavePacket a = evolve_polariton_stage(initial, p, sched.t1);
    res.decay_loss += res.initial_number - a.number();

    SwitchOffResult off = switch_off_map(a, p);
    res.leakage_radiative = off.leakage.radiative;
    res.leakage_excited = off.leakage.excited;

    const WavePacket stored =
        evolve_magnon_stage(off.packet, p, sched.t2 - sched.t1);

    SwitchOnResult on = switch_on_map(stored, p, sched);
    res.leakage_other_branches = on.leakage.other_branches;

    const MediumParams pnew = with_new_control(p, sched);
    const double n_before_final = on.packet.number();
    res.final_packet =
        evolve_polariton_stage(on.packet, pnew, t_final - sched.t2);
    res.decay_loss += n_before_final - res.final_packet.number();

    res.per_mode_efficiency.resize(initial.grid.size());
    for (size_t i = 0; i < initial.grid.size(); ++i) {
        const double uu = off.u[i] * on.u_prime[i];
        res.per_mode_efficiency[i] = uu * uu;
    }
    res.total_efficiency = res.final_packet.number() / res.initial_number;

    const FwmReport fwm = fwm_analyze(p, initial.carrier_k, sched);
    res.regenerated_shift = fwm.delta_omega_prime;
    res.scenario = fwm.scenario;

    if (p.Gamma0 > 0.0 && (sched.t2 - sched.t1) * p.Gamma0 < 5.0)
        res.warnings.push_back(
            "storage time below 5 radiative lifetimes: discarded switch-off "
            "leakage is not yet fully dissipated");
    return res;
}

// E(z) = sum_k alpha_k exp(i k z): discrete Fourier sum over the grid.
// The packet peak moves at the carrier's full group velocity.
inline std::vector<Complex> real_space_envelope(const WavePacket& pkt,
                                                std::span<const double> z) {
    if (pkt.stage == Stage::magnon)
        throw DomainError(
            "real_space_envelope: defined for polariton/regenerated stages");
    std::vector<Complex> field(z.size());
    for (size_t j = 0; j < z.size(); ++j) {
        Complex e{0.0, 0.0};
        for (size_t i = 0; i < pkt.grid.size(); ++i)
            e += pkt.amps[i] * std::polar(1.0, pkt.grid[i] * z[j]);
        field[j] = e;
    }
    return field;
}

} // namespace slowpol

#endif // SLOWPOL_PROTOCOL_HPP
