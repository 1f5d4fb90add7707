#ifndef SLOWPOL_RUNNER_HPP
#define SLOWPOL_RUNNER_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "slowpol/config.hpp"
#include "slowpol/csv.hpp"
#include "slowpol/protocol.hpp"

namespace slowpol {

namespace detail {

inline void warn_validity(const MediumParams& p, double worst_dw,
                          std::ostream& diag) {
    if (worst_dw > p.detuning_warn_ratio * p.omega_c)
        diag << "warning: |delta_omega| up to " << worst_dw
             << " rad/s exceeds the polarizability validity threshold "
             << p.detuning_warn_ratio * p.omega_c << " rad/s\n";
}

inline void resolve_sweep_range(const MediumParams& p, RunConfig& cfg) {
    if (std::isnan(cfg.k_min) || std::isnan(cfg.k_max)) {
        const double k0 = resonant_wavevector(p);
        if (std::isnan(cfg.k_min)) cfg.k_min = 0.6 * k0;
        if (std::isnan(cfg.k_max)) cfg.k_max = 1.4 * k0;
        if (cfg.k_min > cfg.k_max) std::swap(cfg.k_min, cfg.k_max);
    }
}

// weighted std of |alpha|^2 in k, for sizing the envelope z-range
inline double packet_sigma_k(const WavePacket& pkt) {
    if (pkt.grid.size() < 2) return 0.0;
    double wsum = 0, mean = 0;
    for (size_t i = 0; i < pkt.grid.size(); ++i) {
        const double w = std::norm(pkt.amps[i]);
        wsum += w;
        mean += w * pkt.grid[i];
    }
    mean /= wsum;
    double var = 0;
    for (size_t i = 0; i < pkt.grid.size(); ++i)
        var += std::norm(pkt.amps[i]) * (pkt.grid[i] - mean) *
               (pkt.grid[i] - mean);
    return std::sqrt(var / wsum);
}

inline void write_trace_rows(CsvWriter& csv, const WavePacket& pkt) {
    for (size_t i = 0; i < pkt.grid.size(); ++i)
        csv.row(to_string(pkt.stage), pkt.time, pkt.grid[i],
                pkt.amps[i].real(), pkt.amps[i].imag(),
                std::norm(pkt.amps[i]));
}

inline void write_envelope_rows(CsvWriter& csv, const WavePacket& pkt,
                                std::span<const double> z) {
    const std::vector<Complex> field = real_space_envelope(pkt, z);
    for (size_t j = 0; j < z.size(); ++j)
        csv.row(pkt.time, z[j], field[j].real(), field[j].imag(),
                std::abs(field[j]));
}

} // namespace detail

inline void run_dispersion(const RunConfig& cfg_in,
                           const std::filesystem::path& out_dir,
                           std::ostream& diag) {
    RunConfig cfg = cfg_in;
    detail::resolve_sweep_range(cfg.medium, cfg);
    const DispersionSweep sweep =
        dispersion_sweep(cfg.medium, cfg.k_min, cfg.k_max, cfg.samples);
    CsvWriter csv(out_dir / "dispersion.csv",
                  "branch,k,omega,delta_omega,n,v_g,v_full");
    double worst = 0;
    for (const BranchSolution& s : sweep.points) {
        csv.row(s.m, s.k, s.omega, s.delta_omega, s.n, s.v_g, s.v_full);
        worst = std::max(worst, std::abs(s.delta_omega));
    }
    for (const SweepFailure& f : sweep.failures)
        diag << "warning: branch " << f.m << " at k = " << f.k << ": "
             << f.message << "\n";
    detail::warn_validity(cfg.medium, worst, diag);
}

inline void run_composition(const RunConfig& cfg_in,
                            const std::filesystem::path& out_dir,
                            std::ostream& diag) {
    RunConfig cfg = cfg_in;
    detail::resolve_sweep_range(cfg.medium, cfg);
    const DispersionSweep sweep =
        dispersion_sweep(cfg.medium, cfg.k_min, cfg.k_max, cfg.samples);
    CsvWriter csv(out_dir / "composition.csv",
                  "branch,k,delta_omega,u,photon_plus,photon_minus,excited,"
                  "gamma,normalization_residual");
    double worst = 0;
    for (const BranchSolution& s : sweep.points) {
        const PolaritonComposition c = composition(cfg.medium, s);
        csv.row(s.m, s.k, s.delta_omega, c.u, c.photon_plus, c.photon_minus,
                c.excited, c.gamma, normalization_residual(c));
        worst = std::max(worst, std::abs(s.delta_omega));
    }
    for (const SweepFailure& f : sweep.failures)
        diag << "warning: branch " << f.m << " at k = " << f.k << ": "
             << f.message << "\n";
    detail::warn_validity(cfg.medium, worst, diag);
}

inline void run_protocol_command(const RunConfig& cfg_in,
                                 const std::filesystem::path& out_dir,
                                 std::ostream& diag) {
    RunConfig cfg = cfg_in;
    const MediumParams& p = cfg.medium;
    if (std::isnan(cfg.carrier_k)) cfg.carrier_k = resonant_wavevector(p);
    if (std::isnan(cfg.new_Omega_c)) cfg.new_Omega_c = p.Omega_c;
    if (std::isnan(cfg.new_k_c)) cfg.new_k_c = p.k_c;
    if (std::isnan(cfg.t_final)) cfg.t_final = cfg.t2 + 2.0e-7;

    const WavePacket initial =
        gaussian_packet(p, cfg.carrier_k, cfg.bandwidth_ratio,
                        cfg.packet_samples);
    const ProtocolSchedule sched{cfg.t1, cfg.t2, cfg.new_Omega_c,
                                 cfg.new_k_c};
    const MediumParams pnew = with_new_control(p, sched);

    // stage-boundary snapshots for the trace
    const WavePacket at_t1 = evolve_polariton_stage(initial, p, cfg.t1);
    const SwitchOffResult off = switch_off_map(at_t1, p);
    const WavePacket stored =
        evolve_magnon_stage(off.packet, p, cfg.t2 - cfg.t1);
    const SwitchOnResult on = switch_on_map(stored, p, sched);
    const WavePacket final_pkt =
        evolve_polariton_stage(on.packet, pnew, cfg.t_final - cfg.t2);

    const ProtocolResult res = run_protocol(initial, p, sched, cfg.t_final);
    for (const std::string& w : res.warnings) diag << "warning: " << w << "\n";

    CsvWriter trace(out_dir / "protocol_trace.csv",
                    "stage,t,k,re_alpha,im_alpha,weight");
    detail::write_trace_rows(trace, initial);
    detail::write_trace_rows(trace, at_t1);
    detail::write_trace_rows(trace, off.packet);
    detail::write_trace_rows(trace, stored);
    detail::write_trace_rows(trace, on.packet);
    detail::write_trace_rows(trace, final_pkt);

    // envelope snapshots: initial, at switch-on, final
    const double sigma_k = detail::packet_sigma_k(initial);
    const double sigma_z = sigma_k > 0.0 ? 1.0 / (std::sqrt(2.0) * sigma_k)
                                         : 1.0e-4;
    const double p1 = full_group_velocity(
                          p, frequency_of_wavevector(p, cfg.carrier_k, 2)) *
                      cfg.t1;
    const double p2 =
        p1 + full_group_velocity(
                 pnew, frequency_of_wavevector(pnew, on.packet.carrier_k, 2)) *
                 (cfg.t_final - cfg.t2);
    const double z_lo = std::min({0.0, p1, p2}) - 8.0 * sigma_z;
    const double z_hi = std::max({0.0, p1, p2}) + 8.0 * sigma_z;
    std::vector<double> z(static_cast<size_t>(cfg.z_samples));
    for (int j = 0; j < cfg.z_samples; ++j)
        z[static_cast<size_t>(j)] =
            z_lo + (z_hi - z_lo) * static_cast<double>(j) /
                       static_cast<double>(cfg.z_samples - 1);
    CsvWriter env(out_dir / "protocol_envelope.csv", "t,z,re_E,im_E,abs_E");
    detail::write_envelope_rows(env, initial, z);
    detail::write_envelope_rows(env, on.packet, z);
    detail::write_envelope_rows(env, final_pkt, z);

    CsvWriter summary(out_dir / "protocol_summary.csv",
                      "scenario,initial_number,total_efficiency,"
                      "leakage_radiative,leakage_excited,"
                      "leakage_other_branches,decay_loss,regenerated_shift,"
                      "ledger_residual");
    summary.row(to_string(res.scenario), res.initial_number,
                res.total_efficiency, res.leakage_radiative,
                res.leakage_excited, res.leakage_other_branches,
                res.decay_loss, res.regenerated_shift, res.ledger_residual());
}

inline void run_fwm(const RunConfig& cfg_in,
                    const std::filesystem::path& out_dir, std::ostream&) {
    RunConfig cfg = cfg_in;
    const MediumParams& p = cfg.medium;
    if (std::isnan(cfg.probe_k)) cfg.probe_k = resonant_wavevector(p);
    if (std::isnan(cfg.new_Omega_c)) cfg.new_Omega_c = p.Omega_c;
    if (std::isnan(cfg.new_k_c)) cfg.new_k_c = p.k_c;
    const ProtocolSchedule sched{cfg.t1, cfg.t2, cfg.new_Omega_c,
                                 cfg.new_k_c};
    const FwmReport rep = fwm_analyze(p, cfg.probe_k, sched);
    CsvWriter csv(out_dir / "fwm.csv",
                  "scenario,k,k_c,new_k_c,k_prime,delta_omega_prime,"
                  "gamma_regenerated");
    csv.row(to_string(rep.scenario), rep.k, p.k_c, cfg.new_k_c, rep.k_prime,
            rep.delta_omega_prime, rep.gamma_regenerated);
}

// Dispatch on cfg.command; output files land in out_dir (created if
// absent). Warnings go to diag; errors propagate as exceptions.
inline void run(const RunConfig& cfg, const std::filesystem::path& out_dir,
                std::ostream& diag) {
    std::filesystem::create_directories(out_dir);
    if (cfg.command == "dispersion")
        run_dispersion(cfg, out_dir, diag);
    else if (cfg.command == "composition")
        run_composition(cfg, out_dir, diag);
    else if (cfg.command == "protocol")
        run_protocol_command(cfg, out_dir, diag);
    else if (cfg.command == "fwm")
        run_fwm(cfg, out_dir, diag);
    else
        throw ValidationError("no command selected (expected dispersion, "
                              "composition, protocol or fwm)");
}

} // namespace slowpol

#endif // SLOWPOL_RUNNER_HPP
