#include <catch2/catch_amalgamated.hpp>

#include "slowpol/polariton.hpp"
#include "slowpol/presets.hpp"
#include "test_helpers.hpp"

using namespace slowpol;
using test_helpers::uniform;

TEST_CASE("hopfield coefficient") {
    const MediumParams p = hau2001();
    const double k0 = resonant_wavevector(p);

    SECTION("near-unity at the EIT center") {
        const BranchSolution sol = frequency_of_wavevector(p, k0, 2);
        const double u = hopfield_u(p, sol);
        const double expected = 1.0 - sol.n * sol.v_g / constants.c;
        CHECK_THAT(u * u, Catch::Matchers::WithinRel(expected, 1e-12));
        CHECK(u < 1.0);
        CHECK(u > 1.0 - 1e-7);
    }

    SECTION("photon-like far from resonance") {
        const BranchSolution sol = frequency_of_wavevector(p, 5.0 * k0, 3);
        CHECK(sol.n * sol.v_g / constants.c > 0.99);
        CHECK(hopfield_u(p, sol) < 1e-3);
    }

    SECTION("substitution value 1/sqrt(2)") {
        BranchSolution sol;
        sol.m = 2;
        sol.k = k0;
        sol.delta_omega = p.Omega_c;  // (dw/Omega_c)^2 = 1
        sol.n = 1.0;
        sol.v_g = 0.0;  // 1 - n vg/c = 1
        CHECK_THAT(hopfield_u(p, sol),
                   Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0), 1e-15));
    }

    SECTION("inconsistent solutions are rejected or clamped") {
        BranchSolution sol;
        sol.delta_omega = 0.0;
        sol.n = 1.0;
        sol.v_g = constants.c * (1.0 + 1e-6);
        CHECK_THROWS_AS(hopfield_u(p, sol), DomainError);
        sol.v_g = constants.c * (1.0 + 1e-13);
        CHECK(hopfield_u(p, sol) == 0.0);
    }
}

TEST_CASE("polariton composition") {
    const MediumParams p = hau2001();
    const double k0 = resonant_wavevector(p);

    SECTION("dark-state point has no excited content") {
        const BranchSolution sol = frequency_of_wavevector(p, k0, 2);
        const PolaritonComposition c = composition(p, sol);
        CHECK(std::abs(c.excited) < 1e-12);
        CHECK(std::abs(c.gamma) < 1e-8);
        // radiative quasiparticle fraction ~ 1e-7, amplitude ~ 3e-4
        const double rad = sol.n * sol.v_g / constants.c;
        CHECK(rad > 0.5e-7);
        CHECK(rad < 2.0e-7);
        CHECK(std::sqrt(rad) > 1e-4);
        CHECK(std::sqrt(rad) < 1e-3);
    }

    SECTION("band edge of the probe pulse") {
        // walk to the mode with dw = 0.02 Omega_c through the local slope
        const BranchSolution sol0 = frequency_of_wavevector(p, k0, 2);
        const double k = k0 + 0.02 * p.Omega_c / sol0.v_g;
        const BranchSolution sol = frequency_of_wavevector(p, k, 2);
        CHECK_THAT(sol.delta_omega / p.Omega_c,
                   Catch::Matchers::WithinRel(0.02, 1e-2));
        const PolaritonComposition c = composition(p, sol);
        CHECK_THAT(c.excited, Catch::Matchers::WithinRel(0.02, 2e-2));
    }

    SECTION("normalization residual across all branches") {
        for (int i = 0; i < 60; ++i) {
            const double k = k0 * uniform(0.3, 3.0);
            for (int m = 1; m <= 3; ++m) {
                const PolaritonComposition c =
                    composition(p, frequency_of_wavevector(p, k, m));
                CHECK(std::abs(normalization_residual(c)) < 1e-10);
            }
        }
    }

    SECTION("vacuum-photon limit closes exactly") {
        PolaritonComposition c;
        c.u = 0.0;
        c.excited = 0.0;
        c.photon_plus = 1.0;   // n = 1, v_g = c
        c.photon_minus = 0.0;
        CHECK(normalization_residual(c) == 0.0);
    }

    SECTION("corrupt composition is detectable") {
        const PolaritonComposition good =
            composition(p, frequency_of_wavevector(p, k0, 2));
        PolaritonComposition bad = good;
        bad.u *= 2.0;
        bad.excited *= 2.0;
        const double expected =
            3.0 * (good.u * good.u + good.excited * good.excited);
        CHECK_THAT(normalization_residual(bad),
                   Catch::Matchers::WithinRel(expected, 1e-9));
    }

    SECTION("spin-excitation dominance inside the EIT band") {
        // u^2 = (1 - n vg/c)/(1 + r^2), so the deficit below 1 - n vg/c is
        // bounded by r^2; within |dw| <= 0.03 Omega_c that is below 1e-3
        const BranchSolution sol0 = frequency_of_wavevector(p, k0, 2);
        for (double frac : {-0.1, -0.05, -0.03, -0.01, 0.01, 0.03, 0.05, 0.1}) {
            const double k = k0 + frac * p.Omega_c / sol0.v_g;
            const BranchSolution sol = frequency_of_wavevector(p, k, 2);
            const double r = sol.delta_omega / p.Omega_c;
            if (std::abs(r) > 0.1) continue;
            const double u = hopfield_u(p, sol);
            const double rad = sol.n * sol.v_g / constants.c;
            CHECK(u * u >= 1.0 - rad - r * r);
            if (std::abs(r) <= 0.03) CHECK(u * u >= 1.0 - rad - 1e-3);
        }
    }

    SECTION("spin weights of the three branches sum to one") {
        // completeness of the Bogoliubov transformation: the magnon
        // decomposes over the three polaritons at fixed k
        for (double f : {0.5, 1.0, 1.5, 3.0}) {
            double total = 0;
            for (int m = 1; m <= 3; ++m) {
                const double u =
                    hopfield_u(p, frequency_of_wavevector(p, f * k0, m));
                total += u * u;
            }
            CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("decay rate") {
    const MediumParams p = hau2001();
    const double k0 = resonant_wavevector(p);

    SECTION("dark state is lossless") {
        const BranchSolution sol = frequency_of_wavevector(p, k0, 2);
        const PolaritonComposition c = composition(p, sol);
        CHECK(decay_rate(p, c, Detunings{sol.delta_omega, 0.0}) < 1e-8);
    }

    SECTION("sodium loss anchor at the probe band edge") {
        const BranchSolution sol0 = frequency_of_wavevector(p, k0, 2);
        const double k = k0 + 0.02 * p.Omega_c / sol0.v_g;
        const BranchSolution sol = frequency_of_wavevector(p, k, 2);
        const PolaritonComposition c = composition(p, sol);
        const double gamma =
            decay_rate(p, c, Detunings{sol.delta_omega, 0.0});
        CHECK_THAT(gamma, Catch::Matchers::WithinRel(2.46e4, 0.05));
        const double loss = 1.0 - std::exp(-gamma * 11.8e-6);
        CHECK(loss > 0.20);
        CHECK(loss < 0.30);
    }

    SECTION("quadratic scaling in the detuning") {
        PolaritonComposition c;
        c.u = 0.9;
        const double dw = 0.01 * p.Omega_c;
        const double g1 = decay_rate(p, c, Detunings{dw, 0.0});
        const double g2 = decay_rate(p, c, Detunings{2.0 * dw, 0.0});
        CHECK_THAT(g2, Catch::Matchers::WithinRel(4.0 * g1, 1e-12));
    }

    SECTION("even in delta_omega along a symmetric branch") {
        const MediumParams q = test_helpers::beta_zero_params();
        const double kq = resonant_wavevector(q);
        // walk to matched detunings +-0.03 Omega_c on the branch
        const auto solve_at = [&](double dw_target) {
            double k = kq +
                       dw_target / frequency_of_wavevector(q, kq, 2).v_g;
            for (int it = 0; it < 6; ++it) {
                const BranchSolution s = frequency_of_wavevector(q, k, 2);
                k += (dw_target - s.delta_omega) / s.v_g;
            }
            return frequency_of_wavevector(q, k, 2);
        };
        const BranchSolution plus = solve_at(0.03 * q.Omega_c);
        const BranchSolution minus = solve_at(-0.03 * q.Omega_c);
        CHECK_THAT(plus.delta_omega,
                   Catch::Matchers::WithinRel(-minus.delta_omega, 1e-9));
        const double gp = composition(q, plus).gamma;
        const double gm = composition(q, minus).gamma;
        CHECK_THAT(gp, Catch::Matchers::WithinRel(gm, 1e-6));
        CHECK(gp > 0.0);
    }
}
