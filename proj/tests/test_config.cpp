#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "slowpol/config.hpp"
#include "slowpol/csv.hpp"
#include "slowpol/runner.hpp"

using namespace slowpol;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing") {
    SECTION("minimal preset config with defaults") {
        const RunConfig cfg = parse_config(
            "# sodium slow-light preset\n"
            "preset = hau2001\n"
            "command = dispersion\n");
        CHECK(cfg.command == "dispersion");
        CHECK(cfg.medium.x == 2.0 / 3.0);
        CHECK(cfg.medium.rho == hau2001().rho);
    }

    SECTION("explicit keys override the preset") {
        const RunConfig cfg = parse_config(
            "preset = hau2001\n"
            "Omega_c = 2.0e8\n");
        CHECK(cfg.medium.Omega_c == 2.0e8);
        CHECK(cfg.medium.rho == hau2001().rho);
    }

    SECTION("resonant-control defaults") {
        std::ostringstream text;
        const MediumParams ref = hau2001();
        text << "rho = " << format_double(ref.rho) << "\n"
             << "mu = " << format_double(ref.mu) << "\n"
             << "omega_e = " << format_double(ref.omega_e) << "\n"
             << "omega_q = " << format_double(ref.omega_q) << "\n"
             << "Omega_c = " << format_double(ref.Omega_c) << "\n"
             << "M = " << format_double(ref.M) << "\n"
             << "Gamma0 = " << format_double(ref.Gamma0) << "\n";
        const RunConfig cfg = parse_config(text.str());
        CHECK(cfg.medium.omega_c == ref.omega_e - ref.omega_q);
        CHECK(cfg.medium.k_c == cfg.medium.omega_c / constants.c);
        CHECK(cfg.medium.x == 2.0 / 3.0);
    }

    SECTION("x outside [0, 1] is rejected") {
        CHECK_THROWS_AS(
            parse_config("preset = hau2001\nx = 1.5\n"), ValidationError);
    }

    SECTION("duplicate keys name both lines") {
        try {
            parse_config("preset = hau2001\n\nt1 = 0\n# c\nt1 = 1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("t1") != std::string::npos);
            CHECK(msg.find("3") != std::string::npos);
            CHECK(msg.find("5") != std::string::npos);
        }
    }

    SECTION("unknown keys are a hard error") {
        CHECK_THROWS_AS(parse_config("preset = hau2001\nrh0 = 1e20\n"),
                        ParseError);
    }

    SECTION("malformed lines and values") {
        CHECK_THROWS_AS(parse_config("preset hau2001\n"), ParseError);
        CHECK_THROWS_AS(parse_config("preset = hau2001\nt1 = fast\n"),
                        ParseError);
        CHECK_THROWS_AS(parse_config("preset = hau2001\nsamples = 2.5\n"),
                        ParseError);
        CHECK_THROWS_AS(parse_config("preset = nope\n"), ValidationError);
    }

    SECTION("missing required keys carry their unit") {
        try {
            parse_config("mu = 2e-29\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("rho") != std::string::npos);
            CHECK(msg.find("m^-3") != std::string::npos);
        }
    }

    SECTION("negative density names the unit") {
        try {
            parse_config("preset = hau2001\nrho = -2e20\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("m^-3") != std::string::npos);
        }
    }

    SECTION("command values validated") {
        CHECK_THROWS_AS(parse_config("preset = hau2001\ncommand = disp\n"),
                        ValidationError);
        CHECK_THROWS_AS(
            parse_config("preset = hau2001\nk_min = 2e7\nk_max = 1e7\n"),
            ValidationError);
        CHECK_THROWS_AS(
            parse_config("preset = hau2001\nt1 = 2e-6\nt2 = 1e-6\n"),
            ValidationError);
    }
}

TEST_CASE("csv formatting") {
    SECTION("17 significant digits round-trip doubles") {
        for (double v : {1.0 / 3.0, 2.818e20, -1.634e3, 7.3395748542406e-08,
                         constants.hbar}) {
            const std::string s = format_double(v);
            CHECK(std::stod(s) == v);
        }
    }
}

TEST_CASE("runner determinism and outputs") {
    RunConfig cfg = parse_config(
        "preset = hau2001\ncommand = dispersion\nsamples = 24\n");

    SECTION("identical config, byte-identical csv") {
        const fs::path d1 = fresh_dir("slowpol_det1");
        const fs::path d2 = fresh_dir("slowpol_det2");
        std::ostringstream diag;
        run(cfg, d1, diag);
        run(cfg, d2, diag);
        const std::string a = slurp(d1 / "dispersion.csv");
        CHECK(a == slurp(d2 / "dispersion.csv"));
        CHECK(a.rfind("# schema=1\n", 0) == 0);
        CHECK(a.find("branch,k,omega,delta_omega,n,v_g,v_full") !=
              std::string::npos);
    }

    SECTION("composition csv carries the residual column") {
        const fs::path dir = fresh_dir("slowpol_comp");
        cfg.command = "composition";
        cfg.samples = 12;
        std::ostringstream diag;
        run(cfg, dir, diag);
        const std::string text = slurp(dir / "composition.csv");
        CHECK(text.find("normalization_residual") != std::string::npos);
    }

    SECTION("fwm degenerate single-line report") {
        const fs::path dir = fresh_dir("slowpol_fwm");
        RunConfig fcfg = parse_config(
            "preset = hau2001\ncommand = fwm\n");
        std::ostringstream diag;
        run(fcfg, dir, diag);
        const std::string text = slurp(dir / "fwm.csv");
        // schema comment + header + exactly one data row
        CHECK(std::count(text.begin(), text.end(), '\n') == 3);
        CHECK(text.find("degenerate") != std::string::npos);
        const MediumParams p = hau2001();
        const double k0 = resonant_wavevector(p);
        CHECK(text.find(format_double(k0)) != std::string::npos);
        CHECK(text.find(",0,") != std::string::npos);  // delta_omega' = 0
    }

    SECTION("dispersion csv reproduces the slow-light slope") {
        const fs::path dir = fresh_dir("slowpol_slope");
        RunConfig scfg = parse_config(
            "preset = hau2001\ncommand = dispersion\nsamples = 101\n");
        std::ostringstream diag;
        run(scfg, dir, diag);
        std::ifstream in(dir / "dispersion.csv");
        std::string line;
        std::getline(in, line);  // schema
        std::getline(in, line);  // header
        // slow-branch rows bracketing delta_omega = 0
        double prev_k = 0, prev_omega = 0, prev_dw = 0;
        bool have_prev = false;
        double slope = 0;
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string field;
            std::getline(row, field, ',');
            if (field != "2") continue;
            std::getline(row, field, ',');
            const double k = std::stod(field);
            std::getline(row, field, ',');
            const double omega = std::stod(field);
            std::getline(row, field, ',');
            const double dw = std::stod(field);
            if (have_prev && prev_dw < 0.0 && dw >= 0.0)
                slope = (omega - prev_omega) / (k - prev_k);
            prev_k = k;
            prev_omega = omega;
            prev_dw = dw;
            have_prev = true;
        }
        REQUIRE(slope > 0.0);
        CHECK(slope / constants.c > 0.5e-7);
        CHECK(slope / constants.c < 2.0e-7);
    }

    SECTION("reverted protocol envelope moves backwards in the csv") {
        const fs::path dir = fresh_dir("slowpol_rev");
        std::ostringstream text;
        text << "preset = hau2001\ncommand = protocol\n"
             << "bandwidth_ratio = 0.01\npacket_samples = 65\n"
             << "t1 = 0\nt2 = 1e-6\nt_final = 1.2e-6\nz_samples = 512\n"
             << "new_k_c = " << format_double(-hau2001().k_c) << "\n";
        std::ostringstream diag;
        run(parse_config(text.str()), dir, diag);
        std::ifstream in(dir / "protocol_envelope.csv");
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        // peak position per time block
        std::map<double, std::pair<double, double>> peak;  // t -> (|E|, z)
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string field;
            std::getline(row, field, ',');
            const double t = std::stod(field);
            std::getline(row, field, ',');
            const double z = std::stod(field);
            std::getline(row, field, ',');
            std::getline(row, field, ',');
            std::getline(row, field, ',');
            const double abs_e = std::stod(field);
            auto& best = peak[t];
            if (abs_e > best.first) best = {abs_e, z};
        }
        REQUIRE(peak.size() == 3);  // t = 0, t2, t_final
        auto it = peak.begin();
        ++it;
        const double z_at_switch_on = it->second.second;
        ++it;
        const double z_at_end = it->second.second;
        CHECK(z_at_end < z_at_switch_on);  // moves backwards
    }

    SECTION("protocol outputs all four files") {
        const fs::path dir = fresh_dir("slowpol_proto");
        RunConfig pcfg = parse_config(
            "preset = hau2001\ncommand = protocol\n"
            "bandwidth_ratio = 0.01\npacket_samples = 33\n"
            "t1 = 0\nt2 = 1e-6\nt_final = 1.2e-6\nz_samples = 64\n");
        std::ostringstream diag;
        run(pcfg, dir, diag);
        CHECK(fs::exists(dir / "protocol_trace.csv"));
        CHECK(fs::exists(dir / "protocol_envelope.csv"));
        CHECK(fs::exists(dir / "protocol_summary.csv"));
        const std::string trace = slurp(dir / "protocol_trace.csv");
        CHECK(trace.find("polariton") != std::string::npos);
        CHECK(trace.find("magnon") != std::string::npos);
        CHECK(trace.find("regenerated") != std::string::npos);
    }
}

#ifdef SLOWPOL_CLI_PATH
TEST_CASE("cli binary error contract") {
    const fs::path dir = fresh_dir("slowpol_cli");
    const fs::path cfg = dir / "bad.cfg";
    const fs::path err_file = dir / "stderr.txt";

    SECTION("invalid config exits nonzero with one error line") {
        std::ofstream(cfg) << "preset = hau2001\nx = 1.5\n";
        std::ostringstream cmd;
        cmd << SLOWPOL_CLI_PATH << " dispersion --config " << cfg.string()
            << " --out " << dir.string() << " 2> " << err_file.string();
        const int rc = std::system(cmd.str().c_str());
        CHECK(rc != 0);
        const std::string err = slurp(err_file);
        CHECK(err.rfind("error: ", 0) == 0);
        CHECK(std::count(err.begin(), err.end(), '\n') == 1);
    }

    SECTION("successful run exits zero and writes the csv") {
        std::ofstream(cfg) << "preset = hau2001\ncommand = fwm\n";
        std::ostringstream cmd;
        cmd << SLOWPOL_CLI_PATH << " fwm --config " << cfg.string()
            << " --out " << dir.string() << " 2> " << err_file.string();
        const int rc = std::system(cmd.str().c_str());
        CHECK(rc == 0);
        CHECK(fs::exists(dir / "fwm.csv"));
    }

    SECTION("command mismatch between config and argv") {
        std::ofstream(cfg) << "preset = hau2001\ncommand = protocol\n";
        std::ostringstream cmd;
        cmd << SLOWPOL_CLI_PATH << " fwm --config " << cfg.string()
            << " --out " << dir.string() << " 2> " << err_file.string();
        const int rc = std::system(cmd.str().c_str());
        CHECK(rc != 0);
        CHECK(slurp(err_file).rfind("error: ", 0) == 0);
    }
}
#endif
