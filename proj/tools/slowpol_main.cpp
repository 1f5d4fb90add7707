#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "slowpol/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw slowpol::Error("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slow-polariton calculator for EIT media: dispersion "
                 "branches, mode composition, storage/retrieval protocol "
                 "and four-wave-mixing analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    for (const char* name :
         {"dispersion", "composition", "protocol", "fwm"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key = value config file")
            ->required();
        sub->add_option("--out", out_dir, "output directory (default .)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        slowpol::RunConfig cfg = slowpol::parse_config(read_file(config_path));
        const std::string subcommand = app.get_subcommands().front()->get_name();
        if (cfg.command.empty())
            cfg.command = subcommand;
        else if (cfg.command != subcommand)
            throw slowpol::ValidationError(
                "config sets command = " + cfg.command +
                " but the CLI invoked '" + subcommand + "'");
        slowpol::run(cfg, out_dir, std::cerr);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
