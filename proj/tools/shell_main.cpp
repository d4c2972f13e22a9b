#include <iostream>

#include <CLI11.hpp>

#include "cshell/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cosserat shell solver"};
    cshell::CliOptions opt;
    std::string state, out;
    app.add_option("command", opt.command, "geometry | energy | minimize | gamma-sweep | verify | export")
        ->required()
        ->check(CLI::IsMember({"geometry", "energy", "minimize", "gamma-sweep", "verify", "export"}));
    app.add_option("--config", opt.config, "TOML run configuration")->required();
    app.add_option("--state", state, "state file (initial guess or state to evaluate)");
    app.add_option("--out", out, "output directory (overrides output.dir)");
    app.add_option("--threads", opt.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_flag("--bless", opt.bless, "rewrite the golden file instead of comparing against it");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cshell::kExitConfig;
    }
    if (!state.empty()) opt.state = state;
    if (!out.empty()) opt.out = out;
    return cshell::run_cli(opt, std::cout, std::cerr);
}
