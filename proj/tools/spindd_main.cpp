#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spindd/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spindd - structure-preserving finite-volume solver for the spin "
                 "drift-diffusion-Poisson system"};
    app.require_subcommand(1);

    spindd::CliOptions opts;
    std::string config_path;
    std::string sweep_param;
    std::string values_csv;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run configuration file")->required();
        cmd->add_option("--out", opts.out_override, "Output directory (overrides [output])");
        cmd->add_option("--threads", opts.threads, "Worker thread count")->check(CLI::PositiveNumber);
        cmd->add_flag("--quiet", opts.quiet, "Suppress progress output");
    };

    CLI::App* run = app.add_subcommand("run", "Steady solve followed by the transient simulation");
    add_common(run);
    CLI::App* steady = app.add_subcommand("steady", "Stationary drift-diffusion-Poisson solve");
    add_common(steady);
    CLI::App* scl = app.add_subcommand("scale", "Physical-to-dimensionless parameter report");
    add_common(scl);
    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep, one simulation per value");
    add_common(sweep);
    sweep->add_option("--param", sweep_param, "Swept parameter: delta, tau or p")->required();
    sweep->add_option("--values", values_csv, "Comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : spindd::exit_code::config_error;
    }

    if (run->parsed()) return spindd::cmd_run(config_path, opts);
    if (steady->parsed()) return spindd::cmd_steady(config_path, opts);
    if (scl->parsed()) return spindd::cmd_scale(config_path, opts, std::cout);
    if (sweep->parsed()) {
        std::vector<double> values;
        std::string tok;
        std::istringstream in(values_csv);
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            try {
                values.push_back(std::stod(tok));
            } catch (const std::exception&) {
                std::cerr << "error: bad sweep value '" << tok << "'\n";
                return spindd::exit_code::config_error;
            }
        }
        return spindd::cmd_sweep(config_path, sweep_param, values, opts);
    }
    return spindd::exit_code::config_error;
}
