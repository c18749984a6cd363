#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "infocontract/error.hpp"

namespace cli = infocontract::cli;

int main(int argc, char** argv) {
    CLI::App app{"Optimal information-acquisition contracts: analysis, solving and verification"};
    app.footer("Config defaults (every key optional):\n" + cli::default_config_json().dump(2));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string density;
    std::string cost;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<int> dimension;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (default: output.dir of the config, else ./out)");
    app.add_option("--seed", seed, "Seed for the brute-force restarts and random transfers");
    app.add_option("--threads", threads, "Worker threads for scans and enumerations");
    app.add_option("--density", density, "Density family name, or a JSON object like the config's density section");
    app.add_option("--cost", cost, "Cost kind name with default parameters, or a JSON object like the config's cost section");
    app.add_option("--dim", dimension, "Dimension of the signal");

    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "Elasticity table (elasticity.csv) and condition report (condition.json)"},
        {"solve", "Optimal cutoff (solve.json, scan.csv with output.scan_csv)"},
        {"verify", "Brute-force certification and the cutoff improvement pipeline (verify.json)"},
        {"refute", "Counterexample against cutoff optimality under the tangent cost (refute.json)"},
        {"sweep", "Expected transfer surface (surface.csv) and the boundary curve (boundary.csv)"},
        {"compare", "Comparative statics under a scaled cost (compare.json)"},
    };
    for (const auto& [name, description] : commands) {
        app.add_subcommand(name, description)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::ExitCode::success : cli::ExitCode::config_error;
    }

    cli::RunConfig config;
    try {
        if (!config_path.empty()) {
            config = cli::load_config(config_path);
        }
        if (!density.empty()) cli::override_density(config, density);
        if (dimension) cli::override_dimension(config, *dimension);
        if (!cost.empty()) cli::override_cost(config, cost);
        if (seed) cli::override_seed(config, *seed);
        if (threads) cli::override_threads(config, *threads);
        if (!out_dir.empty()) config.out = out_dir;
    } catch (const infocontract::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::ExitCode::config_error;
    }

    const cli::Command command = cli::parse_command(app.get_subcommands().front()->get_name());
    return cli::run_guarded(command, config, std::cout, std::cerr);
}
