// Experiment driver: `pumrun run --config file.toml [--out DIR] [--seed N]
// [--workers N] [--quiet]` executes one experiment; `pumrun catalog [--json]`
// lists the built-in meshes and fields. Exit codes: 0 success, 2 bad
// configuration, 3 numerical failure.

#include <cstdio>

#include <CLI11.hpp>

#include "experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mesh-scheme experiment harness"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    long long seed_override = -1;
    int workers_override = 0;
    bool quiet = false;
    CLI::App* run = app.add_subcommand("run", "execute an experiment from a config file");
    run->add_option("--config", config_path, "experiment config (TOML)")->required();
    run->add_option("--out", out_override, "output directory (overrides the config)");
    run->add_option("--seed", seed_override, "seed (overrides the config)");
    run->add_option("--workers", workers_override, "worker count (overrides the config)");
    run->add_flag("--quiet", quiet, "suppress progress output");

    bool as_json = false;
    CLI::App* catalog = app.add_subcommand("catalog", "list built-in meshes and fields");
    catalog->add_flag("--json", as_json, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    if (catalog->parsed()) {
        if (as_json)
            std::printf("%s\n", pumrun::catalog_json().dump(2).c_str());
        else
            std::printf("%s", pumrun::catalog_text().c_str());
        return 0;
    }

    pumrun::ExperimentConfig cfg;
    try {
        cfg = pumrun::resolve_config(pumrun::parse_config_file(config_path));
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_override >= 0) cfg.seed = static_cast<unsigned>(seed_override);
        if (workers_override > 0) cfg.workers = workers_override;
        if (quiet) cfg.quiet = true;
    } catch (const pumrun::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    try {
        pumrun::run_experiment(cfg);
    } catch (const pumrun::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
