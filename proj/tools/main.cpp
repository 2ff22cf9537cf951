#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "zadnet/commands.hpp"
#include "zadnet/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zadnet: sparse distributed estimation over diffusion adaptive networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    bool paper_scale = false;

    app.add_option("--config", config_path, "experiment config JSON file");
    app.add_option("--out", out_dir, "output directory (overrides config out_dir)");
    app.add_option("--seed", seed, "master seed (overrides config seed)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--workers", workers, "worker thread bound (0 = hardware concurrency)");
    app.add_flag("--paper-scale", paper_scale,
                 "full-paper scale: 1000 runs, ns_list = 0..N");

    auto* generate = app.add_subcommand("generate", "write the network + combiner JSON");
    auto* sweep = app.add_subcommand("sweep", "run the (N_s, rho) Monte Carlo grid");
    auto* ensemble = app.add_subcommand("ensemble", "run one (N_s, rho) ensemble");
    auto* theory = app.add_subcommand("theory", "closed-form floor, moments and rho_opt");
    auto* validate = app.add_subcommand("validate", "Assumption I checks");

    CLI11_PARSE(app, argc, argv);

    try {
        zadnet::ExperimentConfig cfg = config_path.empty()
                                           ? zadnet::ExperimentConfig{}
                                           : zadnet::load_config_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (paper_scale) zadnet::apply_paper_scale(cfg);

        if (generate->parsed()) return zadnet::cmd_generate(cfg, workers);
        if (sweep->parsed()) return zadnet::cmd_sweep(cfg, workers);
        if (ensemble->parsed()) return zadnet::cmd_ensemble(cfg, workers);
        if (theory->parsed()) return zadnet::cmd_theory(cfg, workers);
        if (validate->parsed()) return zadnet::cmd_validate(cfg, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
