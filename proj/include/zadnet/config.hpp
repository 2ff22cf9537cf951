#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zadnet {

/// One JSON document drives every command. Every field has a default; the
/// empty document {} reproduces the desk-scale reference experiment.
/// Unknown keys are rejected.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::string out_dir = "results";

    // model
    int taps = 128;
    int w0_nonzeros = 1;
    double sigma_u_sq = 1.0;
    double sigma_v_sq = 1e-4;

    // network
    int nodes = 30;
    double radius = 0.25;
    std::string rule = "metropolis";  // "metropolis" | "uniform"
    std::string network_file;         // load instead of generating when set

    // sim
    double mu = 6e-3;
    long iterations = 3000;
    int steady_window = 200;

    // sweep
    std::vector<int> ns_list = {0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
    std::vector<double> rho_list = {2e-6, 4e-6, 6e-6, 1e-5, 2e-5, 4e-5};
    int runs = 100;
    bool write_traces = false;

    // single-cell ensemble command
    int ensemble_ns = 30;
    double ensemble_rho = 0.0;

    // theory
    int pilot_runs = 30;
    double pilot_rho = 0.0;
    int rho_grid_points = 121;
    double compare_tol_db = 1.5;

    // sparsity-set selection
    std::uint64_t select_budget = 1'000'000;
    int select_restarts = 24;

    double assumption_tol = 1e-12;
};

/// Parse + validate a config document (strict: unknown keys are errors).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Deterministic canonical rendering (fixed key order, 17 significant
/// digits); hashing this string yields the config hash embedded in outputs.
std::string canonical_config_json(const ExperimentConfig& config);

/// FNV-1a 64-bit over the canonical rendering, as a 16-digit hex string.
std::string config_hash(const ExperimentConfig& config);

/// --paper-scale: runs = 1000, ns_list = 0..N.
void apply_paper_scale(ExperimentConfig& config);

}  // namespace zadnet
