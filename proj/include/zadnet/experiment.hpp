#pragma once

#include <cstdint>
#include <vector>

#include "zadnet/diffusion.hpp"
#include "zadnet/network.hpp"
#include "zadnet/parallel.hpp"
#include "zadnet/theory.hpp"

namespace zadnet {

struct EnsembleResult {
    std::vector<double> mean_trace;
    double steady_msd = 0.0;
    double steady_msd_db = 0.0;
    int run_count = 0;
    double confidence_halfwidth = 0.0;   // 95% half-width on steady_msd
    std::vector<double> run_steady;      // per-run trailing-window means
};

/// `runs` independent realizations; run r uses the substream
/// split(config.seed, r), so results do not depend on worker count or
/// scheduling. Divergence in any run is reported with that run's seed.
EnsembleResult run_ensemble(const SystemModel& model, const Topology& topology,
                            const CombinationMatrix& cmat, const SparsityProfile& profile,
                            const SimulationConfig& config, int runs, int workers = 0);

struct SteadyExtract {
    double steady_msd = 0.0;
    double slope_db_per_iter = 0.0;
    bool converged = false;  // |slope| <= 1e-4 dB/iteration over the window
};

SteadyExtract extract_steady_state(const std::vector<double>& trace, int steady_window);

struct SweepCell {
    int aware_count = 0;
    double rho = 0.0;
    double steady_msd = 0.0;
    double steady_msd_db = 0.0;
    double ci_halfwidth = 0.0;
    int runs = 0;
};

struct RhoMinimizer {
    double rho = 0.0;
    int aware_count = 0;      // N_s*; smallest N_s wins ties
    double steady_msd_db = 0.0;
};

struct SweepResult {
    std::vector<int> ns_list;
    std::vector<double> rho_list;
    std::vector<SweepCell> cells;            // ns-major, rho-minor order
    std::vector<RhoMinimizer> minimizers;    // one per rho
    std::vector<std::vector<int>> aware_sets;     // per ns
    std::vector<double> ib_residuals;             // per ns
    std::vector<std::vector<double>> mean_traces; // per cell; empty unless kept

    const SweepCell& cell(int ns_index, int rho_index) const {
        return cells[static_cast<size_t>(ns_index) * rho_list.size() + rho_index];
    }
};

/// Full (N_s, rho) grid. The aware-node placement is selected once per N_s
/// and reused for every rho; run seed schedules depend only on config.seed,
/// so every cell sees identical measurement streams (common random numbers).
SweepResult sweep_ns_rho(const SystemModel& model, const Topology& topology,
                         const CombinationMatrix& cmat, const std::vector<int>& ns_list,
                         const std::vector<double>& rho_list, const SimulationConfig& config,
                         int runs, int workers = 0, std::uint64_t select_budget = 1'000'000,
                         int select_restarts = 24, bool keep_traces = false);

struct TheoryComparisonRow {
    int aware_count = 0;
    double rho = 0.0;
    double predicted_msd = 0.0;   // msd_floor + phi(rho)
    double predicted_db = 0.0;
    double simulated_db = 0.0;
    double abs_error_db = 0.0;
    bool pass = false;
};

/// Per-cell predicted (floor + phi) vs simulated steady MSD, in dB.
std::vector<TheoryComparisonRow> compare_to_theory(const SweepResult& sweep, double msd_floor,
                                                   const MomentEstimates& moments, double mu,
                                                   double sigma_u_sq, int node_count,
                                                   double tol_db = 1.5);

}  // namespace zadnet
