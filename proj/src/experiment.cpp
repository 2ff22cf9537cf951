#include "zadnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zadnet {

namespace {

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

SteadyExtract extract_steady_state(const std::vector<double>& trace, int steady_window) {
    if (steady_window < 2) throw std::invalid_argument("steady_window must be >= 2");
    if (static_cast<size_t>(steady_window) > trace.size())
        throw std::invalid_argument("steady_window longer than trace");

    SteadyExtract out;
    const size_t begin = trace.size() - static_cast<size_t>(steady_window);
    double sum = 0.0;
    for (size_t i = begin; i < trace.size(); ++i) sum += trace[i];
    out.steady_msd = sum / steady_window;

    // least-squares slope of the dB curve over the window, dB per iteration
    const double n = steady_window;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < steady_window; ++i) {
        const double x = static_cast<double>(i);
        const double y = to_db(std::max(trace[begin + i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    out.slope_db_per_iter = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    out.converged = std::abs(out.slope_db_per_iter) <= 1e-4;
    return out;
}

EnsembleResult run_ensemble(const SystemModel& model, const Topology& topology,
                            const CombinationMatrix& cmat, const SparsityProfile& profile,
                            const SimulationConfig& config, int runs, int workers) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");

    std::vector<MsdTrace> traces(runs);
    parallel_for(runs, workers, [&](long r) {
        SimulationConfig run_config = config;
        run_config.seed = split_seed(config.seed, static_cast<std::uint64_t>(r));
        traces[r] = run_realization(model, topology, cmat, profile, run_config);
    });

    EnsembleResult result;
    result.run_count = runs;
    const size_t len = traces[0].values.size();
    result.mean_trace.assign(len, 0.0);
    for (int r = 0; r < runs; ++r) {  // ordered reduction: independent of scheduling
        for (size_t i = 0; i < len; ++i) result.mean_trace[i] += traces[r].values[i];
    }
    for (auto& v : result.mean_trace) v /= runs;

    const int window = std::min<long>(config.steady_window, static_cast<long>(len));
    result.steady_msd = extract_steady_state(result.mean_trace, std::max(window, 2)).steady_msd;
    result.steady_msd_db = to_db(result.steady_msd);

    result.run_steady.resize(runs);
    for (int r = 0; r < runs; ++r) {
        double sum = 0.0;
        for (size_t i = len - window; i < len; ++i) sum += traces[r].values[i];
        result.run_steady[r] = sum / window;
    }
    if (runs > 1) {
        double mean = 0.0;
        for (double v : result.run_steady) mean += v;
        mean /= runs;
        double var = 0.0;
        for (double v : result.run_steady) var += (v - mean) * (v - mean);
        var /= (runs - 1);
        result.confidence_halfwidth = 1.96 * std::sqrt(var / runs);
    }
    return result;
}

SweepResult sweep_ns_rho(const SystemModel& model, const Topology& topology,
                         const CombinationMatrix& cmat, const std::vector<int>& ns_list,
                         const std::vector<double>& rho_list, const SimulationConfig& config,
                         int runs, int workers, std::uint64_t select_budget, int select_restarts,
                         bool keep_traces) {
    for (int ns : ns_list)
        if (ns < 0 || ns > topology.node_count)
            throw std::invalid_argument("ns_list entries must lie in [0, N]");
    for (double rho : rho_list)
        if (rho < 0.0) throw std::invalid_argument("rho_list entries must be >= 0");

    SweepResult result;
    result.ns_list = ns_list;
    result.rho_list = rho_list;

    for (int ns : ns_list) {
        // placement fixed per N_s, reused across rho
        const SparsityProfile base = select_sparsity_set(
            cmat, ns, 0.0, split_seed(config.seed, 0x5e1ec70000ull + static_cast<std::uint64_t>(ns)),
            select_budget, select_restarts);
        result.aware_sets.push_back(base.aware);
        result.ib_residuals.push_back(base.ib_residual);
        for (double rho : rho_list) {
            const SparsityProfile profile = base.with_rho(rho);
            const EnsembleResult ens =
                run_ensemble(model, topology, cmat, profile, config, runs, workers);
            SweepCell cell;
            cell.aware_count = ns;
            cell.rho = rho;
            cell.steady_msd = ens.steady_msd;
            cell.steady_msd_db = ens.steady_msd_db;
            cell.ci_halfwidth = ens.confidence_halfwidth;
            cell.runs = runs;
            result.cells.push_back(cell);
            if (keep_traces) result.mean_traces.push_back(ens.mean_trace);
        }
    }

    for (size_t ri = 0; ri < rho_list.size(); ++ri) {
        RhoMinimizer best;
        best.rho = rho_list[ri];
        best.steady_msd_db = std::numeric_limits<double>::infinity();
        for (size_t ni = 0; ni < ns_list.size(); ++ni) {
            const SweepCell& cell = result.cells[ni * rho_list.size() + ri];
            if (cell.steady_msd_db < best.steady_msd_db) {
                best.steady_msd_db = cell.steady_msd_db;
                best.aware_count = cell.aware_count;
            }
        }
        result.minimizers.push_back(best);
    }
    return result;
}

std::vector<TheoryComparisonRow> compare_to_theory(const SweepResult& sweep, double msd_floor,
                                                   const MomentEstimates& moments, double mu,
                                                   double sigma_u_sq, int node_count,
                                                   double tol_db) {
    std::vector<TheoryComparisonRow> rows;
    rows.reserve(sweep.cells.size());
    for (const SweepCell& cell : sweep.cells) {
        TheoryComparisonRow row;
        row.aware_count = cell.aware_count;
        row.rho = cell.rho;
        const double phi =
            cell.aware_count > 0
                ? phi_value(moments.tr_theta, moments.tr_psi, mu, sigma_u_sq, node_count,
                            cell.aware_count, cell.rho)
                : 0.0;
        row.predicted_msd = msd_floor + phi;
        row.predicted_db = row.predicted_msd > 0.0
                               ? to_db(row.predicted_msd)
                               : -std::numeric_limits<double>::infinity();
        row.simulated_db = cell.steady_msd_db;
        row.abs_error_db = std::abs(row.predicted_db - row.simulated_db);
        row.pass = std::isfinite(row.predicted_db) && row.abs_error_db <= tol_db;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace zadnet
