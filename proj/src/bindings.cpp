#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zadnet/experiment.hpp"
#include "zadnet/network.hpp"
#include "zadnet/theory.hpp"

namespace py = pybind11;
using namespace zadnet;

namespace {

// estimate_moments over raw steady-state snapshots (one taps x N matrix per
// run); convenience wrapper so Python callers need not build MomentSample.
MomentEstimates estimate_moments_from_states(const std::vector<Eigen::MatrixXd>& states,
                                             const Eigen::VectorXd& w0,
                                             const Topology& topology) {
    const auto pairs = overlapping_pairs(topology);
    std::vector<MomentSample> samples;
    samples.reserve(states.size());
    for (const auto& w : states) samples.push_back(moment_sample(w, w0, pairs));
    return estimate_moments(samples);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ZA-ATC diffusion network simulator and steady-state theory";
    m.attr("__version__") = "0.1.0";

    py::class_<Topology>(m, "Topology")
        .def_readonly("node_count", &Topology::node_count)
        .def_readonly("edges", &Topology::edges)
        .def_readonly("neighborhoods", &Topology::neighborhoods)
        .def_readonly("positions", &Topology::positions)
        .def("degree", &Topology::degree, py::arg("k"))
        .def("has_edge", &Topology::has_edge, py::arg("i"), py::arg("j"))
        .def("__repr__", [](const Topology& t) {
            return "<Topology n=" + std::to_string(t.node_count) + " edges=" +
                   std::to_string(t.edges.size()) + ">";
        });

    m.def("generate_geometric_topology", &generate_geometric_topology, py::arg("node_count"),
          py::arg("radius"), py::arg("seed"));
    m.def("topology_from_edges", &Topology::from_edges, py::arg("node_count"), py::arg("edges"));

    py::class_<CombinationMatrix>(m, "CombinationMatrix")
        .def_readonly("coefficients", &CombinationMatrix::coefficients)
        .def_readonly("rule", &CombinationMatrix::rule)
        .def_readonly("doubly_stochastic", &CombinationMatrix::doubly_stochastic)
        .def_property_readonly("node_count", &CombinationMatrix::node_count);

    m.def("build_metropolis", &build_metropolis, py::arg("topology"));
    m.def("build_uniform", &build_uniform, py::arg("topology"));

    py::class_<SparsityProfile>(m, "SparsityProfile")
        .def_readonly("aware", &SparsityProfile::aware)
        .def_readonly("node_count", &SparsityProfile::node_count)
        .def_readonly("aware_count", &SparsityProfile::aware_count)
        .def_readonly("rho", &SparsityProfile::rho)
        .def_readonly("ib_residual", &SparsityProfile::ib_residual)
        .def("is_aware", &SparsityProfile::is_aware, py::arg("k"))
        .def("rho_vector", &SparsityProfile::rho_vector)
        .def("with_rho", &SparsityProfile::with_rho, py::arg("rho"));

    m.def("select_sparsity_set", &select_sparsity_set, py::arg("cmat"), py::arg("aware_count"),
          py::arg("rho"), py::arg("seed"), py::arg("budget") = 1'000'000,
          py::arg("restarts") = 24);
    m.def("ib_residual_of", &ib_residual_of, py::arg("cmat"), py::arg("aware_set"));

    py::class_<AssumptionReport>(m, "AssumptionReport")
        .def_readonly("row_residual", &AssumptionReport::row_residual)
        .def_readonly("ib_residual", &AssumptionReport::ib_residual)
        .def_readonly("tol", &AssumptionReport::tol)
        .def_readonly("ia_pass", &AssumptionReport::ia_pass)
        .def_readonly("ib_pass", &AssumptionReport::ib_pass)
        .def_readonly("pass_", &AssumptionReport::pass);

    m.def("validate_assumption_I", &validate_assumption_I, py::arg("cmat"), py::arg("profile"),
          py::arg("tol"));

    py::class_<SystemModel>(m, "SystemModel")
        .def(py::init([](Eigen::VectorXd w0, double su2, double sv2) {
                 SystemModel model;
                 model.w0 = std::move(w0);
                 model.sigma_u_sq = su2;
                 model.sigma_v_sq = sv2;
                 return model;
             }),
             py::arg("w0"), py::arg("sigma_u_sq"), py::arg("sigma_v_sq"))
        .def_readonly("w0", &SystemModel::w0)
        .def_readonly("sigma_u_sq", &SystemModel::sigma_u_sq)
        .def_readonly("sigma_v_sq", &SystemModel::sigma_v_sq)
        .def_property_readonly("taps", &SystemModel::taps)
        .def_property_readonly("nonzero_taps", &SystemModel::nonzero_taps);

    m.def("make_sparse_model", &make_sparse_model, py::arg("taps"), py::arg("nonzeros"),
          py::arg("sigma_u_sq"), py::arg("sigma_v_sq"), py::arg("seed"));

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init([](double mu, long iterations, std::uint64_t seed, int steady_window) {
                 SimulationConfig cfg;
                 cfg.mu = mu;
                 cfg.iterations = iterations;
                 cfg.seed = seed;
                 cfg.steady_window = steady_window;
                 return cfg;
             }),
             py::arg("mu") = 6e-3, py::arg("iterations") = 3000, py::arg("seed") = 1,
             py::arg("steady_window") = 200)
        .def_readwrite("mu", &SimulationConfig::mu)
        .def_readwrite("iterations", &SimulationConfig::iterations)
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("steady_window", &SimulationConfig::steady_window);

    py::class_<MsdTrace>(m, "MsdTrace")
        .def_readonly("values", &MsdTrace::values)
        .def_readonly("run_seed", &MsdTrace::run_seed);

    m.def(
        "run_realization",
        [](const SystemModel& model, const Topology& topology, const CombinationMatrix& cmat,
           const SparsityProfile& profile, const SimulationConfig& config) {
            return run_realization(model, topology, cmat, profile, config);
        },
        py::arg("model"), py::arg("topology"), py::arg("cmat"), py::arg("profile"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_readonly("mean_trace", &EnsembleResult::mean_trace)
        .def_readonly("steady_msd", &EnsembleResult::steady_msd)
        .def_readonly("steady_msd_db", &EnsembleResult::steady_msd_db)
        .def_readonly("run_count", &EnsembleResult::run_count)
        .def_readonly("confidence_halfwidth", &EnsembleResult::confidence_halfwidth)
        .def_readonly("run_steady", &EnsembleResult::run_steady);

    m.def("run_ensemble", &run_ensemble, py::arg("model"), py::arg("topology"), py::arg("cmat"),
          py::arg("profile"), py::arg("config"), py::arg("runs"), py::arg("workers") = 0,
          py::call_guard<py::gil_scoped_release>());

    py::class_<SteadyExtract>(m, "SteadyExtract")
        .def_readonly("steady_msd", &SteadyExtract::steady_msd)
        .def_readonly("slope_db_per_iter", &SteadyExtract::slope_db_per_iter)
        .def_readonly("converged", &SteadyExtract::converged);

    m.def("extract_steady_state", &extract_steady_state, py::arg("trace"),
          py::arg("steady_window"));

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("aware_count", &SweepCell::aware_count)
        .def_readonly("rho", &SweepCell::rho)
        .def_readonly("steady_msd", &SweepCell::steady_msd)
        .def_readonly("steady_msd_db", &SweepCell::steady_msd_db)
        .def_readonly("ci_halfwidth", &SweepCell::ci_halfwidth)
        .def_readonly("runs", &SweepCell::runs);

    py::class_<RhoMinimizer>(m, "RhoMinimizer")
        .def_readonly("rho", &RhoMinimizer::rho)
        .def_readonly("aware_count", &RhoMinimizer::aware_count)
        .def_readonly("steady_msd_db", &RhoMinimizer::steady_msd_db);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("ns_list", &SweepResult::ns_list)
        .def_readonly("rho_list", &SweepResult::rho_list)
        .def_readonly("cells", &SweepResult::cells)
        .def_readonly("minimizers", &SweepResult::minimizers)
        .def_readonly("aware_sets", &SweepResult::aware_sets)
        .def_readonly("ib_residuals", &SweepResult::ib_residuals);

    m.def("sweep_ns_rho", &sweep_ns_rho, py::arg("model"), py::arg("topology"), py::arg("cmat"),
          py::arg("ns_list"), py::arg("rho_list"), py::arg("config"), py::arg("runs"),
          py::arg("workers") = 0, py::arg("select_budget") = 1'000'000,
          py::arg("select_restarts") = 24, py::arg("keep_traces") = false,
          py::call_guard<py::gil_scoped_release>());

    // theory
    m.def(
        "msd_floor_structured",
        [](const CombinationMatrix& cmat, int taps, double mu, double su2, double sv2) {
            TheoryContext ctx{cmat.coefficients, taps, mu, su2, sv2};
            return msd_floor_structured(ctx);
        },
        py::arg("cmat"), py::arg("taps"), py::arg("mu"), py::arg("sigma_u_sq"),
        py::arg("sigma_v_sq"));
    m.def(
        "msd_floor_oracle",
        [](const CombinationMatrix& cmat, int taps, double mu, double su2, double sv2) {
            TheoryContext ctx{cmat.coefficients, taps, mu, su2, sv2};
            return msd_floor_oracle(ctx);
        },
        py::arg("cmat"), py::arg("taps"), py::arg("mu"), py::arg("sigma_u_sq"),
        py::arg("sigma_v_sq"));

    py::class_<MomentEstimates>(m, "MomentEstimates")
        .def(py::init([](double tr_theta, double tr_psi) {
                 MomentEstimates est;
                 est.tr_theta = tr_theta;
                 est.tr_psi = tr_psi;
                 est.sample_count = 1;
                 return est;
             }),
             py::arg("tr_theta"), py::arg("tr_psi"))
        .def_readonly("tr_theta", &MomentEstimates::tr_theta)
        .def_readonly("tr_psi", &MomentEstimates::tr_psi)
        .def_readonly("se_theta", &MomentEstimates::se_theta)
        .def_readonly("se_psi", &MomentEstimates::se_psi)
        .def_readonly("sample_count", &MomentEstimates::sample_count)
        .def_readonly("tr_theta_self", &MomentEstimates::tr_theta_self)
        .def_readonly("tr_theta_cross", &MomentEstimates::tr_theta_cross)
        .def_readonly("tr_psi_self", &MomentEstimates::tr_psi_self)
        .def_readonly("tr_psi_cross", &MomentEstimates::tr_psi_cross)
        .def_readonly("assumption_warning", &MomentEstimates::assumption_warning)
        .def_readonly("warning", &MomentEstimates::warning);

    m.def("estimate_moments_from_states", &estimate_moments_from_states, py::arg("states"),
          py::arg("w0"), py::arg("topology"));
    m.def("run_moment_pilot", &run_moment_pilot, py::arg("model"), py::arg("topology"),
          py::arg("cmat"), py::arg("profile"), py::arg("config"), py::arg("runs"),
          py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());

    py::class_<OptimalRho>(m, "OptimalRho")
        .def_readonly("rho_opt", &OptimalRho::rho_opt)
        .def_readonly("phi_min", &OptimalRho::phi_min);

    m.def("rho_opt_homogeneous", &rho_opt_homogeneous, py::arg("alpha_prime"),
          py::arg("beta_prime"), py::arg("node_count"));
    m.def("rho_opt_heterogeneous", &rho_opt_heterogeneous, py::arg("moments"), py::arg("mu"),
          py::arg("sigma_u_sq"), py::arg("node_count"), py::arg("aware_count"));
    m.def("phi_value", &phi_value, py::arg("tr_theta"), py::arg("tr_psi"), py::arg("mu"),
          py::arg("sigma_u_sq"), py::arg("node_count"), py::arg("aware_count"), py::arg("rho"));
    m.def("phi_curve", &phi_curve, py::arg("moments"), py::arg("mu"), py::arg("sigma_u_sq"),
          py::arg("node_count"), py::arg("aware_count"), py::arg("rho_grid"));

    py::class_<TheoryReport>(m, "TheoryReport")
        .def_readonly("msd_floor", &TheoryReport::msd_floor)
        .def_readonly("linear_coeff", &TheoryReport::linear_coeff)
        .def_readonly("quadratic_coeff", &TheoryReport::quadratic_coeff)
        .def_readonly("rho_opt", &TheoryReport::rho_opt)
        .def_readonly("phi_min", &TheoryReport::phi_min)
        .def_readonly("regime", &TheoryReport::regime)
        .def_readonly("aware_count", &TheoryReport::aware_count);

    m.def(
        "make_theory_report",
        [](const CombinationMatrix& cmat, int taps, double mu, double su2, double sv2,
           const MomentEstimates& moments, int aware_count) {
            TheoryContext ctx{cmat.coefficients, taps, mu, su2, sv2};
            return make_theory_report(ctx, moments, aware_count);
        },
        py::arg("cmat"), py::arg("taps"), py::arg("mu"), py::arg("sigma_u_sq"),
        py::arg("sigma_v_sq"), py::arg("moments"), py::arg("aware_count"));

    py::class_<TheoryComparisonRow>(m, "TheoryComparisonRow")
        .def_readonly("aware_count", &TheoryComparisonRow::aware_count)
        .def_readonly("rho", &TheoryComparisonRow::rho)
        .def_readonly("predicted_msd", &TheoryComparisonRow::predicted_msd)
        .def_readonly("predicted_db", &TheoryComparisonRow::predicted_db)
        .def_readonly("simulated_db", &TheoryComparisonRow::simulated_db)
        .def_readonly("abs_error_db", &TheoryComparisonRow::abs_error_db)
        .def_readonly("pass_", &TheoryComparisonRow::pass);

    m.def("compare_to_theory", &compare_to_theory, py::arg("sweep"), py::arg("msd_floor"),
          py::arg("moments"), py::arg("mu"), py::arg("sigma_u_sq"), py::arg("node_count"),
          py::arg("tol_db") = 1.5);
}
