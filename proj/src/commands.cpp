#include "zadnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zadnet/experiment.hpp"
#include "zadnet/jsonout.hpp"
#include "zadnet/svg.hpp"
#include "zadnet/theory.hpp"

namespace zadnet {

namespace {
namespace fs = std::filesystem;
}

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
    PreparedExperiment wb;
    if (!cfg.network_file.empty()) {
        std::ifstream in(cfg.network_file);
        if (!in) throw std::runtime_error("cannot open network file: " + cfg.network_file);
        std::stringstream buf;
        buf << in.rdbuf();
        auto loaded = network_from_json(buf.str());
        wb.topology = std::move(loaded.first);
        wb.cmat = std::move(loaded.second);
    } else {
        wb.topology = generate_geometric_topology(cfg.nodes, cfg.radius,
                                                  split_seed(cfg.seed, 0x709000u));
        wb.cmat = cfg.rule == "uniform" ? build_uniform(wb.topology)
                                        : build_metropolis(wb.topology);
    }
    wb.model = make_sparse_model(cfg.taps, cfg.w0_nonzeros, cfg.sigma_u_sq, cfg.sigma_v_sq,
                                 split_seed(cfg.seed, 0x300de1u));
    wb.sim.mu = cfg.mu;
    wb.sim.iterations = cfg.iterations;
    wb.sim.steady_window = cfg.steady_window;
    wb.sim.seed = cfg.seed;
    wb.hash = config_hash(cfg);
    for (const auto& w : wb.sim.warnings(cfg.sigma_u_sq))
        std::cerr << "warning: " << w << "\n";
    return wb;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string provenance_comment(const PreparedExperiment& wb, const ExperimentConfig& cfg) {
    return "# config_hash=" + wb.hash + " seed=" + std::to_string(cfg.seed) + "\n";
}

JsonValue provenance_json(const PreparedExperiment& wb, const ExperimentConfig& cfg) {
    JsonValue p = JsonValue::object();
    p.set("config_hash", JsonValue::str(wb.hash));
    p.set("seed", JsonValue::uinteger(cfg.seed));
    return p;
}

JsonValue assumption_json(const AssumptionReport& report) {
    JsonValue r = JsonValue::object();
    r.set("row_residual", JsonValue::num(report.row_residual));
    r.set("ib_residual", JsonValue::num(report.ib_residual));
    r.set("tol", JsonValue::num(report.tol));
    r.set("ia_pass", JsonValue::boolean(report.ia_pass));
    r.set("ib_pass", JsonValue::boolean(report.ib_pass));
    r.set("pass", JsonValue::boolean(report.pass));
    return r;
}

JsonValue int_array(const std::vector<int>& values) {
    JsonValue a = JsonValue::array();
    for (int v : values) a.push(JsonValue::integer(v));
    return a;
}

// Assumption-I report across the configured ns_list (I.A is set-independent,
// I.B is reported per candidate N_s).
JsonValue assumption_report_doc(const PreparedExperiment& wb, const ExperimentConfig& cfg) {
    JsonValue doc = JsonValue::object();
    doc.set("provenance", provenance_json(wb, cfg));
    doc.set("rule", JsonValue::str(wb.cmat.rule));
    doc.set("doubly_stochastic", JsonValue::boolean(wb.cmat.doubly_stochastic));
    doc.set("row_residual", JsonValue::num(row_stochasticity_residual(wb.cmat)));
    doc.set("tol", JsonValue::num(cfg.assumption_tol));
    JsonValue per_ns = JsonValue::array();
    for (int ns : cfg.ns_list) {
        const SparsityProfile profile = select_sparsity_set(
            wb.cmat, ns, 0.0, split_seed(cfg.seed, 0x5e1ec70000ull + static_cast<std::uint64_t>(ns)),
            cfg.select_budget, cfg.select_restarts);
        const AssumptionReport report =
            validate_assumption_I(wb.cmat, profile, cfg.assumption_tol);
        JsonValue row = JsonValue::object();
        row.set("ns", JsonValue::integer(ns));
        row.set("aware_set", int_array(profile.aware));
        row.set("report", assumption_json(report));
        per_ns.push(std::move(row));
    }
    doc.set("per_ns", std::move(per_ns));
    return doc;
}

std::string rho_label(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rho=%g", rho);
    return buf;
}

}  // namespace

int cmd_generate(const ExperimentConfig& cfg, int workers) {
    (void)workers;
    const PreparedExperiment wb = prepare_experiment(cfg);
    const fs::path out(cfg.out_dir);
    write_file(out / "network.json", network_to_json(wb.topology, wb.cmat));
    write_file(out / "assumption_report.json", assumption_report_doc(wb, cfg).dump());
    std::cout << "wrote " << (out / "network.json").string() << " ("
              << wb.topology.node_count << " nodes, " << wb.topology.edges.size()
              << " edges, rule " << wb.cmat.rule << ")\n";
    return 0;
}

int cmd_validate(const ExperimentConfig& cfg, int workers) {
    (void)workers;
    const PreparedExperiment wb = prepare_experiment(cfg);
    const JsonValue doc = assumption_report_doc(wb, cfg);
    write_file(fs::path(cfg.out_dir) / "assumption_report.json", doc.dump());
    std::cout << doc.dump();
    return 0;
}

int cmd_ensemble(const ExperimentConfig& cfg, int workers) {
    const PreparedExperiment wb = prepare_experiment(cfg);
    const SparsityProfile profile =
        select_sparsity_set(wb.cmat, cfg.ensemble_ns, cfg.ensemble_rho,
                            split_seed(cfg.seed, 0x5e1ec70000ull +
                                                     static_cast<std::uint64_t>(cfg.ensemble_ns)),
                            cfg.select_budget, cfg.select_restarts)
            .with_rho(cfg.ensemble_rho);
    const EnsembleResult ens =
        run_ensemble(wb.model, wb.topology, wb.cmat, profile, wb.sim, cfg.runs, workers);
    const SteadyExtract extract = extract_steady_state(
        ens.mean_trace, std::min<long>(cfg.steady_window, static_cast<long>(ens.mean_trace.size())));

    const fs::path out(cfg.out_dir);
    {
        std::string csv = provenance_comment(wb, cfg);
        csv += "iteration,msd\n";
        for (size_t i = 0; i < ens.mean_trace.size(); ++i)
            csv += std::to_string(i) + "," + format_double(ens.mean_trace[i]) + "\n";
        write_file(out / "ensemble_trace.csv", csv);
    }
    {
        JsonValue doc = JsonValue::object();
        doc.set("provenance", provenance_json(wb, cfg));
        doc.set("ns", JsonValue::integer(cfg.ensemble_ns));
        doc.set("rho", JsonValue::num(cfg.ensemble_rho));
        doc.set("runs", JsonValue::integer(ens.run_count));
        doc.set("steady_msd", JsonValue::num(ens.steady_msd));
        doc.set("steady_msd_db", JsonValue::num(ens.steady_msd_db));
        doc.set("ci_halfwidth", JsonValue::num(ens.confidence_halfwidth));
        doc.set("slope_db_per_iter", JsonValue::num(extract.slope_db_per_iter));
        doc.set("converged", JsonValue::boolean(extract.converged));
        write_file(out / "ensemble.json", doc.dump());
    }
    {
        svg::Series curve;
        curve.label = rho_label(cfg.ensemble_rho) + std::string(", Ns=") +
                      std::to_string(cfg.ensemble_ns);
        for (size_t i = 0; i < ens.mean_trace.size(); ++i) {
            curve.x.push_back(static_cast<double>(i));
            curve.y.push_back(10.0 * std::log10(std::max(ens.mean_trace[i], 1e-300)));
        }
        svg::PlotSpec spec;
        spec.title = "Network MSD learning curve";
        spec.x_label = "iteration";
        spec.y_label = "MSD_net [dB]";
        spec.description = "config_hash=" + wb.hash + " seed=" + std::to_string(cfg.seed);
        write_file(out / "learning_curve.svg", svg::render_line_plot(spec, {curve}));
    }
    std::cout << "steady MSD " << format_double(ens.steady_msd) << " ("
              << format_double(ens.steady_msd_db) << " dB) over " << ens.run_count << " runs\n";
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, int workers) {
    const PreparedExperiment wb = prepare_experiment(cfg);
    const SweepResult sweep =
        sweep_ns_rho(wb.model, wb.topology, wb.cmat, cfg.ns_list, cfg.rho_list, wb.sim, cfg.runs,
                     workers, cfg.select_budget, cfg.select_restarts, cfg.write_traces);

    const fs::path out(cfg.out_dir);
    {
        std::string csv = provenance_comment(wb, cfg);
        csv += "ns,rho,steady_msd,steady_msd_db,ci_halfwidth,runs\n";
        for (const SweepCell& cell : sweep.cells) {
            csv += std::to_string(cell.aware_count) + "," + format_double(cell.rho) + "," +
                   format_double(cell.steady_msd) + "," + format_double(cell.steady_msd_db) +
                   "," + format_double(cell.ci_halfwidth) + "," + std::to_string(cell.runs) +
                   "\n";
        }
        write_file(out / "sweep.csv", csv);
    }
    {
        JsonValue doc = JsonValue::object();
        doc.set("provenance", provenance_json(wb, cfg));
        doc.set("config", JsonValue::str(canonical_config_json(cfg)));
        JsonValue placements = JsonValue::array();
        for (size_t i = 0; i < sweep.ns_list.size(); ++i) {
            JsonValue p = JsonValue::object();
            p.set("ns", JsonValue::integer(sweep.ns_list[i]));
            p.set("aware_set", int_array(sweep.aware_sets[i]));
            p.set("ib_residual", JsonValue::num(sweep.ib_residuals[i]));
            placements.push(std::move(p));
        }
        doc.set("placements", std::move(placements));
        JsonValue minimizers = JsonValue::array();
        for (const RhoMinimizer& m : sweep.minimizers) {
            JsonValue row = JsonValue::object();
            row.set("rho", JsonValue::num(m.rho));
            row.set("ns_star", JsonValue::integer(m.aware_count));
            row.set("steady_msd_db", JsonValue::num(m.steady_msd_db));
            minimizers.push(std::move(row));
        }
        doc.set("minimizers", std::move(minimizers));
        write_file(out / "sweep.json", doc.dump());
    }
    if (cfg.write_traces) {
        for (size_t ci = 0; ci < sweep.mean_traces.size(); ++ci) {
            const SweepCell& cell = sweep.cells[ci];
            char name[64];
            std::snprintf(name, sizeof(name), "trace_ns%d_rho%g.csv", cell.aware_count,
                          cell.rho);
            std::string csv = provenance_comment(wb, cfg);
            csv += "iteration,msd\n";
            for (size_t i = 0; i < sweep.mean_traces[ci].size(); ++i)
                csv += std::to_string(i) + "," + format_double(sweep.mean_traces[ci][i]) + "\n";
            write_file(out / "traces" / name, csv);
        }
    }
    {
        std::vector<svg::Series> series;
        std::vector<svg::Marker> markers;
        for (size_t ri = 0; ri < sweep.rho_list.size(); ++ri) {
            svg::Series s;
            s.label = rho_label(sweep.rho_list[ri]);
            s.mark_points = true;
            for (size_t ni = 0; ni < sweep.ns_list.size(); ++ni) {
                const SweepCell& cell = sweep.cells[ni * sweep.rho_list.size() + ri];
                s.x.push_back(cell.aware_count);
                s.y.push_back(cell.steady_msd_db);
            }
            series.push_back(std::move(s));
            svg::Marker m;
            m.x = sweep.minimizers[ri].aware_count;
            m.y = sweep.minimizers[ri].steady_msd_db;
            m.series = static_cast<int>(ri);
            markers.push_back(m);
        }
        svg::PlotSpec spec;
        spec.title = "Steady-state network MSD vs number of sparsity-aware nodes";
        spec.x_label = "N_s (sparsity-aware nodes)";
        spec.y_label = "steady MSD_net [dB]";
        spec.description = "config_hash=" + wb.hash + " seed=" + std::to_string(cfg.seed);
        write_file(out / "sweep.svg", svg::render_line_plot(spec, series, markers));
    }
    std::cout << "sweep complete: " << sweep.cells.size() << " cells -> "
              << (out / "sweep.csv").string() << "\n";
    for (const RhoMinimizer& m : sweep.minimizers)
        std::cout << "  " << rho_label(m.rho) << ": min " << format_double(m.steady_msd_db)
                  << " dB at Ns=" << m.aware_count << "\n";
    return 0;
}

int cmd_theory(const ExperimentConfig& cfg, int workers) {
    const PreparedExperiment wb = prepare_experiment(cfg);
    TheoryContext ctx;
    ctx.cprime = wb.cmat.coefficients;
    ctx.taps = cfg.taps;
    ctx.mu = cfg.mu;
    ctx.sigma_u_sq = cfg.sigma_u_sq;
    ctx.sigma_v_sq = cfg.sigma_v_sq;
    if (!(ctx.contraction() < 1.0))
        throw std::runtime_error("stability violation: mu*sigma_u_sq = " +
                                 std::to_string(cfg.mu * cfg.sigma_u_sq) +
                                 " must lie in (0, 2)");

    const double floor = msd_floor_structured(ctx);

    // moments from a pilot ensemble (all nodes aware at pilot_rho)
    SparsityProfile pilot_profile;
    pilot_profile.node_count = cfg.nodes;
    pilot_profile.aware_count = cfg.nodes;
    pilot_profile.rho = cfg.pilot_rho;
    for (int k = 0; k < cfg.nodes; ++k) pilot_profile.aware.push_back(k);
    SimulationConfig pilot_sim = wb.sim;
    pilot_sim.seed = split_seed(cfg.seed, 0x9107u);
    const MomentEstimates moments = run_moment_pilot(wb.model, wb.topology, wb.cmat,
                                                     pilot_profile, pilot_sim, cfg.pilot_runs,
                                                     workers);
    if (!moments.warning.empty()) std::cerr << "warning: " << moments.warning << "\n";

    const fs::path out(cfg.out_dir);
    JsonValue doc = JsonValue::object();
    doc.set("provenance", provenance_json(wb, cfg));
    doc.set("msd_floor", JsonValue::num(floor));
    doc.set("msd_floor_db", JsonValue::num(10.0 * std::log10(std::max(floor, 1e-300))));
    {
        JsonValue m = JsonValue::object();
        m.set("tr_theta", JsonValue::num(moments.tr_theta));
        m.set("tr_psi", JsonValue::num(moments.tr_psi));
        m.set("se_theta", JsonValue::num(moments.se_theta));
        m.set("se_psi", JsonValue::num(moments.se_psi));
        m.set("tr_theta_self", JsonValue::num(moments.tr_theta_self));
        m.set("tr_theta_cross", JsonValue::num(moments.tr_theta_cross));
        m.set("tr_psi_self", JsonValue::num(moments.tr_psi_self));
        m.set("tr_psi_cross", JsonValue::num(moments.tr_psi_cross));
        m.set("sample_count", JsonValue::integer(moments.sample_count));
        m.set("assumption_warning", JsonValue::boolean(moments.assumption_warning));
        doc.set("moments", std::move(m));
    }

    const double rho_max =
        cfg.rho_list.empty() ? 0.0 : *std::max_element(cfg.rho_list.begin(), cfg.rho_list.end());
    JsonValue reports = JsonValue::array();
    for (int ns : cfg.ns_list) {
        const TheoryReport report = make_theory_report(ctx, moments, ns);
        JsonValue r = JsonValue::object();
        r.set("ns", JsonValue::integer(report.aware_count));
        r.set("regime", JsonValue::str(report.regime));
        r.set("linear_coeff", JsonValue::num(report.linear_coeff));
        r.set("quadratic_coeff", JsonValue::num(report.quadratic_coeff));
        r.set("rho_opt", JsonValue::num(report.rho_opt));
        r.set("phi_min", JsonValue::num(report.phi_min));
        r.set("predicted_min_msd", JsonValue::num(report.msd_floor + report.phi_min));
        reports.push(std::move(r));

        if (ns > 0) {
            // phi(rho) curve: CSV columns rho, phi, predicted_total_msd
            const double hi = rho_max > 0.0 ? 2.0 * rho_max : 1e-4;
            std::string csv = provenance_comment(wb, cfg);
            csv += "rho,phi,predicted_total_msd\n";
            for (int i = 0; i < cfg.rho_grid_points; ++i) {
                const double rho = hi * i / (cfg.rho_grid_points - 1);
                const double phi = phi_value(moments.tr_theta, moments.tr_psi, cfg.mu,
                                             cfg.sigma_u_sq, cfg.nodes, ns, rho);
                csv += format_double(rho) + "," + format_double(phi) + "," +
                       format_double(floor + phi) + "\n";
            }
            char name[48];
            std::snprintf(name, sizeof(name), "phi_curve_ns%d.csv", ns);
            write_file(out / name, csv);
        }
    }
    doc.set("reports", std::move(reports));
    write_file(out / "theory.json", doc.dump());
    std::cout << "floor " << format_double(floor) << " ("
              << format_double(10.0 * std::log10(std::max(floor, 1e-300)))
              << " dB); Tr[theta] " << format_double(moments.tr_theta) << ", Tr[psi] "
              << format_double(moments.tr_psi) << "\n";
    return 0;
}

}  // namespace zadnet
