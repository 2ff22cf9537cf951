#include "zadnet/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "zadnet/jsonout.hpp"
#include <json.hpp>

namespace zadnet {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& scope,
                    const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw std::invalid_argument("unknown config key \"" + scope + it.key() + "\"");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig cfg;
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    reject_unknown(doc, "", {"seed", "out_dir", "model", "network", "sim", "sweep", "ensemble",
                             "theory", "selection", "assumption_tol"});
    read(doc, "seed", cfg.seed);
    read(doc, "out_dir", cfg.out_dir);
    read(doc, "assumption_tol", cfg.assumption_tol);

    if (doc.contains("model")) {
        const json& m = doc.at("model");
        reject_unknown(m, "model.", {"taps", "w0_nonzeros", "sigma_u_sq", "sigma_v_sq"});
        read(m, "taps", cfg.taps);
        read(m, "w0_nonzeros", cfg.w0_nonzeros);
        read(m, "sigma_u_sq", cfg.sigma_u_sq);
        read(m, "sigma_v_sq", cfg.sigma_v_sq);
    }
    if (doc.contains("network")) {
        const json& n = doc.at("network");
        reject_unknown(n, "network.", {"nodes", "radius", "rule", "file"});
        read(n, "nodes", cfg.nodes);
        read(n, "radius", cfg.radius);
        read(n, "rule", cfg.rule);
        read(n, "file", cfg.network_file);
    }
    if (doc.contains("sim")) {
        const json& s = doc.at("sim");
        reject_unknown(s, "sim.", {"mu", "iterations", "steady_window"});
        read(s, "mu", cfg.mu);
        read(s, "iterations", cfg.iterations);
        read(s, "steady_window", cfg.steady_window);
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        reject_unknown(s, "sweep.", {"ns_list", "rho_list", "runs", "write_traces"});
        read(s, "ns_list", cfg.ns_list);
        read(s, "rho_list", cfg.rho_list);
        read(s, "runs", cfg.runs);
        read(s, "write_traces", cfg.write_traces);
    }
    if (doc.contains("ensemble")) {
        const json& e = doc.at("ensemble");
        reject_unknown(e, "ensemble.", {"ns", "rho"});
        read(e, "ns", cfg.ensemble_ns);
        read(e, "rho", cfg.ensemble_rho);
    }
    if (doc.contains("theory")) {
        const json& t = doc.at("theory");
        reject_unknown(t, "theory.",
                       {"pilot_runs", "pilot_rho", "rho_grid_points", "compare_tol_db"});
        read(t, "pilot_runs", cfg.pilot_runs);
        read(t, "pilot_rho", cfg.pilot_rho);
        read(t, "rho_grid_points", cfg.rho_grid_points);
        read(t, "compare_tol_db", cfg.compare_tol_db);
    }
    if (doc.contains("selection")) {
        const json& s = doc.at("selection");
        reject_unknown(s, "selection.", {"budget", "restarts"});
        read(s, "budget", cfg.select_budget);
        read(s, "restarts", cfg.select_restarts);
    }

    // basic domain checks; deeper validation happens in the modules
    if (cfg.nodes < 1) throw std::invalid_argument("network.nodes must be >= 1");
    if (cfg.taps < 1) throw std::invalid_argument("model.taps must be >= 1");
    if (!(cfg.radius > 0.0)) throw std::invalid_argument("network.radius must be > 0");
    if (cfg.rule != "metropolis" && cfg.rule != "uniform")
        throw std::invalid_argument("network.rule must be \"metropolis\" or \"uniform\"");
    if (cfg.iterations < 0) throw std::invalid_argument("sim.iterations must be >= 0");
    if (cfg.steady_window < 2) throw std::invalid_argument("sim.steady_window must be >= 2");
    if (cfg.runs < 1) throw std::invalid_argument("sweep.runs must be >= 1");
    for (int ns : cfg.ns_list)
        if (ns < 0 || ns > cfg.nodes)
            throw std::invalid_argument("sweep.ns_list entries must lie in [0, nodes]");
    for (double r : cfg.rho_list)
        if (r < 0.0) throw std::invalid_argument("sweep.rho_list entries must be >= 0");
    if (cfg.rho_grid_points < 2)
        throw std::invalid_argument("theory.rho_grid_points must be >= 2");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string canonical_config_json(const ExperimentConfig& c) {
    // out_dir is deliberately omitted: it places files and does not identify
    // the experiment, so runs into different directories hash identically.
    JsonValue doc = JsonValue::object();
    doc.set("seed", JsonValue::uinteger(c.seed));

    JsonValue model = JsonValue::object();
    model.set("taps", JsonValue::integer(c.taps));
    model.set("w0_nonzeros", JsonValue::integer(c.w0_nonzeros));
    model.set("sigma_u_sq", JsonValue::num(c.sigma_u_sq));
    model.set("sigma_v_sq", JsonValue::num(c.sigma_v_sq));
    doc.set("model", std::move(model));

    JsonValue network = JsonValue::object();
    network.set("nodes", JsonValue::integer(c.nodes));
    network.set("radius", JsonValue::num(c.radius));
    network.set("rule", JsonValue::str(c.rule));
    network.set("file", JsonValue::str(c.network_file));
    doc.set("network", std::move(network));

    JsonValue sim = JsonValue::object();
    sim.set("mu", JsonValue::num(c.mu));
    sim.set("iterations", JsonValue::integer(c.iterations));
    sim.set("steady_window", JsonValue::integer(c.steady_window));
    doc.set("sim", std::move(sim));

    JsonValue sweep = JsonValue::object();
    JsonValue ns = JsonValue::array();
    for (int v : c.ns_list) ns.push(JsonValue::integer(v));
    sweep.set("ns_list", std::move(ns));
    JsonValue rho = JsonValue::array();
    for (double v : c.rho_list) rho.push(JsonValue::num(v));
    sweep.set("rho_list", std::move(rho));
    sweep.set("runs", JsonValue::integer(c.runs));
    sweep.set("write_traces", JsonValue::boolean(c.write_traces));
    doc.set("sweep", std::move(sweep));

    JsonValue ensemble = JsonValue::object();
    ensemble.set("ns", JsonValue::integer(c.ensemble_ns));
    ensemble.set("rho", JsonValue::num(c.ensemble_rho));
    doc.set("ensemble", std::move(ensemble));

    JsonValue theory = JsonValue::object();
    theory.set("pilot_runs", JsonValue::integer(c.pilot_runs));
    theory.set("pilot_rho", JsonValue::num(c.pilot_rho));
    theory.set("rho_grid_points", JsonValue::integer(c.rho_grid_points));
    theory.set("compare_tol_db", JsonValue::num(c.compare_tol_db));
    doc.set("theory", std::move(theory));

    JsonValue selection = JsonValue::object();
    selection.set("budget", JsonValue::uinteger(c.select_budget));
    selection.set("restarts", JsonValue::integer(c.select_restarts));
    doc.set("selection", std::move(selection));

    doc.set("assumption_tol", JsonValue::num(c.assumption_tol));
    return doc.dump();
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = canonical_config_json(config);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void apply_paper_scale(ExperimentConfig& config) {
    config.runs = 1000;
    config.ns_list.clear();
    for (int ns = 0; ns <= config.nodes; ++ns) config.ns_list.push_back(ns);
}

}  // namespace zadnet
