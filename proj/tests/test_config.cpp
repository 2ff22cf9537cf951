#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zadnet/commands.hpp"
#include "zadnet/config.hpp"
#include "zadnet/jsonout.hpp"
#include "zadnet/svg.hpp"

using namespace zadnet;

TEST_CASE("config: empty document runs the desk-scale reference setup") {
    const ExperimentConfig cfg = parse_config("{}");
    CHECK(cfg.nodes == 30);
    CHECK(cfg.taps == 128);
    CHECK(cfg.w0_nonzeros == 1);
    CHECK(cfg.mu == 6e-3);
    CHECK(cfg.sigma_u_sq == 1.0);
    CHECK(cfg.sigma_v_sq == 1e-4);
    CHECK(cfg.iterations == 3000);
    CHECK(cfg.runs == 100);
    CHECK(cfg.rho_list == std::vector<double>{2e-6, 4e-6, 6e-6, 1e-5, 2e-5, 4e-5});
    CHECK(cfg.ns_list.front() == 0);
    CHECK(cfg.ns_list.back() == 30);
    CHECK(cfg.rule == "metropolis");
}

TEST_CASE("config: unknown keys are rejected at every level") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"sed": 1})"), doctest::Contains("unknown config key"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"tapps": 4}})"),
                         doctest::Contains("model.tapps"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": {"rho": []}})"),
                         doctest::Contains("sweep.rho"), std::invalid_argument);
}

TEST_CASE("config: domain validation") {
    CHECK_THROWS_AS(parse_config(R"({"network": {"nodes": 0}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"network": {"rule": "laplacian"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"ns_list": [40]}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"rho_list": [-1e-6]}})"), std::invalid_argument);
}

TEST_CASE("config: canonical rendering and hash are deterministic") {
    const ExperimentConfig a = parse_config(R"({"seed": 42, "model": {"taps": 16}})");
    const ExperimentConfig b = parse_config(R"({"model": {"taps": 16}, "seed": 42})");
    CHECK(canonical_config_json(a) == canonical_config_json(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);

    const ExperimentConfig c = parse_config(R"({"seed": 43, "model": {"taps": 16}})");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("config: paper scale switches runs and ns_list") {
    ExperimentConfig cfg = parse_config("{}");
    apply_paper_scale(cfg);
    CHECK(cfg.runs == 1000);
    CHECK(cfg.ns_list.size() == 31);
    CHECK(cfg.ns_list.front() == 0);
    CHECK(cfg.ns_list.back() == 30);
}

TEST_CASE("json writer: 17 significant digits round-trip exactly") {
    const double values[] = {1.0 / 3.0, 6e-3, 1e-4, 0.1 + 0.2, 2e-6, -4.94018e-5};
    for (double v : values) {
        const std::string text = format_double(v);
        CHECK(std::stod(text) == v);
    }
    JsonValue doc = JsonValue::object();
    doc.set("x", JsonValue::num(1.0 / 3.0));
    doc.set("s", JsonValue::str("a\"b\\c\n"));
    const std::string out = doc.dump();
    CHECK(out.find("0.33333333333333331") != std::string::npos);
    CHECK(out.find("\\\"") != std::string::npos);
}

TEST_CASE("svg: deterministic output with provenance, no timestamps") {
    svg::Series s;
    s.label = "rho=2e-06";
    s.x = {0, 3, 6, 9};
    s.y = {-56.0, -57.2, -58.9, -58.1};
    s.mark_points = true;
    svg::PlotSpec spec;
    spec.title = "test";
    spec.x_label = "N_s";
    spec.y_label = "MSD [dB]";
    spec.description = "config_hash=deadbeef seed=1";
    const std::string a = svg::render_line_plot(spec, {s}, {{3.0, -57.2, 0}});
    const std::string b = svg::render_line_plot(spec, {s}, {{3.0, -57.2, 0}});
    CHECK(a == b);
    CHECK(a.find("<desc>config_hash=deadbeef seed=1</desc>") != std::string::npos);
    CHECK(a.find("polyline") != std::string::npos);
    CHECK(a.find("rho=2e-06") != std::string::npos);
}

TEST_CASE("prepare_experiment: deterministic workbench from config") {
    ExperimentConfig cfg = parse_config(
        R"({"network": {"nodes": 8, "radius": 0.6}, "model": {"taps": 8}})");
    const PreparedExperiment a = prepare_experiment(cfg);
    const PreparedExperiment b = prepare_experiment(cfg);
    CHECK(a.topology.edges == b.topology.edges);
    CHECK((a.model.w0 - b.model.w0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.hash == b.hash);
    CHECK(a.model.nonzero_taps() == 1);
    CHECK(a.cmat.rule == "metropolis");
}

TEST_CASE("commands: generate + validate write the documented artifacts") {
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / "zadnet_test_generate";
    fs::remove_all(out);
    ExperimentConfig cfg = parse_config(
        R"({"network": {"nodes": 6, "radius": 0.7}, "model": {"taps": 4},
            "sweep": {"ns_list": [0, 3, 6], "rho_list": [1e-5], "runs": 2},
            "sim": {"iterations": 20, "steady_window": 5}})");
    cfg.out_dir = out.string();
    CHECK(cmd_generate(cfg, 1) == 0);
    CHECK(fs::exists(out / "network.json"));
    CHECK(fs::exists(out / "assumption_report.json"));

    // the network document round-trips through the loader
    std::ifstream in(out / "network.json");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto [topo, cmat] = network_from_json(buf.str());
    CHECK(topo.node_count == 6);
    CHECK(cmat.rule == "metropolis");
    CHECK(cmat.doubly_stochastic);

    // hash + seed provenance embedded
    std::ifstream rep(out / "assumption_report.json");
    std::stringstream repbuf;
    repbuf << rep.rdbuf();
    CHECK(repbuf.str().find(config_hash(cfg)) != std::string::npos);
    fs::remove_all(out);
}
