#pragma once

#include <string>

#include "zadnet/config.hpp"
#include "zadnet/diffusion.hpp"
#include "zadnet/network.hpp"

namespace zadnet {

/// Everything an experiment needs, derived deterministically from the config.
struct PreparedExperiment {
    Topology topology;
    CombinationMatrix cmat;
    SystemModel model;
    SimulationConfig sim;
    std::string hash;  // config hash embedded in every output file
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

/// CLI entry points. Each writes its artifacts under config.out_dir and
/// returns 0 on success; failures surface as exceptions (mapped to nonzero
/// exit codes by the binary). `workers` bounds the simulation thread pool
/// and never changes any output byte.
int cmd_generate(const ExperimentConfig& config, int workers);
int cmd_validate(const ExperimentConfig& config, int workers);
int cmd_ensemble(const ExperimentConfig& config, int workers);
int cmd_sweep(const ExperimentConfig& config, int workers);
int cmd_theory(const ExperimentConfig& config, int workers);

}  // namespace zadnet
