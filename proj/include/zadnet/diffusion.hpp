#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zadnet/network.hpp"
#include "zadnet/rng.hpp"

namespace zadnet {

/// Unknown parameter vector plus the (white Gaussian) input/noise statistics.
struct SystemModel {
    Eigen::VectorXd w0;
    double sigma_u_sq = 1.0;
    double sigma_v_sq = 0.0;

    int taps() const { return static_cast<int>(w0.size()); }
    int nonzero_taps() const;
};

/// w0 with `nonzeros` unit-value taps at seeded distinct random positions.
SystemModel make_sparse_model(int taps, int nonzeros, double sigma_u_sq, double sigma_v_sq,
                              std::uint64_t seed);

struct Measurement {
    double d = 0.0;
    Eigen::VectorXd u;
    double v = 0.0;
};

/// d = u' w0 + v with iid Gaussian regressor entries and noise.
Measurement draw_measurement(const SystemModel& model, GaussianStream& stream);

struct NodeState {
    Eigen::VectorXd w;
    Eigen::VectorXd intermediate;  // valid only between adapt and combine
};

/// intermediate = w + mu*u*e - rho_k*sgn(w), e = d - w'u, sgn(0) = 0.
void adapt(NodeState& state, const Measurement& m, double mu, double rho_k);

/// w_k <- sum_{j in neighborhood k} c'_{j,k} * intermediate_j, ascending j.
void combine(std::vector<NodeState>& states, const CombinationMatrix& cmat);

struct SimulationConfig {
    double mu = 6e-3;
    long iterations = 3000;
    std::uint64_t seed = 1;
    int steady_window = 200;

    /// Non-fatal sanity issues (e.g. mu*sigma_u^2 outside (0,2)).
    std::vector<std::string> warnings(double sigma_u_sq) const;
};

struct MsdTrace {
    std::vector<double> values;  // length iterations + 1, values[0] = ||w0||^2
    std::uint64_t run_seed = 0;
};

class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(std::uint64_t run_seed, long iteration)
        : std::runtime_error("estimate diverged (non-finite) at iteration " +
                             std::to_string(iteration) + ", run seed " +
                             std::to_string(run_seed) + "; step size too large?"),
          run_seed(run_seed),
          iteration(iteration) {}
    std::uint64_t run_seed;
    long iteration;
};

/// Called after each combine with the iteration index (1-based) and the
/// M x N matrix of current node estimates.
using StateObserver = std::function<void(long iteration, const Eigen::MatrixXd& states)>;

/// One ZA-ATC realization from zero initial estimates. Per-node measurement
/// streams derive from config.seed by counter split, so the run is
/// reproducible regardless of scheduling.
MsdTrace run_realization(const SystemModel& model, const Topology& topology,
                         const CombinationMatrix& cmat, const SparsityProfile& profile,
                         const SimulationConfig& config,
                         const StateObserver* observer = nullptr);

}  // namespace zadnet
