#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace zadnet {

/// Undirected connected graph with closed neighborhoods (every node is a
/// member of its own neighborhood).
struct Topology {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;           // i < j, sorted
    std::vector<std::vector<int>> neighborhoods;      // closed, ascending
    std::vector<std::array<double, 2>> positions;     // empty unless geometric

    int degree(int k) const { return static_cast<int>(neighborhoods[k].size()) - 1; }
    bool has_edge(int i, int j) const;

    /// Build from an explicit edge list; validates indices, symmetry (via
    /// normalization), irreflexivity and connectivity.
    static Topology from_edges(int node_count, std::vector<std::pair<int, int>> edges);
};

/// Nodes placed uniformly at random in the unit square, edge iff distance
/// <= radius. Redraws placements (up to 1000 attempts) until connected.
Topology generate_geometric_topology(int node_count, double radius, std::uint64_t seed);

struct CombinationMatrix {
    Eigen::MatrixXd coefficients;  // coefficients(l, k) = c'_{l,k}, columns sum to 1
    std::string rule;              // "metropolis" | "uniform" | "custom"
    bool doubly_stochastic = false;

    int node_count() const { return static_cast<int>(coefficients.cols()); }
};

CombinationMatrix build_metropolis(const Topology& topology);
CombinationMatrix build_uniform(const Topology& topology);

/// Max row-sum deviation from 1 (zero iff doubly stochastic).
double row_stochasticity_residual(const CombinationMatrix& cmat);

/// Which nodes run the zero-attracting update, and how hard they pull.
struct SparsityProfile {
    std::vector<int> aware;     // sorted member indices
    int node_count = 0;
    int aware_count = 0;        // N_s
    double rho = 0.0;
    double ib_residual = 0.0;   // max_j |sum_{i in S} c'_{i,j} - N_s/N|

    bool is_aware(int k) const;
    Eigen::VectorXd rho_vector() const;  // rho for members, 0 elsewhere
    SparsityProfile with_rho(double new_rho) const;
};

/// In-set combiner mass deviation for an explicit candidate set.
double ib_residual_of(const CombinationMatrix& cmat, const std::vector<int>& aware_set);

/// Pick the size-N_s set with minimal ib_residual: exhaustive enumeration when
/// C(N, N_s) <= budget, otherwise seeded random restarts with greedy
/// single-node swaps. Ties break toward the lexicographically smallest set.
SparsityProfile select_sparsity_set(const CombinationMatrix& cmat, int aware_count, double rho,
                                    std::uint64_t seed, std::uint64_t budget = 1'000'000,
                                    int restarts = 24);

struct AssumptionReport {
    double row_residual = 0.0;  // I.A: max |row sum - 1|
    double ib_residual = 0.0;   // I.B
    double tol = 0.0;
    bool ia_pass = false;
    bool ib_pass = false;
    bool pass = false;
};

AssumptionReport validate_assumption_I(const CombinationMatrix& cmat,
                                       const SparsityProfile& profile, double tol);

/// JSON document {"n", "edges", "positions", "rule", "c"}; 0-based indices.
std::string network_to_json(const Topology& topology, const CombinationMatrix& cmat);
std::pair<Topology, CombinationMatrix> network_from_json(const std::string& text);

}  // namespace zadnet
