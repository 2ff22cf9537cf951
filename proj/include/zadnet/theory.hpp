#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zadnet/diffusion.hpp"
#include "zadnet/network.hpp"

namespace zadnet {

/// Inputs of the steady-state expressions. The large Kronecker operators are
/// never materialized here; everything is carried by C', the variances and
/// the scalar contraction factor.
struct TheoryContext {
    Eigen::MatrixXd cprime;
    int taps = 1;
    double mu = 6e-3;
    double sigma_u_sq = 1.0;
    double sigma_v_sq = 0.0;

    int node_count() const { return static_cast<int>(cprime.cols()); }
    /// s = 1 - 2*mu*sigma_u^2 + mu^2*sigma_u^4; in [0,1) iff 0 < mu*sigma_u^2 < 2.
    double contraction() const {
        return 1.0 - 2.0 * mu * sigma_u_sq + mu * mu * sigma_u_sq * sigma_u_sq;
    }
};

/// Rho-independent steady-state network MSD of plain ATC diffusion LMS.
/// Exact Kronecker-factored evaluation: eigendecomposition when C' is
/// symmetric, truncated matrix-power series otherwise.
double msd_floor_structured(const TheoryContext& ctx);

/// Literal dense evaluation of the same quantity; O((MN)^4) memory/time,
/// guarded to M*N <= 12. Test-scale cross-validation only.
double msd_floor_oracle(const TheoryContext& ctx);

/// Per-run steady-state cross-moment averages over overlapping node pairs.
/// theta: sgn(w_i)' (w0 - w_m); psi: sgn(w_i)' sgn(w_m). The *_self fields
/// restrict to i = m, *_cross to i != m.
struct MomentSample {
    double theta = 0.0, psi = 0.0;
    double theta_self = 0.0, psi_self = 0.0;
    double theta_cross = 0.0, psi_cross = 0.0;
};

/// Ordered node pairs (i, m), including i = m, whose closed neighborhoods
/// intersect.
std::vector<std::pair<int, int>> overlapping_pairs(const Topology& topology);

/// Pair statistics of one steady-state snapshot (taps x N node estimates).
MomentSample moment_sample(const Eigen::MatrixXd& states, const Eigen::VectorXd& w0,
                           const std::vector<std::pair<int, int>>& pairs);

struct MomentEstimates {
    double tr_theta = 0.0;
    double tr_psi = 0.0;
    double se_theta = 0.0;  // standard errors across runs
    double se_psi = 0.0;
    int sample_count = 0;
    double tr_theta_self = 0.0, tr_theta_cross = 0.0;
    double tr_psi_self = 0.0, tr_psi_cross = 0.0;
    bool assumption_warning = false;
    std::string warning;
};

/// Mean / standard error across per-run samples; warns when self and cross
/// pair estimates disagree beyond 3 combined standard errors (Assumption II
/// suspect for this network).
MomentEstimates estimate_moments(const std::vector<MomentSample>& samples);

/// Pilot ensemble: runs realizations, averages the pair statistics over the
/// trailing steady window of each run, and estimates the moment traces.
MomentEstimates run_moment_pilot(const SystemModel& model, const Topology& topology,
                                 const CombinationMatrix& cmat, const SparsityProfile& profile,
                                 const SimulationConfig& config, int runs, int workers = 0);

struct OptimalRho {
    double rho_opt = 0.0;
    double phi_min = 0.0;
};

/// Homogeneous network: rho_opt = max(0, a'/(2b')), phi_min = -a'^2/(4Nb').
OptimalRho rho_opt_homogeneous(double alpha_prime, double beta_prime, int node_count);

/// alpha', beta' reconstructed from the moment traces (doubly stochastic C').
std::pair<double, double> homogeneous_primes(const MomentEstimates& m, double mu,
                                             double sigma_u_sq, int node_count);

/// Heterogeneous network with N_s aware nodes:
/// rho_opt = max(0, -(1-mu*su2)*Tr[theta]*N / (mu*Tr[psi]*N_s));
/// phi_min = -(1-mu*su2)^2*Tr[theta]^2 / Tr[psi], independent of N_s.
OptimalRho rho_opt_heterogeneous(const MomentEstimates& m, double mu, double sigma_u_sq,
                                 int node_count, int aware_count);

/// phi(rho) = (2*rho*mu*(1-mu*su2)*Tr[theta]*N_s + mu^2*rho^2*Tr[psi]*N_s^2/N) / N
double phi_value(double tr_theta, double tr_psi, double mu, double sigma_u_sq, int node_count,
                 int aware_count, double rho);

std::vector<double> phi_curve(const MomentEstimates& m, double mu, double sigma_u_sq,
                              int node_count, int aware_count,
                              const std::vector<double>& rho_grid);

struct TheoryReport {
    double msd_floor = 0.0;
    double linear_coeff = 0.0;     // a in phi = -a*rho + b*rho^2
    double quadratic_coeff = 0.0;  // b
    double rho_opt = 0.0;
    double phi_min = 0.0;
    std::string regime;            // "homogeneous" | "heterogeneous"
    int aware_count = 0;
};

TheoryReport make_theory_report(const TheoryContext& ctx, const MomentEstimates& m,
                                int aware_count);

}  // namespace zadnet
