#include "zadnet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "zadnet/parallel.hpp"

namespace zadnet {

namespace {

void require_stable(const TheoryContext& ctx) {
    if (!(ctx.contraction() < 1.0))
        throw std::runtime_error("stability violation: mu*sigma_u_sq = " +
                                 std::to_string(ctx.mu * ctx.sigma_u_sq) +
                                 " is outside (0, 2), the steady-state series diverges");
}

bool is_symmetric(const Eigen::MatrixXd& a) {
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-13;
}

}  // namespace

double msd_floor_structured(const TheoryContext& ctx) {
    require_stable(ctx);
    const int n = ctx.node_count();
    const double s = ctx.contraction();
    const double scale =
        ctx.mu * ctx.mu * ctx.sigma_v_sq * ctx.sigma_u_sq * ctx.taps / static_cast<double>(n);
    const Eigen::MatrixXd& c = ctx.cprime;

    if (is_symmetric(c)) {
        // sum_k s^k Tr[(C'^T C') C'^k C'^k^T] = sum_i lambda_i^2 / (1 - s lambda_i^2)
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
        if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double l2 = eig.eigenvalues()[i] * eig.eigenvalues()[i];
            total += l2 / (1.0 - s * l2);
        }
        return scale * total;
    }

    // general column-stochastic C': truncated series over A_k = C'^k (C'^k)^T,
    // with nonnegative terms t_k = s^k Tr[C'^T C' A_k] = s^k ||C' C'^k||_F^2
    const Eigen::MatrixXd gram = c.transpose() * c;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    double total = 0.0;
    double weight = 1.0;
    constexpr long kMaxTerms = 2'000'000;
    for (long k = 0; k < kMaxTerms; ++k) {
        const double term = weight * (gram.array() * a.array()).sum();
        total += term;
        if (term < 1e-14 * total) break;
        a = c * a * c.transpose();
        weight *= s;
    }
    return scale * total;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

double msd_floor_oracle(const TheoryContext& ctx) {
    require_stable(ctx);
    const int n = ctx.node_count();
    const long mn = static_cast<long>(n) * ctx.taps;
    if (mn > 12) throw std::invalid_argument("oracle limited to M*N <= 12");

    const Eigen::MatrixXd c = kron(ctx.cprime, Eigen::MatrixXd::Identity(ctx.taps, ctx.taps));
    const Eigen::MatrixXd f = ctx.contraction() * kron(c, c);
    const long mn2 = mn * mn;
    Eigen::VectorXd q(mn2);
    {
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(mn, mn);
        q = Eigen::Map<const Eigen::VectorXd>(identity.data(), mn2);
    }
    const Eigen::VectorXd x =
        (Eigen::MatrixXd::Identity(mn2, mn2) - f).partialPivLu().solve(q);
    const Eigen::MatrixXd ctc = c.transpose() * c;
    const Eigen::VectorXd vec_ctc = Eigen::Map<const Eigen::VectorXd>(ctc.data(), mn2);
    const double quad = vec_ctc.dot(x);
    return ctx.mu * ctx.mu * ctx.sigma_v_sq * ctx.sigma_u_sq / static_cast<double>(n) * quad;
}

std::vector<std::pair<int, int>> overlapping_pairs(const Topology& topology) {
    const int n = topology.node_count;
    std::vector<std::set<int>> closed(n);
    for (int k = 0; k < n; ++k)
        closed[k] = std::set<int>(topology.neighborhoods[k].begin(),
                                  topology.neighborhoods[k].end());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            bool overlap = false;
            for (int j : closed[i]) {
                if (closed[m].count(j)) {
                    overlap = true;
                    break;
                }
            }
            if (overlap) pairs.emplace_back(i, m);
        }
    }
    return pairs;
}

MomentSample moment_sample(const Eigen::MatrixXd& states, const Eigen::VectorXd& w0,
                           const std::vector<std::pair<int, int>>& pairs) {
    const int n = static_cast<int>(states.cols());
    Eigen::MatrixXd signs(states.rows(), n);
    for (int k = 0; k < n; ++k)
        signs.col(k) = states.col(k).unaryExpr(
            [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
    Eigen::MatrixXd deviations(states.rows(), n);
    for (int k = 0; k < n; ++k) deviations.col(k) = w0 - states.col(k);

    MomentSample out;
    long self_count = 0, cross_count = 0;
    for (auto [i, m] : pairs) {
        const double theta = signs.col(i).dot(deviations.col(m));
        const double psi = signs.col(i).dot(signs.col(m));
        out.theta += theta;
        out.psi += psi;
        if (i == m) {
            out.theta_self += theta;
            out.psi_self += psi;
            ++self_count;
        } else {
            out.theta_cross += theta;
            out.psi_cross += psi;
            ++cross_count;
        }
    }
    const long total = self_count + cross_count;
    if (total > 0) { out.theta /= total; out.psi /= total; }
    if (self_count > 0) { out.theta_self /= self_count; out.psi_self /= self_count; }
    if (cross_count > 0) { out.theta_cross /= cross_count; out.psi_cross /= cross_count; }
    return out;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<MomentSample>& samples, double MomentSample::* field) {
    MeanSe out;
    const size_t n = samples.size();
    for (const auto& s : samples) out.mean += s.*field;
    out.mean /= static_cast<double>(n);
    if (n > 1) {
        double var = 0.0;
        for (const auto& s : samples) {
            const double d = s.*field - out.mean;
            var += d * d;
        }
        var /= static_cast<double>(n - 1);
        out.se = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

}  // namespace

MomentEstimates estimate_moments(const std::vector<MomentSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("no moment samples");
    MomentEstimates est;
    est.sample_count = static_cast<int>(samples.size());

    const auto theta = mean_se(samples, &MomentSample::theta);
    const auto psi = mean_se(samples, &MomentSample::psi);
    est.tr_theta = theta.mean;
    est.tr_psi = psi.mean;
    est.se_theta = theta.se;
    est.se_psi = psi.se;
    est.tr_theta_self = mean_se(samples, &MomentSample::theta_self).mean;
    est.tr_theta_cross = mean_se(samples, &MomentSample::theta_cross).mean;
    est.tr_psi_self = mean_se(samples, &MomentSample::psi_self).mean;
    est.tr_psi_cross = mean_se(samples, &MomentSample::psi_cross).mean;

    if (est.sample_count < 30)
        est.warning = "only " + std::to_string(est.sample_count) +
                      " pilot runs; at least 30 recommended. ";

    const auto theta_self = mean_se(samples, &MomentSample::theta_self);
    const auto theta_cross = mean_se(samples, &MomentSample::theta_cross);
    const auto psi_self = mean_se(samples, &MomentSample::psi_self);
    const auto psi_cross = mean_se(samples, &MomentSample::psi_cross);
    const double theta_gap = std::abs(theta_self.mean - theta_cross.mean);
    const double theta_se = std::hypot(theta_self.se, theta_cross.se);
    const double psi_gap = std::abs(psi_self.mean - psi_cross.mean);
    const double psi_se = std::hypot(psi_self.se, psi_cross.se);
    if (est.sample_count > 1 &&
        ((theta_se > 0 && theta_gap > 3.0 * theta_se) || (psi_se > 0 && psi_gap > 3.0 * psi_se))) {
        est.assumption_warning = true;
        est.warning += "self and cross pair estimates disagree beyond 3 standard errors; "
                       "Assumption II may not hold for this network";
    }
    return est;
}

MomentEstimates run_moment_pilot(const SystemModel& model, const Topology& topology,
                                 const CombinationMatrix& cmat, const SparsityProfile& profile,
                                 const SimulationConfig& config, int runs, int workers) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    const auto pairs = overlapping_pairs(topology);
    const long burn_in = config.iterations - config.steady_window;
    if (burn_in < 0) throw std::invalid_argument("steady_window exceeds iterations");

    std::vector<MomentSample> samples(runs);
    parallel_for(runs, workers, [&](long r) {
        SimulationConfig run_config = config;
        run_config.seed = split_seed(config.seed, static_cast<std::uint64_t>(r));
        MomentSample acc;
        long count = 0;
        StateObserver observer = [&](long it, const Eigen::MatrixXd& states) {
            if (it <= burn_in) return;
            const MomentSample s = moment_sample(states, model.w0, pairs);
            acc.theta += s.theta;
            acc.psi += s.psi;
            acc.theta_self += s.theta_self;
            acc.psi_self += s.psi_self;
            acc.theta_cross += s.theta_cross;
            acc.psi_cross += s.psi_cross;
            ++count;
        };
        run_realization(model, topology, cmat, profile, run_config, &observer);
        if (count > 0) {
            acc.theta /= count;
            acc.psi /= count;
            acc.theta_self /= count;
            acc.psi_self /= count;
            acc.theta_cross /= count;
            acc.psi_cross /= count;
        }
        samples[r] = acc;
    });
    return estimate_moments(samples);
}

OptimalRho rho_opt_homogeneous(double alpha_prime, double beta_prime, int node_count) {
    if (!(beta_prime > 0.0))
        throw std::invalid_argument(
            "beta_prime must be > 0 (it is a mean of positive-semidefinite quadratic forms); "
            "got " + std::to_string(beta_prime));
    OptimalRho out;
    out.rho_opt = std::max(0.0, alpha_prime / (2.0 * beta_prime));
    out.phi_min = out.rho_opt > 0.0
                      ? -(alpha_prime * alpha_prime) / (4.0 * node_count * beta_prime)
                      : 0.0;
    return out;
}

std::pair<double, double> homogeneous_primes(const MomentEstimates& m, double mu,
                                             double sigma_u_sq, int node_count) {
    const double alpha_prime = -2.0 * mu * (1.0 - mu * sigma_u_sq) * node_count * m.tr_theta;
    const double beta_prime = mu * mu * node_count * m.tr_psi;
    return {alpha_prime, beta_prime};
}

OptimalRho rho_opt_heterogeneous(const MomentEstimates& m, double mu, double sigma_u_sq,
                                 int node_count, int aware_count) {
    if (aware_count < 1)
        throw std::invalid_argument("no sparsity-aware nodes: phi is identically zero");
    if (!(m.tr_psi > 0.0))
        throw std::invalid_argument("Tr[psi] estimate must be > 0");
    OptimalRho out;
    const double one_minus = 1.0 - mu * sigma_u_sq;
    out.rho_opt = std::max(
        0.0, -(one_minus * m.tr_theta * node_count) / (mu * m.tr_psi * aware_count));
    out.phi_min = out.rho_opt > 0.0
                      ? -(one_minus * one_minus * m.tr_theta * m.tr_theta) / m.tr_psi
                      : 0.0;
    return out;
}

double phi_value(double tr_theta, double tr_psi, double mu, double sigma_u_sq, int node_count,
                 int aware_count, double rho) {
    const double linear = 2.0 * rho * mu * (1.0 - mu * sigma_u_sq) * tr_theta * aware_count;
    const double quadratic = mu * mu * rho * rho * tr_psi * aware_count *
                             static_cast<double>(aware_count) / node_count;
    return (linear + quadratic) / node_count;
}

std::vector<double> phi_curve(const MomentEstimates& m, double mu, double sigma_u_sq,
                              int node_count, int aware_count,
                              const std::vector<double>& rho_grid) {
    std::vector<double> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        if (rho < 0.0) throw std::invalid_argument("rho grid must be non-negative");
        out.push_back(phi_value(m.tr_theta, m.tr_psi, mu, sigma_u_sq, node_count, aware_count, rho));
    }
    return out;
}

TheoryReport make_theory_report(const TheoryContext& ctx, const MomentEstimates& m,
                                int aware_count) {
    const int n = ctx.node_count();
    TheoryReport report;
    report.msd_floor = msd_floor_structured(ctx);
    report.aware_count = aware_count;
    report.regime = aware_count == n ? "homogeneous" : "heterogeneous";
    if (aware_count == 0) return report;  // phi identically zero: no attraction anywhere
    // phi(rho) = -a*rho + b*rho^2
    report.linear_coeff =
        -2.0 * ctx.mu * (1.0 - ctx.mu * ctx.sigma_u_sq) * m.tr_theta * aware_count / n;
    report.quadratic_coeff = ctx.mu * ctx.mu * m.tr_psi * aware_count *
                             static_cast<double>(aware_count) / (static_cast<double>(n) * n);
    const OptimalRho opt = rho_opt_heterogeneous(m, ctx.mu, ctx.sigma_u_sq, n, aware_count);
    report.rho_opt = opt.rho_opt;
    report.phi_min = opt.phi_min;
    return report;
}

}  // namespace zadnet
