#include "zadnet/diffusion.hpp"

#include <cmath>

namespace zadnet {

namespace {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Shared adapt kernel: the public adapt() and the realization loop must run
// identical arithmetic.
inline void adapt_kernel(const Eigen::Ref<const Eigen::VectorXd>& w,
                         const Eigen::Ref<const Eigen::VectorXd>& u, double d, double mu,
                         double rho_k, Eigen::Ref<Eigen::VectorXd> out) {
    const double e = d - w.dot(u);
    out = w + (mu * e) * u;
    if (rho_k != 0.0) out -= rho_k * w.unaryExpr([](double x) { return sgn(x); });
}

// Ascending-neighbor-index accumulation for bit-reproducible combines.
inline void combine_kernel(const Eigen::MatrixXd& intermediates, const Eigen::MatrixXd& c,
                           const std::vector<std::vector<int>>& neighborhoods,
                           Eigen::MatrixXd& out) {
    const int n = static_cast<int>(neighborhoods.size());
    for (int k = 0; k < n; ++k) {
        const auto& nb = neighborhoods[k];
        out.col(k) = c(nb[0], k) * intermediates.col(nb[0]);
        for (size_t idx = 1; idx < nb.size(); ++idx)
            out.col(k) += c(nb[idx], k) * intermediates.col(nb[idx]);
    }
}

}  // namespace

int SystemModel::nonzero_taps() const {
    int count = 0;
    for (int i = 0; i < w0.size(); ++i)
        if (w0[i] != 0.0) ++count;
    return count;
}

SystemModel make_sparse_model(int taps, int nonzeros, double sigma_u_sq, double sigma_v_sq,
                              std::uint64_t seed) {
    if (taps < 1) throw std::invalid_argument("taps must be >= 1");
    if (nonzeros < 0 || nonzeros > taps)
        throw std::invalid_argument("nonzeros must lie in [0, taps]");
    if (!(sigma_u_sq > 0.0)) throw std::invalid_argument("sigma_u_sq must be > 0");
    if (sigma_v_sq < 0.0) throw std::invalid_argument("sigma_v_sq must be >= 0");

    SystemModel model;
    model.w0 = Eigen::VectorXd::Zero(taps);
    model.sigma_u_sq = sigma_u_sq;
    model.sigma_v_sq = sigma_v_sq;
    Xoshiro256pp gen(split_seed(seed, 0x773000u));
    int placed = 0;
    while (placed < nonzeros) {
        const int pos = static_cast<int>(gen.next() % static_cast<std::uint64_t>(taps));
        if (model.w0[pos] == 0.0) {
            model.w0[pos] = 1.0;
            ++placed;
        }
    }
    return model;
}

Measurement draw_measurement(const SystemModel& model, GaussianStream& stream) {
    Measurement m;
    const int taps = model.taps();
    const double su = std::sqrt(model.sigma_u_sq);
    const double sv = std::sqrt(model.sigma_v_sq);
    m.u.resize(taps);
    for (int i = 0; i < taps; ++i) m.u[i] = su * stream.next();
    m.v = sv * stream.next();
    m.d = m.u.dot(model.w0) + m.v;
    return m;
}

void adapt(NodeState& state, const Measurement& m, double mu, double rho_k) {
    if (state.w.size() != m.u.size()) throw std::invalid_argument("tap-length mismatch");
    if (rho_k < 0.0) throw std::invalid_argument("rho_k must be >= 0");
    state.intermediate.resize(state.w.size());
    adapt_kernel(state.w, m.u, m.d, mu, rho_k, state.intermediate);
}

void combine(std::vector<NodeState>& states, const CombinationMatrix& cmat) {
    const int n = cmat.node_count();
    if (static_cast<int>(states.size()) != n)
        throw std::invalid_argument("state count does not match combiner size");
    const long taps = states[0].w.size();
    for (const auto& s : states)
        if (s.intermediate.size() != taps)
            throw std::invalid_argument("intermediate estimates have inconsistent lengths");

    // neighborhoods implied by the support of c'
    std::vector<std::vector<int>> support(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (cmat.coefficients(l, k) != 0.0) support[k].push_back(l);

    Eigen::MatrixXd intermediates(taps, n);
    for (int k = 0; k < n; ++k) intermediates.col(k) = states[k].intermediate;
    Eigen::MatrixXd next(taps, n);
    combine_kernel(intermediates, cmat.coefficients, support, next);
    for (int k = 0; k < n; ++k) {
        states[k].w = next.col(k);
        states[k].intermediate.resize(0);  // invalidated until the next adapt
    }
}

std::vector<std::string> SimulationConfig::warnings(double sigma_u_sq) const {
    std::vector<std::string> out;
    const double p = mu * sigma_u_sq;
    if (!(p > 0.0 && p < 2.0))
        out.push_back("mu*sigma_u_sq = " + std::to_string(p) +
                      " is outside (0, 2); the LMS recursion may be unstable");
    if (steady_window > iterations + 1)
        out.push_back("steady_window exceeds the trace length");
    return out;
}

MsdTrace run_realization(const SystemModel& model, const Topology& topology,
                         const CombinationMatrix& cmat, const SparsityProfile& profile,
                         const SimulationConfig& config, const StateObserver* observer) {
    const int n = topology.node_count;
    const int taps = model.taps();
    if (cmat.node_count() != n) throw std::invalid_argument("combiner size mismatch");
    if (profile.node_count != n) throw std::invalid_argument("profile size mismatch");

    MsdTrace trace;
    trace.run_seed = config.seed;
    trace.values.reserve(config.iterations + 1);
    // zero initialization: MSD_net(0) is exactly ||w0||^2
    trace.values.push_back(model.w0.squaredNorm());

    std::vector<GaussianStream> streams;
    streams.reserve(n);
    for (int k = 0; k < n; ++k) streams.emplace_back(split_seed(config.seed, k));

    const Eigen::VectorXd rho = profile.rho_vector();
    const double su = std::sqrt(model.sigma_u_sq);
    const double sv = std::sqrt(model.sigma_v_sq);

    Eigen::MatrixXd states = Eigen::MatrixXd::Zero(taps, n);
    Eigen::MatrixXd intermediates(taps, n);
    Eigen::VectorXd u(taps);

    for (long it = 1; it <= config.iterations; ++it) {
        for (int k = 0; k < n; ++k) {
            auto& stream = streams[k];
            for (int i = 0; i < taps; ++i) u[i] = su * stream.next();
            const double v = sv * stream.next();
            const double d = u.dot(model.w0) + v;
            adapt_kernel(states.col(k), u, d, config.mu, rho[k], intermediates.col(k));
        }
        combine_kernel(intermediates, cmat.coefficients, topology.neighborhoods, states);

        double msd = 0.0;
        for (int k = 0; k < n; ++k) msd += (model.w0 - states.col(k)).squaredNorm();
        msd /= n;
        if (!std::isfinite(msd)) throw DivergenceError(config.seed, it);
        trace.values.push_back(msd);

        if (observer) (*observer)(it, states);
    }
    return trace;
}

}  // namespace zadnet
