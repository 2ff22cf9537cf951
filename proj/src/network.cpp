#include "zadnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "zadnet/jsonout.hpp"
#include "zadnet/rng.hpp"
#include <json.hpp>

namespace zadnet {

namespace {

std::vector<std::vector<int>> closed_neighborhoods(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> nb(n);
    for (int k = 0; k < n; ++k) nb[k].push_back(k);
    for (auto [i, j] : edges) {
        nb[i].push_back(j);
        nb[j].push_back(i);
    }
    for (auto& list : nb) std::sort(list.begin(), list.end());
    return nb;
}

bool connected(int n, const std::vector<std::vector<int>>& neighborhoods) {
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int visited = 1;
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        for (int j : neighborhoods[k]) {
            if (!seen[j]) {
                seen[j] = 1;
                ++visited;
                queue.push_back(j);
            }
        }
    }
    return visited == n;
}

}  // namespace

bool Topology::has_edge(int i, int j) const {
    if (i == j) return false;
    const auto& nb = neighborhoods[i];
    return std::binary_search(nb.begin(), nb.end(), j);
}

Topology Topology::from_edges(int node_count, std::vector<std::pair<int, int>> edges) {
    if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
    std::set<std::pair<int, int>> normalized;
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= node_count || j >= node_count)
            throw std::invalid_argument("edge index out of range");
        if (i == j) throw std::invalid_argument("self-edges are not allowed");
        normalized.insert({std::min(i, j), std::max(i, j)});
    }
    Topology t;
    t.node_count = node_count;
    t.edges.assign(normalized.begin(), normalized.end());
    t.neighborhoods = closed_neighborhoods(node_count, t.edges);
    if (!connected(node_count, t.neighborhoods))
        throw std::invalid_argument("graph is not connected");
    return t;
}

Topology generate_geometric_topology(int node_count, double radius, std::uint64_t seed) {
    if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");

    constexpr int kMaxAttempts = 1000;
    Xoshiro256pp gen(split_seed(seed, 0x7079u));
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<std::array<double, 2>> pos(node_count);
        for (auto& p : pos) {
            p[0] = gen.uniform();
            p[1] = gen.uniform();
        }
        std::vector<std::pair<int, int>> edges;
        const double r2 = radius * radius;
        for (int i = 0; i < node_count; ++i) {
            for (int j = i + 1; j < node_count; ++j) {
                const double dx = pos[i][0] - pos[j][0];
                const double dy = pos[i][1] - pos[j][1];
                if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
            }
        }
        auto neighborhoods = closed_neighborhoods(node_count, edges);
        if (connected(node_count, neighborhoods)) {
            Topology t;
            t.node_count = node_count;
            t.edges = std::move(edges);
            t.neighborhoods = std::move(neighborhoods);
            t.positions = std::move(pos);
            return t;
        }
    }
    throw std::runtime_error(
        "no connected geometric graph found in 1000 attempts; radius " +
        std::to_string(radius) + " is too small for " + std::to_string(node_count) + " nodes");
}

CombinationMatrix build_metropolis(const Topology& topology) {
    const int n = topology.node_count;
    CombinationMatrix cm;
    cm.coefficients = Eigen::MatrixXd::Zero(n, n);
    cm.rule = "metropolis";
    for (int k = 0; k < n; ++k) {
        double offdiag = 0.0;
        for (int l : topology.neighborhoods[k]) {
            if (l == k) continue;
            const double w = 1.0 / (1.0 + std::max(topology.degree(l), topology.degree(k)));
            cm.coefficients(l, k) = w;
            offdiag += w;
        }
        cm.coefficients(k, k) = 1.0 - offdiag;
    }
    cm.doubly_stochastic = true;
    return cm;
}

CombinationMatrix build_uniform(const Topology& topology) {
    const int n = topology.node_count;
    CombinationMatrix cm;
    cm.coefficients = Eigen::MatrixXd::Zero(n, n);
    cm.rule = "uniform";
    for (int k = 0; k < n; ++k) {
        const double w = 1.0 / static_cast<double>(topology.neighborhoods[k].size());
        for (int l : topology.neighborhoods[k]) cm.coefficients(l, k) = w;
    }
    cm.doubly_stochastic = row_stochasticity_residual(cm) <= 1e-12;
    return cm;
}

double row_stochasticity_residual(const CombinationMatrix& cmat) {
    return (cmat.coefficients.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

bool SparsityProfile::is_aware(int k) const {
    return std::binary_search(aware.begin(), aware.end(), k);
}

Eigen::VectorXd SparsityProfile::rho_vector() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(node_count);
    for (int k : aware) v[k] = rho;
    return v;
}

SparsityProfile SparsityProfile::with_rho(double new_rho) const {
    SparsityProfile p = *this;
    p.rho = new_rho;
    return p;
}

double ib_residual_of(const CombinationMatrix& cmat, const std::vector<int>& aware_set) {
    const int n = cmat.node_count();
    const double target = static_cast<double>(aware_set.size()) / n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double mass = 0.0;
        for (int i : aware_set) mass += cmat.coefficients(i, j);
        worst = std::max(worst, std::abs(mass - target));
    }
    return worst;
}

namespace {

// Number of size-k subsets, saturating at cap to avoid overflow.
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        const double projected = static_cast<double>(result) * (n - k + i) / i;
        if (projected > static_cast<double>(cap) * 2.0) return cap + 1;
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        if (result > cap) return cap + 1;
    }
    return result;
}

struct SetSearch {
    const Eigen::MatrixXd& c;
    int n;
    int ns;
    double target;
    std::vector<double> mass;       // current per-column in-set mass
    std::vector<int> current;
    std::vector<int> best;
    double best_residual = std::numeric_limits<double>::infinity();

    explicit SetSearch(const CombinationMatrix& cm, int aware_count)
        : c(cm.coefficients),
          n(cm.node_count()),
          ns(aware_count),
          target(static_cast<double>(aware_count) / cm.node_count()),
          mass(cm.node_count(), 0.0) {}

    double residual() const {
        double worst = 0.0;
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(mass[j] - target));
        return worst;
    }

    void add(int i) {
        for (int j = 0; j < n; ++j) mass[j] += c(i, j);
        current.push_back(i);
    }
    void remove(int i) {
        for (int j = 0; j < n; ++j) mass[j] -= c(i, j);
        current.pop_back();
    }

    void consider() {
        const double r = residual();
        if (r < best_residual) {  // strict: first (lexicographic) set wins ties
            best_residual = r;
            best = current;
        }
    }

    // lexicographic enumeration of all size-ns supersets of `current`
    void enumerate(int next) {
        if (static_cast<int>(current.size()) == ns) {
            consider();
            return;
        }
        const int missing = ns - static_cast<int>(current.size());
        for (int i = next; i <= n - missing; ++i) {
            add(i);
            enumerate(i + 1);
            remove(i);
        }
    }
};

}  // namespace

SparsityProfile select_sparsity_set(const CombinationMatrix& cmat, int aware_count, double rho,
                                    std::uint64_t seed, std::uint64_t budget, int restarts) {
    const int n = cmat.node_count();
    if (aware_count < 0 || aware_count > n)
        throw std::invalid_argument("aware_count must lie in [0, N]");
    if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");

    SparsityProfile profile;
    profile.node_count = n;
    profile.aware_count = aware_count;
    profile.rho = rho;

    if (aware_count == 0) {
        profile.ib_residual = 0.0;
        return profile;
    }

    SetSearch search(cmat, aware_count);
    if (binomial_capped(n, aware_count, budget) <= budget) {
        search.enumerate(0);
    } else {
        Xoshiro256pp gen(split_seed(seed, 0x5e7u));
        std::vector<int> pool(n);
        for (int restart = 0; restart < restarts; ++restart) {
            // random initial set: partial Fisher-Yates
            for (int i = 0; i < n; ++i) pool[i] = i;
            for (int i = 0; i < aware_count; ++i) {
                const int j = i + static_cast<int>(gen.next() % static_cast<std::uint64_t>(n - i));
                std::swap(pool[i], pool[j]);
            }
            std::vector<int> set(pool.begin(), pool.begin() + aware_count);
            std::sort(set.begin(), set.end());

            search.mass.assign(n, 0.0);
            search.current.clear();
            for (int i : set) search.add(i);
            double r = search.residual();

            // greedy single-node swaps until no strict improvement
            bool improved = true;
            while (improved) {
                improved = false;
                for (int out_pos = 0; out_pos < aware_count && !improved; ++out_pos) {
                    const int out = search.current[out_pos];
                    for (int in = 0; in < n; ++in) {
                        if (std::binary_search(set.begin(), set.end(), in)) continue;
                        for (int j = 0; j < n; ++j)
                            search.mass[j] += search.c(in, j) - search.c(out, j);
                        const double r2 = search.residual();
                        if (r2 < r - 1e-15) {
                            r = r2;
                            search.current[out_pos] = in;
                            set.assign(search.current.begin(), search.current.end());
                            std::sort(set.begin(), set.end());
                            improved = true;
                            break;
                        }
                        for (int j = 0; j < n; ++j)
                            search.mass[j] -= search.c(in, j) - search.c(out, j);
                    }
                }
            }
            if (r < search.best_residual ||
                (r == search.best_residual && set < search.best)) {
                search.best_residual = r;
                search.best = set;
            }
        }
    }

    std::sort(search.best.begin(), search.best.end());
    profile.aware = search.best;
    profile.ib_residual = ib_residual_of(cmat, profile.aware);
    return profile;
}

AssumptionReport validate_assumption_I(const CombinationMatrix& cmat,
                                       const SparsityProfile& profile, double tol) {
    AssumptionReport report;
    report.tol = tol;
    report.row_residual = row_stochasticity_residual(cmat);
    report.ib_residual = ib_residual_of(cmat, profile.aware);
    report.ia_pass = report.row_residual <= tol;
    report.ib_pass = report.ib_residual <= tol;
    report.pass = report.ia_pass && report.ib_pass;
    return report;
}

std::string network_to_json(const Topology& topology, const CombinationMatrix& cmat) {
    JsonValue doc = JsonValue::object();
    doc.set("n", JsonValue::integer(topology.node_count));
    JsonValue edges = JsonValue::array();
    for (auto [i, j] : topology.edges) {
        JsonValue e = JsonValue::array();
        e.push(JsonValue::integer(i)).push(JsonValue::integer(j));
        edges.push(std::move(e));
    }
    doc.set("edges", std::move(edges));
    JsonValue positions = JsonValue::array();
    for (const auto& p : topology.positions) {
        JsonValue xy = JsonValue::array();
        xy.push(JsonValue::num(p[0])).push(JsonValue::num(p[1]));
        positions.push(std::move(xy));
    }
    doc.set("positions", std::move(positions));
    doc.set("rule", JsonValue::str(cmat.rule));
    JsonValue rows = JsonValue::array();
    for (int i = 0; i < topology.node_count; ++i) {
        JsonValue row = JsonValue::array();
        for (int j = 0; j < topology.node_count; ++j)
            row.push(JsonValue::num(cmat.coefficients(i, j)));
        rows.push(std::move(row));
    }
    doc.set("c", std::move(rows));
    return doc.dump();
}

std::pair<Topology, CombinationMatrix> network_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const int n = doc.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Topology topology = Topology::from_edges(n, std::move(edges));
    if (doc.contains("positions")) {
        for (const auto& p : doc.at("positions"))
            topology.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        if (!topology.positions.empty() && static_cast<int>(topology.positions.size()) != n)
            throw std::invalid_argument("positions length does not match n");
    }
    CombinationMatrix cmat;
    cmat.rule = doc.at("rule").get<std::string>();
    cmat.coefficients = Eigen::MatrixXd::Zero(n, n);
    const auto& rows = doc.at("c");
    if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("c has wrong shape");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("c has wrong shape");
        for (int j = 0; j < n; ++j) cmat.coefficients(i, j) = rows[i][j].get<double>();
    }
    cmat.doubly_stochastic = row_stochasticity_residual(cmat) <= 1e-12;
    return {std::move(topology), std::move(cmat)};
}

}  // namespace zadnet
