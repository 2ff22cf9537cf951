#include <doctest.h>

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <vector>

#include "zadnet/network.hpp"
#include "zadnet/rng.hpp"

using namespace zadnet;

namespace {

// independent breadth-first connectivity oracle (edge list only)
bool bfs_connected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int k = q.front();
        q.pop_front();
        for (int m : adj[k])
            if (!seen[m]) {
                seen[m] = 1;
                ++count;
                q.push_back(m);
            }
    }
    return count == n;
}

Topology path3() { return Topology::from_edges(3, {{0, 1}, {1, 2}}); }

Topology ring(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Topology::from_edges(n, edges);
}

void check_column_stochastic(const CombinationMatrix& cm, const Topology& t) {
    const int n = cm.node_count();
    for (int k = 0; k < n; ++k) {
        CHECK(cm.coefficients.col(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
        for (int l = 0; l < n; ++l) {
            CHECK(cm.coefficients(l, k) >= 0.0);
            const bool in_nbhd = l == k || t.has_edge(l, k);
            if (in_nbhd)
                CHECK(cm.coefficients(l, k) > 0.0);
            else
                CHECK(cm.coefficients(l, k) == 0.0);
        }
    }
}

}  // namespace

TEST_CASE("geometric topology: singleton") {
    const Topology t = generate_geometric_topology(1, 0.3, 7);
    CHECK(t.node_count == 1);
    CHECK(t.edges.empty());
    REQUIRE(t.neighborhoods.size() == 1);
    CHECK(t.neighborhoods[0] == std::vector<int>{0});
}

TEST_CASE("geometric topology: radius beyond unit-square diameter forces complete graph") {
    const Topology t = generate_geometric_topology(2, 1.5, 0);
    CHECK(t.edges.size() == 1);
    CHECK(t.has_edge(0, 1));
}

TEST_CASE("geometric topology: connected, deterministic, closed neighborhoods") {
    const Topology t = generate_geometric_topology(30, 0.35, 42);
    CHECK(bfs_connected(t.node_count, t.edges));
    for (int k = 0; k < t.node_count; ++k) {
        const auto& nb = t.neighborhoods[k];
        CHECK(std::binary_search(nb.begin(), nb.end(), k));  // k in its own neighborhood
    }
    // symmetric adjacency
    for (auto [i, j] : t.edges) {
        CHECK(t.has_edge(i, j));
        CHECK(t.has_edge(j, i));
    }
    const Topology again = generate_geometric_topology(30, 0.35, 42);
    CHECK(again.edges == t.edges);
    CHECK(again.positions == t.positions);
    const Topology other = generate_geometric_topology(30, 0.35, 43);
    CHECK(other.edges != t.edges);
}

TEST_CASE("geometric topology: impossible radius fails with diagnostic") {
    CHECK_THROWS_WITH_AS(generate_geometric_topology(40, 0.01, 1),
                         doctest::Contains("radius"), std::runtime_error);
}

TEST_CASE("metropolis: hand-evaluated cases") {
    const Topology one = generate_geometric_topology(1, 0.3, 7);
    CHECK(build_metropolis(one).coefficients(0, 0) == 1.0);

    const Topology two = Topology::from_edges(2, {{0, 1}});
    const CombinationMatrix m2 = build_metropolis(two);
    CHECK(m2.coefficients(0, 0) == doctest::Approx(0.5));
    CHECK(m2.coefficients(1, 0) == doctest::Approx(0.5));
    CHECK(m2.coefficients(0, 1) == doctest::Approx(0.5));
    CHECK(m2.coefficients(1, 1) == doctest::Approx(0.5));

    const CombinationMatrix m3 = build_metropolis(path3());
    CHECK(m3.coefficients(0, 0) == doctest::Approx(2.0 / 3));
    CHECK(m3.coefficients(1, 0) == doctest::Approx(1.0 / 3));
    CHECK(m3.coefficients(2, 0) == 0.0);
    CHECK(m3.coefficients(0, 1) == doctest::Approx(1.0 / 3));
    CHECK(m3.coefficients(1, 1) == doctest::Approx(1.0 / 3));
    CHECK(m3.coefficients(2, 1) == doctest::Approx(1.0 / 3));
    CHECK(m3.coefficients(2, 2) == doctest::Approx(2.0 / 3));
    for (int k = 0; k < 3; ++k) {
        CHECK(m3.coefficients.col(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m3.coefficients.row(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(m3.doubly_stochastic);
}

TEST_CASE("metropolis: symmetric, doubly stochastic, correct support") {
    const Topology t = generate_geometric_topology(20, 0.4, 5);
    const CombinationMatrix cm = build_metropolis(t);
    check_column_stochastic(cm, t);
    CHECK(row_stochasticity_residual(cm) <= 1e-12);
    CHECK(cm.doubly_stochastic);
    // exact transpose symmetry, entry by entry
    for (int i = 0; i < t.node_count; ++i)
        for (int j = 0; j < t.node_count; ++j)
            CHECK(cm.coefficients(i, j) == cm.coefficients(j, i));
}

TEST_CASE("uniform rule: hand-evaluated cases") {
    const Topology one = generate_geometric_topology(1, 0.3, 7);
    const CombinationMatrix u1 = build_uniform(one);
    CHECK(u1.coefficients(0, 0) == 1.0);
    CHECK(u1.doubly_stochastic);

    const CombinationMatrix u4 = build_uniform(ring(4));
    for (int k = 0; k < 4; ++k)
        for (int l : ring(4).neighborhoods[k])
            CHECK(u4.coefficients(l, k) == doctest::Approx(1.0 / 3));
    CHECK(u4.doubly_stochastic);  // closed-neighborhood-regular graph

    const CombinationMatrix u3 = build_uniform(path3());
    check_column_stochastic(u3, path3());
    CHECK(u3.coefficients.row(1).sum() == doctest::Approx(4.0 / 3));
    CHECK_FALSE(u3.doubly_stochastic);
}

TEST_CASE("sparsity set: full and empty sets have zero residual") {
    const Topology t = generate_geometric_topology(12, 0.5, 9);
    const CombinationMatrix cm = build_metropolis(t);

    const SparsityProfile full = select_sparsity_set(cm, 12, 1e-4, 1);
    CHECK(full.aware_count == 12);
    CHECK(full.aware.size() == 12);
    CHECK(full.ib_residual <= 1e-12);  // column stochasticity forces N/N exactly
    CHECK(full.rho == 1e-4);
    CHECK(full.rho_vector().sum() == doctest::Approx(12 * 1e-4));

    const SparsityProfile empty = select_sparsity_set(cm, 0, 1e-4, 1);
    CHECK(empty.aware.empty());
    CHECK(empty.ib_residual == 0.0);
    CHECK(empty.rho_vector().isZero(0.0));
}

TEST_CASE("sparsity set: 8-ring alternating placement, exhaustive oracle") {
    const Topology t = ring(8);
    const CombinationMatrix cm = build_uniform(t);

    // hand evaluation: alternating set puts in-set column mass at 1/3 or 2/3
    const std::vector<int> alternating{0, 2, 4, 6};
    CHECK(ib_residual_of(cm, alternating) == doctest::Approx(1.0 / 6).epsilon(1e-12));

    // independent oracle: enumerate all C(8,4) = 70 subsets
    double best = 1e9;
    std::vector<int> idx{0, 1, 2, 3};
    int enumerated = 0;
    std::vector<int> comb(4);
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b)
            for (int c = b + 1; c < 8; ++c)
                for (int d = c + 1; d < 8; ++d) {
                    comb = {a, b, c, d};
                    best = std::min(best, ib_residual_of(cm, comb));
                    ++enumerated;
                }
    CHECK(enumerated == 70);
    CHECK(best == doctest::Approx(1.0 / 6).epsilon(1e-12));

    const SparsityProfile found = select_sparsity_set(cm, 4, 0.0, 3);
    CHECK(found.ib_residual <= best + 1e-15);
}

TEST_CASE("sparsity set: exhaustive search beats 100 random sets") {
    const Topology t = generate_geometric_topology(14, 0.45, 21);
    const CombinationMatrix cm = build_metropolis(t);
    const SparsityProfile chosen = select_sparsity_set(cm, 5, 0.0, 11);  // C(14,5)=2002

    Xoshiro256pp gen(99);
    std::vector<int> pool(14);
    for (int trial = 0; trial < 100; ++trial) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < 5; ++i)
            std::swap(pool[i], pool[i + static_cast<int>(gen.next() % (14 - i))]);
        std::vector<int> random_set(pool.begin(), pool.begin() + 5);
        std::sort(random_set.begin(), random_set.end());
        CHECK(chosen.ib_residual <= ib_residual_of(cm, random_set) + 1e-15);
    }
}

TEST_CASE("sparsity set: greedy path is deterministic and sane") {
    const Topology t = generate_geometric_topology(24, 0.35, 4);
    const CombinationMatrix cm = build_metropolis(t);
    // budget forced tiny so the randomized path is exercised
    const SparsityProfile a = select_sparsity_set(cm, 12, 0.0, 17, 10, 8);
    const SparsityProfile b = select_sparsity_set(cm, 12, 0.0, 17, 10, 8);
    CHECK(a.aware == b.aware);
    CHECK(a.aware.size() == 12);
    CHECK(std::is_sorted(a.aware.begin(), a.aware.end()));
    // never worse than the trivial prefix set
    std::vector<int> prefix(12);
    std::iota(prefix.begin(), prefix.end(), 0);
    CHECK(a.ib_residual <= ib_residual_of(cm, prefix) + 1e-15);
}

TEST_CASE("assumption I validation") {
    const Topology t = generate_geometric_topology(10, 0.5, 2);
    const CombinationMatrix cm = build_metropolis(t);
    const SparsityProfile full = select_sparsity_set(cm, 10, 0.0, 1);
    const AssumptionReport pass = validate_assumption_I(cm, full, 1e-12);
    CHECK(pass.ia_pass);
    CHECK(pass.ib_pass);
    CHECK(pass.pass);

    const CombinationMatrix u3 = build_uniform(path3());
    SparsityProfile all3;
    all3.node_count = 3;
    all3.aware_count = 3;
    all3.aware = {0, 1, 2};
    const AssumptionReport fail = validate_assumption_I(u3, all3, 1e-12);
    CHECK_FALSE(fail.ia_pass);  // row sum 4/3
    CHECK(fail.row_residual == doctest::Approx(1.0 / 3));

    const CombinationMatrix u8 = build_uniform(ring(8));
    SparsityProfile alternating;
    alternating.node_count = 8;
    alternating.aware_count = 4;
    alternating.aware = {0, 2, 4, 6};
    CHECK(validate_assumption_I(u8, alternating, 0.2).pass);
    CHECK_FALSE(validate_assumption_I(u8, alternating, 0.1).pass);
}

TEST_CASE("network JSON round trip") {
    const Topology t = generate_geometric_topology(9, 0.5, 13);
    const CombinationMatrix cm = build_uniform(t);
    const std::string doc = network_to_json(t, cm);
    const auto [t2, cm2] = network_from_json(doc);
    CHECK(t2.node_count == t.node_count);
    CHECK(t2.edges == t.edges);
    REQUIRE(t2.positions.size() == t.positions.size());
    for (size_t i = 0; i < t.positions.size(); ++i) {
        CHECK(t2.positions[i][0] == t.positions[i][0]);  // 17 digits round-trip exactly
        CHECK(t2.positions[i][1] == t.positions[i][1]);
    }
    CHECK(cm2.rule == cm.rule);
    CHECK((cm2.coefficients - cm.coefficients).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cm2.doubly_stochastic == cm.doubly_stochastic);
}

TEST_CASE("from_edges rejects malformed graphs") {
    CHECK_THROWS_AS(Topology::from_edges(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology::from_edges(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology::from_edges(4, {{0, 1}, {2, 3}}), std::invalid_argument);  // split
}
