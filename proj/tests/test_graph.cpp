#include <graphsl/graph.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace graphsl;
using Catch::Approx;

namespace {

// Independent re-implementation of the documented Erdos-Renyi draw order:
// one engine, one unit-interval distribution, off-diagonal entries visited
// row-major, whole pass retried while the sample is not strongly connected.
BoolMatrix reference_erdos_renyi(int n, double p, std::uint64_t seed, int* attempts = nullptr) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 1; attempt <= 1000; ++attempt) {
        BoolMatrix adj = BoolMatrix::Constant(n, n, false);
        for (int l = 0; l < n; ++l) {
            for (int k = 0; k < n; ++k) {
                if (l == k)
                    adj(l, k) = true;
                else
                    adj(l, k) = unit(engine) < p;
            }
        }
        if (oracle::strongly_connected(adj)) {
            if (attempts) *attempts = attempt;
            return adj;
        }
    }
    throw std::runtime_error("reference generator exhausted attempts");
}

BoolMatrix reference_perturb(const BoolMatrix& base, double flip, std::uint64_t seed) {
    const int n = static_cast<int>(base.rows());
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        BoolMatrix adj = base;
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                if (l != k && unit(engine) < flip) adj(l, k) = !adj(l, k);
        if (oracle::strongly_connected(adj)) return adj;
    }
    throw std::runtime_error("reference perturbation exhausted attempts");
}

DirectedGraph graph_from(std::initializer_list<std::initializer_list<int>> rows) {
    const int n = static_cast<int>(rows.size());
    BoolMatrix adj(n, n);
    int l = 0;
    for (const auto& row : rows) {
        int k = 0;
        for (int v : row) adj(l, k++) = v != 0;
        ++l;
    }
    return DirectedGraph{adj};
}

}  // namespace

TEST_CASE("erdos-renyi follows the documented draw order", "[graph]") {
    for (auto [n, p, seed] : {std::tuple{5, 0.5, 42ull}, {6, 0.25, 3ull}, {6, 0.25, 9ull}}) {
        DirectedGraph g = generate_erdos_renyi(n, p, seed);
        BoolMatrix expected = reference_erdos_renyi(n, p, seed);
        REQUIRE(g.size() == n);
        CHECK(g.adjacency == expected);
    }
}

TEST_CASE("erdos-renyi exercises the resample path", "[graph]") {
    // At n=6, p=0.25 single passes are frequently not strongly connected, so
    // at least one of these seeds has to go around more than once.
    bool resampled = false;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        int attempts = 0;
        BoolMatrix expected = reference_erdos_renyi(6, 0.25, seed, &attempts);
        resampled = resampled || attempts > 1;
        CHECK(generate_erdos_renyi(6, 0.25, seed).adjacency == expected);
    }
    CHECK(resampled);
}

TEST_CASE("erdos-renyi dense two-node case keeps both cross edges", "[graph]") {
    DirectedGraph g = generate_erdos_renyi(2, 0.999, 0);
    CHECK(g.adjacency(0, 1));
    CHECK(g.adjacency(1, 0));
    CHECK(g.adjacency(0, 0));
    CHECK(g.adjacency(1, 1));
}

TEST_CASE("erdos-renyi output is self-looped and strongly connected", "[graph]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DirectedGraph g = generate_erdos_renyi(20, 0.2, seed);
        for (int k = 0; k < 20; ++k) REQUIRE(g.adjacency(k, k));
        CHECK(is_strongly_connected(g));
        CHECK(oracle::strongly_connected(g.adjacency));
    }
}

TEST_CASE("erdos-renyi gives up when connectivity is unreachable", "[graph]") {
    CHECK_THROWS_AS(generate_erdos_renyi(3, 0.0, 7), std::runtime_error);
    CHECK_THROWS_AS(generate_erdos_renyi(0, 0.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(generate_erdos_renyi(3, -0.1, 7), std::invalid_argument);
    CHECK_THROWS_AS(generate_erdos_renyi(3, 1.5, 7), std::invalid_argument);
}

TEST_CASE("strong connectivity detection", "[graph]") {
    CHECK(is_strongly_connected(graph_from({{1}})));
    CHECK_FALSE(is_strongly_connected(graph_from({{1, 1}, {0, 1}})));
    // Directed 5-cycle.
    CHECK(is_strongly_connected(graph_from({{1, 1, 0, 0, 0},
                                            {0, 1, 1, 0, 0},
                                            {0, 0, 1, 1, 0},
                                            {0, 0, 0, 1, 1},
                                            {1, 0, 0, 0, 1}})));
    // Same cycle with the closing edge removed.
    CHECK_FALSE(is_strongly_connected(graph_from({{1, 1, 0, 0, 0},
                                                  {0, 1, 1, 0, 0},
                                                  {0, 0, 1, 1, 0},
                                                  {0, 0, 0, 1, 1},
                                                  {0, 0, 0, 0, 1}})));
}

TEST_CASE("uniform combination weights on hand-built graphs", "[graph]") {
    DirectedGraph complete4 = graph_from(
        {{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}});
    CombinationMatrix a = uniform_combination_matrix(complete4);
    CHECK((a.weights.array() - 0.25).abs().maxCoeff() < 1e-15);

    DirectedGraph pair = graph_from({{1, 1}, {1, 1}});
    CHECK((uniform_combination_matrix(pair).weights.array() - 0.5).abs().maxCoeff() < 1e-15);

    // Node 1 hears {0, 1, 2}; nodes 0 and 2 hear only themselves.
    DirectedGraph fan = graph_from({{1, 1, 0}, {0, 1, 0}, {0, 1, 1}});
    Matrix w = uniform_combination_matrix(fan).weights;
    CHECK(w(0, 0) == 1.0);
    CHECK(w(2, 2) == 1.0);
    CHECK(w(0, 1) == Approx(1.0 / 3.0));
    CHECK(w(1, 1) == Approx(1.0 / 3.0));
    CHECK(w(2, 1) == Approx(1.0 / 3.0));
    CHECK(w(1, 0) == 0.0);
}

TEST_CASE("uniform combination weights satisfy the column contract", "[graph]") {
    for (std::uint64_t seed : {4ull, 8ull, 15ull}) {
        DirectedGraph g = generate_erdos_renyi(12, 0.3, seed);
        CombinationMatrix a = uniform_combination_matrix(g);
        validate_combination(a);
        for (int k = 0; k < 12; ++k) {
            CHECK(std::abs(a.weights.col(k).sum() - 1.0) < 1e-12);
            for (int l = 0; l < 12; ++l) {
                CHECK((a.weights(l, k) > 0.0) == g.adjacency(l, k));
            }
        }
    }
}

TEST_CASE("perron vector of a doubly stochastic matrix is uniform", "[graph]") {
    const int n = 6;
    Matrix w = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        w(k, k) = 0.5;
        w((k + 1) % n, k) = 0.5;
    }
    Vector u = perron_vector(CombinationMatrix{w});
    CHECK((u.array() - 1.0 / n).abs().maxCoeff() < 1e-10);
}

TEST_CASE("perron vector matches a dense eigensolve", "[graph]") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        CombinationMatrix a = uniform_combination_matrix(generate_erdos_renyi(6, 0.4, seed));
        Vector u = perron_vector(a);
        Vector ref = oracle::perron_dense(a.weights);
        CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("perron vector trivial and contract cases", "[graph]") {
    Matrix one(1, 1);
    one << 1.0;
    CHECK(perron_vector(CombinationMatrix{one})(0) == Approx(1.0));

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CombinationMatrix a = uniform_combination_matrix(generate_erdos_renyi(20, 0.2, seed));
        Vector u = perron_vector(a);
        CHECK(std::abs(u.sum() - 1.0) < 1e-10);
        CHECK(u.minCoeff() > 0.0);
        CHECK((a.weights * u - u).cwiseAbs().sum() <= 1e-12);
    }
}

TEST_CASE("perron vector rejects a reducible chain", "[graph]") {
    Matrix w(2, 2);
    w << 1.0, 0.5,
         0.0, 0.5;
    CHECK_THROWS_AS(perron_vector(CombinationMatrix{w}), std::runtime_error);
}

TEST_CASE("normalize_learned_matrix repairs raw estimates", "[graph]") {
    CombinationMatrix clean = uniform_combination_matrix(generate_erdos_renyi(8, 0.4, 2));
    CHECK((normalize_learned_matrix(clean.weights).weights - clean.weights)
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    Matrix raw(3, 3);
    // col 0: one negative entry; col 1: all zero; col 2: all non-positive.
    raw << -0.1, 0.0, -1.0,
            0.6, 0.0, -2.0,
            0.5, 0.0,  0.0;
    Matrix fixed = normalize_learned_matrix(raw).weights;
    CHECK(fixed(0, 0) == 0.0);
    CHECK(fixed(1, 0) == Approx(6.0 / 11.0));
    CHECK(fixed(2, 0) == Approx(5.0 / 11.0));
    CHECK(fixed(1, 1) == 1.0);
    CHECK(fixed(0, 1) == 0.0);
    CHECK(fixed(2, 2) == 1.0);
    validate_combination(CombinationMatrix{fixed});
}

TEST_CASE("perturb_topology with zero probability is the identity", "[graph]") {
    DirectedGraph g = generate_erdos_renyi(10, 0.3, 6);
    CHECK(perturb_topology(g, 0.0, 99).adjacency == g.adjacency);
}

TEST_CASE("perturb_topology follows the documented draw order", "[graph]") {
    DirectedGraph base = generate_erdos_renyi(8, 0.4, 5);
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        DirectedGraph got = perturb_topology(base, 0.05, seed);
        CHECK(got.adjacency == reference_perturb(base.adjacency, 0.05, seed));
    }
}

TEST_CASE("perturb_topology preserves self loops and connectivity", "[graph]") {
    DirectedGraph base = generate_erdos_renyi(20, 0.2, 1);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        DirectedGraph got = perturb_topology(base, 0.01, seed);
        for (int k = 0; k < 20; ++k) REQUIRE(got.adjacency(k, k));
        CHECK(oracle::strongly_connected(got.adjacency));
    }
}

TEST_CASE("perturb_topology mean toggle count tracks the flip probability", "[graph]") {
    DirectedGraph base = generate_erdos_renyi(20, 0.2, 2);
    long toggles = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        DirectedGraph got = perturb_topology(base, 0.005, 1000 + t);
        for (int l = 0; l < 20; ++l)
            for (int k = 0; k < 20; ++k)
                if (l != k && got.adjacency(l, k) != base.adjacency(l, k)) ++toggles;
    }
    // 380 off-diagonal entries at 0.5% each: mean 1.9 toggles per draw.
    double mean = static_cast<double>(toggles) / trials;
    CHECK(mean > 1.6);
    CHECK(mean < 2.2);
}

TEST_CASE("combination matrix json round trip", "[graph]") {
    Matrix w(2, 2);
    w << 0.9, 0.2,
         0.1, 0.8;
    nlohmann::json j = combination_to_json(CombinationMatrix{w});
    CHECK(j["n"] == 2);
    CHECK(j["weights"] == nlohmann::json({0.9, 0.2, 0.1, 0.8}));
    CombinationMatrix back = combination_from_json(j);
    CHECK((back.weights - w).cwiseAbs().maxCoeff() == 0.0);

    nlohmann::json bad = j;
    bad["weights"] = {0.9, 0.2, 0.3, 0.8};
    CHECK_THROWS_AS(combination_from_json(bad), std::invalid_argument);
    nlohmann::json truncated = j;
    truncated["weights"] = {0.9, 0.2};
    CHECK_THROWS_AS(combination_from_json(truncated), std::invalid_argument);
}

TEST_CASE("graph json round trip", "[graph]") {
    DirectedGraph g = generate_erdos_renyi(7, 0.3, 4);
    DirectedGraph back = graph_from_json(graph_to_json(g));
    CHECK(back.adjacency == g.adjacency);
}

TEST_CASE("perron csv export", "[graph]") {
    Vector u(3);
    u << 0.25, 0.5, 0.25;
    std::ostringstream out;
    write_perron_csv(out, u);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "agent_id,u");
    int id;
    double value;
    char comma;
    std::getline(in, line);
    std::istringstream(line) >> id >> comma >> value;
    CHECK(id == 0);
    CHECK(value == 0.25);
    std::getline(in, line);
    std::istringstream(line) >> id >> comma >> value;
    CHECK(value == 0.5);
}
