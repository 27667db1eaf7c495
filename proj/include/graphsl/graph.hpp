#pragma once

#include "common.hpp"

#include <json.hpp>

#include <ostream>
#include <vector>

namespace graphsl {

// adjacency(l, k) is true when agent l sends to agent k. Self-loops are
// forced on every generated graph so each agent always hears itself.
struct DirectedGraph {
    BoolMatrix adjacency;

    int size() const { return static_cast<int>(adjacency.rows()); }
};

// weights(l, k) is the weight agent k assigns to agent l; each column lies on
// the simplex and its support matches the adjacency of the underlying graph.
struct CombinationMatrix {
    Matrix weights;

    int size() const { return static_cast<int>(weights.rows()); }
};

inline void validate_combination(const CombinationMatrix& a) {
    require(a.weights.rows() == a.weights.cols() && a.weights.rows() > 0,
            "combination matrix must be square and non-empty");
    require(a.weights.minCoeff() >= 0.0, "combination weights must be non-negative");
    for (Eigen::Index k = 0; k < a.weights.cols(); ++k) {
        require(std::abs(a.weights.col(k).sum() - 1.0) <= 1e-12,
                "combination matrix column does not sum to 1");
    }
}

inline bool is_strongly_connected(const DirectedGraph& g) {
    const int n = g.size();
    if (n == 0) return false;
    // Forward and reverse reachability from node 0 cover the whole graph iff
    // the graph is strongly connected.
    auto covers = [&](bool reverse) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int found = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w) {
                const bool edge = reverse ? g.adjacency(w, v) : g.adjacency(v, w);
                if (edge && !seen[w]) {
                    seen[w] = 1;
                    ++found;
                    stack.push_back(w);
                }
            }
        }
        return found == n;
    };
    return covers(false) && covers(true);
}

// Samples each off-diagonal edge independently with probability edge_prob,
// visiting entries row-major with a single uniform draw per entry, and keeps
// resampling (same engine) until the result is strongly connected. Draw order
// is part of the contract so seeded runs can be reproduced externally.
inline DirectedGraph generate_erdos_renyi(int n, double edge_prob, std::uint64_t seed) {
    require(n > 0, "graph size must be positive");
    require(edge_prob >= 0.0 && edge_prob <= 1.0, "edge probability must lie in [0, 1]");
    Rng engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        DirectedGraph g{BoolMatrix::Constant(n, n, false)};
        for (int l = 0; l < n; ++l) {
            for (int k = 0; k < n; ++k) {
                g.adjacency(l, k) = l == k ? true : unit(engine) < edge_prob;
            }
        }
        if (is_strongly_connected(g)) return g;
    }
    throw std::runtime_error("no strongly connected graph found in 1000 attempts");
}

// Averaging rule: agent k splits weight evenly over its in-neighborhood
// (sources sending to k, self included).
inline CombinationMatrix uniform_combination_matrix(const DirectedGraph& g) {
    const int n = g.size();
    require(n > 0, "graph must be non-empty");
    Matrix w = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        require(g.adjacency(k, k), "graph is missing a self-loop");
        int indegree = 0;
        for (int l = 0; l < n; ++l) indegree += g.adjacency(l, k) ? 1 : 0;
        for (int l = 0; l < n; ++l)
            if (g.adjacency(l, k)) w(l, k) = 1.0 / indegree;
    }
    return CombinationMatrix{w};
}

// Power iteration for the right eigenvector of the eigenvalue 1 of a
// left-stochastic matrix, started from the uniform vector. The iteration
// preserves the entry sum, so only the fixed-point residual is monitored.
inline Vector perron_vector(const CombinationMatrix& a, double tol = 1e-12,
                            int max_iter = 100000) {
    validate_combination(a);
    const int n = a.size();
    Vector u = Vector::Constant(n, 1.0 / n);
    for (int it = 0; it < max_iter; ++it) {
        Vector next = a.weights * u;
        next /= next.sum();
        const double residual = (a.weights * next - next).cwiseAbs().sum();
        u = next;
        if (residual <= tol) {
            if (u.minCoeff() <= 10.0 * n * tol) {
                throw std::runtime_error(
                    "perron vector has a vanishing entry; matrix looks reducible");
            }
            return u;
        }
    }
    throw std::runtime_error("perron power iteration did not converge");
}

// Repairs a raw learned matrix into a valid combination matrix: negative
// entries are clipped to zero, surviving columns rescale to sum 1, and a
// column with no mass left degenerates to a pure self-weight.
inline CombinationMatrix normalize_learned_matrix(const Matrix& raw) {
    require(raw.rows() == raw.cols() && raw.rows() > 0,
            "learned matrix must be square and non-empty");
    Matrix w = raw.cwiseMax(0.0);
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
        const double mass = w.col(k).sum();
        if (mass > 0.0) {
            w.col(k) /= mass;
        } else {
            w.col(k).setZero();
            w(k, k) = 1.0;
        }
    }
    return CombinationMatrix{w};
}

// Toggles each off-diagonal entry of the original adjacency independently
// with probability flip_prob (row-major, one uniform draw per entry, shared
// engine across attempts) and retries from the original until the perturbed
// graph is strongly connected. Self-loops are never touched.
inline DirectedGraph perturb_topology(const DirectedGraph& g, double flip_prob,
                                      std::uint64_t seed) {
    require(flip_prob >= 0.0 && flip_prob <= 1.0, "flip probability must lie in [0, 1]");
    const int n = g.size();
    Rng engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        DirectedGraph out{g.adjacency};
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                if (l != k && unit(engine) < flip_prob) out.adjacency(l, k) = !out.adjacency(l, k);
        if (is_strongly_connected(out)) return out;
    }
    throw std::runtime_error("no strongly connected perturbation found in 1000 attempts");
}

inline nlohmann::json matrix_to_json_fields(const Matrix& m) {
    nlohmann::json j;
    j["n"] = m.rows();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index l = 0; l < m.rows(); ++l)
        for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(m(l, k));
    j["weights"] = flat;
    return j;
}

inline Matrix matrix_from_json_fields(const nlohmann::json& j) {
    require(j.contains("n") && j.contains("weights"), "matrix json needs 'n' and 'weights'");
    const int n = j.at("n").get<int>();
    require(n > 0, "matrix json has non-positive size");
    const auto flat = j.at("weights").get<std::vector<double>>();
    require(static_cast<int>(flat.size()) == n * n, "matrix json weight count mismatch");
    Matrix m(n, n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) m(l, k) = flat[static_cast<std::size_t>(l) * n + k];
    return m;
}

inline nlohmann::json combination_to_json(const CombinationMatrix& a) {
    return matrix_to_json_fields(a.weights);
}

inline CombinationMatrix combination_from_json(const nlohmann::json& j) {
    CombinationMatrix a{matrix_from_json_fields(j)};
    validate_combination(a);
    return a;
}

inline nlohmann::json graph_to_json(const DirectedGraph& g) {
    return matrix_to_json_fields(g.adjacency.cast<double>());
}

inline DirectedGraph graph_from_json(const nlohmann::json& j) {
    Matrix m = matrix_from_json_fields(j);
    return DirectedGraph{m.array() != 0.0};
}

inline void write_perron_csv(std::ostream& out, const Vector& u) {
    out << "agent_id,u\n";
    out.precision(17);
    for (Eigen::Index k = 0; k < u.size(); ++k) out << k << ',' << u(k) << '\n';
}

}  // namespace graphsl
