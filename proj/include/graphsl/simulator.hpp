#pragma once

#include "graph.hpp"
#include "likelihood.hpp"

#include <utility>
#include <vector>

namespace graphsl {

// Iterations needed to forget initial conditions, ten times the adaptation
// half-life ln2/delta.
inline long default_burn_in(double delta) {
    return static_cast<long>(std::ceil(10.0 * std::log(2.0) / delta));
}

// Bayesian update damped by the step size: each row becomes the normalized
// product L^delta * prior^(1-delta) in the log domain.
inline Matrix adapt_step(const Matrix& log_prior, const std::vector<int>& obs,
                         const BernoulliLikelihood& models, double delta) {
    require(log_prior.rows() == models.agents() && log_prior.cols() == models.hypotheses(),
            "belief matrix shape does not match the models");
    require(static_cast<int>(obs.size()) == models.agents(), "one observation per agent");
    Matrix out(log_prior.rows(), log_prior.cols());
    for (int k = 0; k < models.agents(); ++k) {
        out.row(k) = delta * models.log_likelihood_row(k, obs[static_cast<std::size_t>(k)]) +
                     (1.0 - delta) * log_prior.row(k);
    }
    return normalize_log_rows(std::move(out));
}

// Geometric pooling over in-neighbors: log mu = A^T log psi, row-normalized.
inline Matrix combine_step(const Matrix& log_public, const CombinationMatrix& a) {
    require(log_public.rows() == a.size(), "belief matrix does not match the network size");
    return normalize_log_rows(a.weights.transpose() * log_public);
}

// Ratios of the reference hypothesis against every other one, columns in
// ascending hypothesis order with the reference skipped.
inline Matrix log_belief_matrix(const Matrix& log_beliefs, int theta_ref) {
    const int h = static_cast<int>(log_beliefs.cols());
    require(theta_ref >= 0 && theta_ref < h, "reference hypothesis out of range");
    Matrix lambda(log_beliefs.rows(), h - 1);
    int col = 0;
    for (int theta = 0; theta < h; ++theta) {
        if (theta == theta_ref) continue;
        lambda.col(col++) = log_beliefs.col(theta_ref) - log_beliefs.col(theta);
    }
    return lambda;
}

// Inverse of log_belief_matrix up to the simplex normalization.
inline Matrix beliefs_from_lambda(const Matrix& lambda, int theta_ref) {
    const int h = static_cast<int>(lambda.cols()) + 1;
    Matrix logb(lambda.rows(), h);
    int col = 0;
    for (int theta = 0; theta < h; ++theta) {
        if (theta == theta_ref) {
            logb.col(theta).setZero();
        } else {
            logb.col(theta) = -lambda.col(col++);
        }
    }
    return normalize_log_rows(std::move(logb)).array().exp();
}

// Ties resolve to the lowest hypothesis index.
inline int map_estimate(const Eigen::Ref<const Eigen::RowVectorXd>& log_belief_row) {
    int best = 0;
    for (int theta = 1; theta < log_belief_row.size(); ++theta)
        if (log_belief_row(theta) > log_belief_row(best)) best = theta;
    return best;
}

inline int map_from_lambda_row(const Eigen::Ref<const Eigen::RowVectorXd>& lambda_row,
                               int theta_ref) {
    const int h = static_cast<int>(lambda_row.size()) + 1;
    Eigen::RowVectorXd logb(h);
    int col = 0;
    for (int theta = 0; theta < h; ++theta)
        logb(theta) = theta == theta_ref ? 0.0 : -lambda_row(col++);
    return map_estimate(logb);
}

struct ThetaSwitch {
    long iteration;
    int theta;
};

struct PerturbationSchedule {
    // When positive, the topology is re-perturbed at every iteration i > 0
    // with i % topology_period == 0 and the weights rebuilt by the averaging
    // rule. Switches replace the active true state from their iteration on.
    long topology_period = 0;
    double flip_prob = 0.0;
    std::vector<ThetaSwitch> theta_switches;
};

struct SimulationConfig {
    SimulationConfig(DirectedGraph g, CombinationMatrix a, BernoulliLikelihood m)
        : graph(std::move(g)), matrix(std::move(a)), models(std::move(m)) {}

    DirectedGraph graph;
    CombinationMatrix matrix;
    BernoulliLikelihood models;
    int theta_star = 0;
    int theta_ref = 0;
    double delta = 0.05;
    long n_iterations = 0;
    long burn_in = 0;
    std::uint64_t seed = 0;
    PerturbationSchedule perturbation;
    bool capture_beliefs = false;
};

struct TraceRecord {
    long iteration = 0;
    Matrix lambda;
    std::vector<int> map;
    int theta_star = 0;
    std::vector<int> observations;  // kept in memory for exact replay checks
};

struct MatrixEpoch {
    long start;
    CombinationMatrix matrix;
};

struct SimulationTrace {
    std::vector<TraceRecord> records;
    std::vector<MatrixEpoch> matrix_history;
    int theta_ref = 0;
    double delta = 0.0;
    long burn_in = 0;
    std::vector<Matrix> log_public;   // populated when capture_beliefs is set
    std::vector<Matrix> log_private;

    // Weights governing the transition into iteration i.
    const CombinationMatrix& matrix_at(long i) const {
        const MatrixEpoch* current = &matrix_history.front();
        for (const auto& epoch : matrix_history) {
            if (epoch.start > i) break;
            current = &epoch;
        }
        return current->matrix;
    }
};

// Beliefs start uniform. Per iteration: scheduled changes first, then the
// combine of the previous public beliefs under the now-active weights, then
// one fresh observation per agent (ascending agent order, one engine seeded
// with config.seed). Topology events draw their seed from a second engine
// seeded with config.seed xor 0x9e3779b97f4a7c15, one value per event.
inline SimulationTrace run_simulation(const SimulationConfig& cfg) {
    const int n = cfg.models.agents();
    const int h = cfg.models.hypotheses();
    require(cfg.graph.size() == n && cfg.matrix.size() == n,
            "graph, matrix and models disagree on the network size");
    validate_combination(cfg.matrix);
    require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must lie inside (0, 1)");
    require(cfg.theta_star >= 0 && cfg.theta_star < h, "theta_star out of range");
    require(cfg.theta_ref >= 0 && cfg.theta_ref < h, "theta_ref out of range");
    require(cfg.n_iterations >= 0, "iteration count must be non-negative");
    require(cfg.burn_in >= 0 && cfg.burn_in <= cfg.n_iterations,
            "burn-in must fit inside the run");
    for (const auto& sw : cfg.perturbation.theta_switches)
        require(sw.theta >= 0 && sw.theta < h, "scheduled true state out of range");

    SimulationTrace trace;
    trace.theta_ref = cfg.theta_ref;
    trace.delta = cfg.delta;
    trace.burn_in = cfg.burn_in;
    trace.records.reserve(static_cast<std::size_t>(cfg.n_iterations));

    DirectedGraph graph = cfg.graph;
    CombinationMatrix a = cfg.matrix;
    trace.matrix_history.push_back({0, a});
    int theta_star = cfg.theta_star;

    Rng obs_engine(cfg.seed);
    Rng event_engine(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    Matrix log_private = Matrix::Constant(n, h, -std::log(static_cast<double>(h)));
    Matrix log_public;
    std::vector<int> obs(static_cast<std::size_t>(n));

    for (long i = 0; i < cfg.n_iterations; ++i) {
        for (const auto& sw : cfg.perturbation.theta_switches)
            if (sw.iteration == i) theta_star = sw.theta;
        if (cfg.perturbation.topology_period > 0 && i > 0 &&
            i % cfg.perturbation.topology_period == 0) {
            graph = perturb_topology(graph, cfg.perturbation.flip_prob, event_engine());
            a = uniform_combination_matrix(graph);
            trace.matrix_history.push_back({i, a});
        }
        if (i > 0) log_private = combine_step(log_public, a);
        for (int k = 0; k < n; ++k)
            obs[static_cast<std::size_t>(k)] = cfg.models.sample_observation(k, theta_star, obs_engine);
        log_public = adapt_step(log_private, obs, cfg.models, cfg.delta);

        TraceRecord rec;
        rec.iteration = i;
        rec.lambda = log_belief_matrix(log_public, cfg.theta_ref);
        rec.map.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) rec.map[static_cast<std::size_t>(k)] = map_estimate(log_public.row(k));
        rec.theta_star = theta_star;
        rec.observations = obs;
        if (cfg.capture_beliefs) {
            trace.log_public.push_back(log_public);
            trace.log_private.push_back(log_private);
        }
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

// Plurality winner; ties resolve to the lowest hypothesis index.
inline int majority_vote(const std::vector<int>& votes) {
    require(!votes.empty(), "cannot take a majority of nothing");
    int top = 0;
    for (int v : votes) top = std::max(top, v);
    std::vector<int> counts(static_cast<std::size_t>(top) + 1, 0);
    for (int v : votes) {
        require(v >= 0, "votes must be non-negative indices");
        ++counts[static_cast<std::size_t>(v)];
    }
    int best = 0;
    for (int t = 1; t <= top; ++t)
        if (counts[static_cast<std::size_t>(t)] > counts[static_cast<std::size_t>(best)]) best = t;
    return best;
}

// Running share of iterations whose plurality MAP estimate matched the true
// state active at that iteration.
inline std::vector<double> classification_rate(const std::vector<TraceRecord>& records) {
    std::vector<double> rate;
    rate.reserve(records.size());
    long correct = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        correct += majority_vote(records[i].map) == records[i].theta_star ? 1 : 0;
        rate.push_back(static_cast<double>(correct) / static_cast<double>(i + 1));
    }
    return rate;
}

}  // namespace graphsl
