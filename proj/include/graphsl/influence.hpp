#pragma once

#include "graph.hpp"
#include "simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

namespace graphsl {

// Majority vote over the per-agent MAP indices at the final log-belief
// snapshot; vote ties and per-agent belief ties both resolve to the lowest
// index.
inline int estimate_true_state(const Matrix& final_lambda, int theta_ref) {
    std::vector<int> votes(static_cast<std::size_t>(final_lambda.rows()));
    for (Eigen::Index k = 0; k < final_lambda.rows(); ++k)
        votes[static_cast<std::size_t>(k)] = map_from_lambda_row(final_lambda.row(k), theta_ref);
    return majority_vote(votes);
}

inline int estimate_true_state(const std::vector<TraceRecord>& records, int theta_ref) {
    require(!records.empty(), "cannot estimate the true state from an empty trace");
    return estimate_true_state(records.back().lambda, theta_ref);
}

inline int estimate_true_state(const SimulationTrace& trace) {
    return estimate_true_state(trace.records, trace.theta_ref);
}

// Inverts the log-likelihood-ratio structure of the estimate into per-agent
// divergences from the estimated true state to every hypothesis. Each entry
// of the estimate is the divergence to its column's hypothesis minus the
// divergence to the reference, so when the estimated state is not the
// reference its own column supplies the correction term. Negative values can
// arise from estimation noise only and are clipped to zero; the estimated
// state's own column is identically zero.
inline Matrix recover_kl(const Matrix& llr_estimate, int estimated_state, int theta_ref = 0) {
    const Eigen::Index n = llr_estimate.rows();
    const int h = static_cast<int>(llr_estimate.cols()) + 1;
    require(theta_ref >= 0 && theta_ref < h, "reference hypothesis out of range");
    require(estimated_state >= 0 && estimated_state < h, "estimated state out of range");
    const auto col_of = [theta_ref](int theta) { return theta < theta_ref ? theta : theta - 1; };

    Matrix kl = Matrix::Zero(n, h);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double base = estimated_state == theta_ref
                                ? 0.0
                                : llr_estimate(k, col_of(estimated_state));
        for (int theta = 0; theta < h; ++theta) {
            if (theta == estimated_state) continue;
            const double value =
                theta == theta_ref ? -base : llr_estimate(k, col_of(theta)) - base;
            kl(k, theta) = std::max(0.0, value);
        }
    }
    return kl;
}

// Centrality-weighted sum of the per-agent divergences toward one hypothesis.
inline double network_divergence(const Vector& u, const Matrix& kls, int theta) {
    require(u.size() == kls.rows(), "centrality and divergence row counts disagree");
    require(theta >= 0 && theta < kls.cols(), "hypothesis index out of range");
    return u.dot(kls.col(theta));
}

// Per-agent contribution aggregate: centrality times the total divergence the
// agent holds against the non-true hypotheses.
inline Vector informativeness(const Vector& u, const Matrix& kls) {
    require(u.size() == kls.rows(), "centrality and divergence row counts disagree");
    return u.cwiseProduct(kls.rowwise().sum());
}

// Agent indices ordered by descending score; equal scores keep index order.
inline std::vector<int> rank_agents(const Vector& scores) {
    std::vector<int> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&scores](int a, int b) { return scores(a) > scores(b); });
    return order;
}

struct InfluenceReport {
    Vector centrality;                  // entries sum to one
    Matrix kl;                          // agents by hypotheses, true-state column zero
    Matrix contribution;                // centrality-scaled rows of kl
    Vector informativeness;             // raw per-agent totals
    Vector informativeness_normalized;  // display copy, sums to one when mass exists
    std::vector<int> ranking;           // agent ids, most informative first
    int estimated_state = 0;
    int theta_ref = 0;
};

// Full pipeline over a raw learned matrix, the final llr estimate and the
// final observed log-beliefs: repair the matrix, take its centrality, vote on
// the true state, invert the divergences and rank the agents.
inline InfluenceReport build_influence_report(const Matrix& learned_a,
                                              const Matrix& llr_estimate,
                                              const Matrix& final_lambda,
                                              int theta_ref = 0) {
    require(learned_a.rows() == llr_estimate.rows(),
            "matrix and llr estimate disagree on the agent count");
    InfluenceReport report;
    report.theta_ref = theta_ref;
    report.centrality = perron_vector(normalize_learned_matrix(learned_a));
    report.estimated_state = estimate_true_state(final_lambda, theta_ref);
    report.kl = recover_kl(llr_estimate, report.estimated_state, theta_ref);
    report.contribution = report.centrality.asDiagonal() * report.kl;
    report.informativeness = informativeness(report.centrality, report.kl);
    const double total = report.informativeness.sum();
    report.informativeness_normalized =
        total > 0.0 ? Vector(report.informativeness / total)
                    : Vector(Vector::Zero(report.informativeness.size()));
    report.ranking = rank_agents(report.informativeness);
    return report;
}

inline InfluenceReport build_influence_report(const Matrix& learned_a,
                                              const Matrix& llr_estimate,
                                              const std::vector<TraceRecord>& records,
                                              int theta_ref = 0) {
    require(!records.empty(), "cannot build a report from an empty trace");
    return build_influence_report(learned_a, llr_estimate, records.back().lambda, theta_ref);
}

inline nlohmann::json influence_report_to_json(const InfluenceReport& report) {
    nlohmann::json j;
    j["estimated_state"] = report.estimated_state;
    j["theta_ref"] = report.theta_ref;
    j["centrality"] = std::vector<double>(report.centrality.begin(), report.centrality.end());
    j["informativeness"] =
        std::vector<double>(report.informativeness.begin(), report.informativeness.end());
    j["informativeness_normalized"] =
        std::vector<double>(report.informativeness_normalized.begin(),
                            report.informativeness_normalized.end());
    j["ranking"] = report.ranking;
    auto rows_to_json = [](const Matrix& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index k = 0; k < m.rows(); ++k) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(k, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["kl"] = rows_to_json(report.kl);
    j["contribution"] = rows_to_json(report.contribution);
    return j;
}

// One row per agent in id order: centrality, raw informativeness, 1-based
// rank and the recovered divergence toward every hypothesis.
inline void write_influence_csv(std::ostream& out, const InfluenceReport& report) {
    out << "agent_id,u,informativeness,rank";
    for (Eigen::Index theta = 0; theta < report.kl.cols(); ++theta) out << ",kl_" << theta;
    out << '\n';
    out.precision(17);
    std::vector<int> rank_of(report.ranking.size());
    for (std::size_t pos = 0; pos < report.ranking.size(); ++pos)
        rank_of[static_cast<std::size_t>(report.ranking[pos])] = static_cast<int>(pos) + 1;
    for (Eigen::Index k = 0; k < report.centrality.size(); ++k) {
        out << k << ',' << report.centrality(k) << ',' << report.informativeness(k) << ','
            << rank_of[static_cast<std::size_t>(k)];
        for (Eigen::Index theta = 0; theta < report.kl.cols(); ++theta)
            out << ',' << report.kl(k, theta);
        out << '\n';
    }
}

}  // namespace graphsl
