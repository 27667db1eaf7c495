#pragma once

#include "common.hpp"

#include <json.hpp>

#include <algorithm>
#include <vector>

namespace graphsl {

// Family of per-agent Bernoulli observation models over a shared hypothesis
// set. table(k, theta) is the probability that agent k observes outcome 0
// when theta is the active state; outcome 1 has the complementary mass.
class BernoulliLikelihood {
public:
    explicit BernoulliLikelihood(Matrix table) : p_(std::move(table)) {
        require(p_.rows() >= 1 && p_.cols() >= 2,
                "likelihood table needs at least one agent and two hypotheses");
        require(p_.minCoeff() > 0.0 && p_.maxCoeff() < 1.0,
                "likelihood table entries must lie strictly inside (0, 1)");
    }

    int agents() const { return static_cast<int>(p_.rows()); }
    int hypotheses() const { return static_cast<int>(p_.cols()); }
    double p(int k, int theta) const { return p_(k, theta); }
    const Matrix& table() const { return p_; }

    double kl_divergence(int k, int theta_a, int theta_b) const {
        const double pa = p_(k, theta_a);
        const double pb = p_(k, theta_b);
        return pa * std::log(pa / pb) + (1.0 - pa) * std::log((1.0 - pa) / (1.0 - pb));
    }

    // One uniform draw; outcome 0 with the table probability.
    int sample_observation(int k, int theta_true, Rng& engine) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        return unit(engine) < p_(k, theta_true) ? 0 : 1;
    }

    // log L_k(obs | theta) across the hypothesis set.
    Eigen::RowVectorXd log_likelihood_row(int k, int obs) const {
        Eigen::RowVectorXd row(hypotheses());
        for (int theta = 0; theta < hypotheses(); ++theta) {
            const double q = obs == 0 ? p_(k, theta) : 1.0 - p_(k, theta);
            row(theta) = std::log(q);
        }
        return row;
    }

    // Ratios against the reference hypothesis, one column per non-reference
    // hypothesis in ascending index order.
    Vector llr_row(int k, int obs, int theta_ref) const {
        Vector row(hypotheses() - 1);
        const double ref = obs == 0 ? p_(k, theta_ref) : 1.0 - p_(k, theta_ref);
        int col = 0;
        for (int theta = 0; theta < hypotheses(); ++theta) {
            if (theta == theta_ref) continue;
            const double q = obs == 0 ? p_(k, theta) : 1.0 - p_(k, theta);
            row(col++) = std::log(ref / q);
        }
        return row;
    }

    // Mean of llr_row under observations drawn from theta_star.
    Matrix expected_llr_matrix(int theta_star, int theta_ref) const {
        Matrix bar(agents(), hypotheses() - 1);
        for (int k = 0; k < agents(); ++k) {
            const double base = kl_divergence(k, theta_star, theta_ref);
            int col = 0;
            for (int theta = 0; theta < hypotheses(); ++theta) {
                if (theta == theta_ref) continue;
                bar(k, col++) = kl_divergence(k, theta_star, theta) - base;
            }
        }
        return bar;
    }

    // Largest log ratio any single observation can move a belief by.
    double max_log_ratio() const {
        double b = 0.0;
        for (int k = 0; k < agents(); ++k)
            for (int obs : {0, 1})
                for (int a = 0; a < hypotheses(); ++a)
                    for (int c = 0; c < hypotheses(); ++c) {
                        const double qa = obs == 0 ? p_(k, a) : 1.0 - p_(k, a);
                        const double qc = obs == 0 ? p_(k, c) : 1.0 - p_(k, c);
                        b = std::max(b, std::abs(std::log(qa / qc)));
                    }
        return b;
    }

private:
    Matrix p_;
};

inline std::vector<double> make_sigma_profile(int n, const std::vector<int>& influential,
                                              double sigma_influential = 0.5,
                                              double sigma_base = 0.05) {
    require(n > 0, "profile needs at least one agent");
    std::vector<double> sigma2(static_cast<std::size_t>(n), sigma_base);
    for (int k : influential) {
        require(k >= 0 && k < n, "influential agent id out of range");
        sigma2[static_cast<std::size_t>(k)] = sigma_influential;
    }
    return sigma2;
}

// Gaussian-perturbed two-point models around (0.3, 0.7). The reference
// hypothesis keeps the unperturbed value for every agent; each remaining cell
// repeats two standard-normal draws (shared engine, agents outer, hypotheses
// inner) until both perturbed components are positive and the normalized
// value lands inside [0.05, 0.95]. A full table that fails pairwise
// distinguishability is redrawn outright.
inline BernoulliLikelihood generate_models(int n_hypotheses,
                                           const std::vector<double>& sigma2,
                                           std::uint64_t seed) {
    const int n = static_cast<int>(sigma2.size());
    require(n > 0, "sigma profile must be non-empty");
    require(n_hypotheses >= 2, "need at least two hypotheses");
    for (double s : sigma2) require(s > 0.0, "sigma squared must be positive");

    Rng engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int table_attempt = 0; table_attempt < 1000; ++table_attempt) {
        Matrix p(n, n_hypotheses);
        for (int k = 0; k < n; ++k) {
            p(k, 0) = 0.3;
            for (int theta = 1; theta < n_hypotheses; ++theta) {
                int attempt = 0;
                for (;; ++attempt) {
                    if (attempt >= 1000)
                        throw std::runtime_error("likelihood draw rejected 1000 times");
                    const double a = 0.3 + sigma2[static_cast<std::size_t>(k)] * gauss(engine);
                    const double b = 0.7 + sigma2[static_cast<std::size_t>(k)] * gauss(engine);
                    if (a <= 0.0 || b <= 0.0) continue;
                    const double ratio = a / (a + b);
                    if (ratio < 0.05 || ratio > 0.95) continue;
                    p(k, theta) = ratio;
                    break;
                }
            }
        }
        // Every pair of hypotheses must be distinguishable by some agent.
        bool identifiable = true;
        for (int a = 0; a < n_hypotheses && identifiable; ++a) {
            for (int c = 0; c < n_hypotheses && identifiable; ++c) {
                if (a == c) continue;
                bool separated = false;
                for (int k = 0; k < n && !separated; ++k) separated = p(k, a) != p(k, c);
                identifiable = separated;
            }
        }
        if (identifiable) return BernoulliLikelihood(std::move(p));
    }
    throw std::runtime_error("could not draw an identifiable model table");
}

inline nlohmann::json models_to_json(const BernoulliLikelihood& models, int theta_star,
                                     int theta_ref) {
    nlohmann::json j;
    j["H"] = models.hypotheses();
    j["theta_star"] = theta_star;
    j["theta_ref"] = theta_ref;
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 0; k < models.agents(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int theta = 0; theta < models.hypotheses(); ++theta) row.push_back(models.p(k, theta));
        rows.push_back(std::move(row));
    }
    j["p"] = std::move(rows);
    return j;
}

struct LoadedModels {
    BernoulliLikelihood models;
    int theta_star;
    int theta_ref;
};

inline LoadedModels models_from_json(const nlohmann::json& j) {
    require(j.contains("H") && j.contains("theta_star") && j.contains("theta_ref") &&
                j.contains("p"),
            "model json needs 'H', 'theta_star', 'theta_ref' and 'p'");
    const int h = j.at("H").get<int>();
    const auto& rows = j.at("p");
    require(rows.is_array() && !rows.empty(), "model json 'p' must be a non-empty array");
    Matrix p(static_cast<Eigen::Index>(rows.size()), h);
    for (Eigen::Index k = 0; k < p.rows(); ++k) {
        const auto row = rows.at(static_cast<std::size_t>(k)).get<std::vector<double>>();
        require(static_cast<int>(row.size()) == h, "model json row width mismatch");
        for (int theta = 0; theta < h; ++theta) {
            require(row[static_cast<std::size_t>(theta)] > 0.0 &&
                        row[static_cast<std::size_t>(theta)] < 1.0,
                    "model json probability out of range");
            p(k, theta) = row[static_cast<std::size_t>(theta)];
        }
    }
    const int star = j.at("theta_star").get<int>();
    const int ref = j.at("theta_ref").get<int>();
    require(star >= 0 && star < h, "theta_star out of range");
    require(ref >= 0 && ref < h, "theta_ref out of range");
    return LoadedModels{BernoulliLikelihood(std::move(p)), star, ref};
}

}  // namespace graphsl
