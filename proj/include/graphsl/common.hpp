#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace graphsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Rng = std::mt19937_64;

// log(sum(exp(x))) over a row, stable for large negative entries.
inline double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const double m = row.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((row.array() - m).exp().sum());
}

// Shift every row of a log-weight matrix so that exp of each row sums to 1.
inline Matrix normalize_log_rows(Matrix log_weights) {
    for (Eigen::Index r = 0; r < log_weights.rows(); ++r) {
        log_weights.row(r).array() -= log_sum_exp(log_weights.row(r));
    }
    return log_weights;
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace graphsl
