#pragma once

// Online recovery of the combination matrix and the expected log-likelihood
// ratios from a stream of log-belief matrices. The learner never sees the
// raw observations: everything is driven by the publicly shared beliefs.

#include <graphsl/common.hpp>

#include <deque>
#include <vector>

namespace graphsl {

struct GslConfig {
    double mu = 0.1;         // gradient step size
    double delta = 0.05;     // adaptation weight of the belief process (given)
    long window = 50;        // samples averaged by the llr estimator
    long batch = 1;          // gradient terms averaged per update
    double l1_weight = 0.0;  // proximal soft-threshold weight, scaled by mu
    long burn_in = 0;        // samples consumed before updates may start
};

// Difference between the newest matrix and the mean of the window preceding
// it. The window must hold that preceding stretch plus the newest entry.
template <typename Sequence>
Matrix delta_matrix(const Sequence& window) {
    require(window.size() >= 2, "delta_matrix needs at least two samples");
    const auto m = static_cast<double>(window.size() - 1);
    Matrix mean = Matrix::Zero(window.front().rows(), window.front().cols());
    auto last = std::prev(window.end());
    for (auto it = window.begin(); it != last; ++it) mean += *it;
    return *last - mean / m;
}

// Windowed estimator of the expected log-likelihood ratio matrix, given a
// combination matrix candidate: each consecutive pair contributes the
// residual of the one-step belief recursion, and the mean residual is
// rescaled by the adaptation weight.
template <typename Sequence>
Matrix llr_estimate(const Sequence& window, const Matrix& a, double delta) {
    require(window.size() >= 2, "llr_estimate needs at least two samples");
    const auto m = static_cast<double>(window.size() - 1);
    Matrix sum = Matrix::Zero(window.front().rows(), window.front().cols());
    for (const auto& lambda : window) sum += lambda;
    const Matrix newer = sum - window.front();
    const Matrix older = sum - *std::prev(window.end());
    return (newer - (1.0 - delta) * a.transpose() * older) / (delta * m);
}

// Gradient of the one-sample quadratic cost with respect to the combination
// matrix candidate. When the llr estimate is computed from the same window
// at the same candidate, this collapses to
//   -(1-delta) * delta_prev * (delta_now - (1-delta) * delta_prev^T a)^T,
// which is the form the finite-difference check targets.
inline Matrix analytic_gradient(const Matrix& lambda, const Matrix& lambda_prev,
                                const Matrix& delta_prev, const Matrix& llr,
                                const Matrix& a, double delta) {
    return -(1.0 - delta) * delta_prev *
           (lambda.transpose() - (1.0 - delta) * lambda_prev.transpose() * a -
            delta * llr.transpose());
}

// Minimizer of the window-difference risk from sample second moments:
// c0 approximates E[delta_prev delta_prev^T], c1 approximates
// E[delta_prev delta_now^T].
inline Matrix closed_form_minimizer(const Matrix& c0, const Matrix& c1, double delta) {
    Eigen::FullPivLU<Matrix> lu(c0);
    require(lu.isInvertible(), "moment matrix is singular");
    return lu.solve(c1) / (1.0 - delta);
}

inline double reconstruction_error(const Matrix& estimate, const Matrix& truth) {
    require(estimate.rows() == truth.rows() && estimate.cols() == truth.cols(),
            "reconstruction_error shape mismatch");
    return (estimate - truth).squaredNorm();
}

// Streaming estimator. Feed log-belief matrices in time order; the estimate
// of the combination matrix starts uniform and moves by constant-step
// gradient updates, while the llr estimate is refreshed from the current
// window after every update, as the update itself prescribes.
class GslLearner {
  public:
    GslLearner(int agents, int width, GslConfig config)
        : config_(config),
          agents_(agents),
          width_(width),
          a_(Matrix::Constant(agents, agents, 1.0 / agents)),
          llr_(Matrix::Zero(agents, width)),
          sum_(Matrix::Zero(agents, width)),
          batch_sum_(Matrix::Zero(agents, agents)) {
        validate();
    }

    // Baseline variant with the expected log-likelihood matrix known in
    // advance; it is held fixed and never re-estimated.
    GslLearner(int agents, int width, GslConfig config, Matrix known_llr)
        : GslLearner(agents, width, config) {
        require(known_llr.rows() == agents && known_llr.cols() == width,
                "known llr shape mismatch");
        llr_ = std::move(known_llr);
        known_llr_ = true;
    }

    void advance(const Matrix& lambda) {
        require(lambda.rows() == agents_ && lambda.cols() == width_,
                "log-belief shape mismatch");
        ++seen_;
        if (full() && seen_ > config_.burn_in) update(lambda);
        push(lambda);
        if (full() && !known_llr_)
            llr_ = (sum_ - window_.front() -
                    (1.0 - config_.delta) * a_.transpose() * (sum_ - window_.back())) /
                   (config_.delta * static_cast<double>(config_.window));
    }

    const Matrix& a_estimate() const { return a_; }
    const Matrix& llr() const { return llr_; }
    long steps() const { return seen_; }
    bool warmed_up() const { return full(); }

  private:
    void validate() const {
        require(config_.mu >= 0.0, "step size must be nonnegative");
        require(config_.delta > 0.0 && config_.delta < 1.0,
                "adaptation weight must lie strictly between zero and one");
        require(config_.window >= 1, "window must hold at least one sample");
        require(config_.batch >= 1, "batch must hold at least one gradient");
        require(config_.l1_weight >= 0.0, "penalty weight must be nonnegative");
        require(config_.burn_in >= 0, "burn-in must be nonnegative");
        require(agents_ >= 1 && width_ >= 1, "empty learner shape");
    }

    bool full() const {
        return window_.size() == static_cast<std::size_t>(config_.window) + 1;
    }

    void update(const Matrix& lambda) {
        const double delta = config_.delta;
        const Matrix& newest = window_.back();
        // With the llr matrix known, the one-sample quadratic is exact and its
        // gradient carries the raw previous log-belief as the left factor; the
        // estimating variant centers it by the window mean instead.
        Matrix factor =
            known_llr_
                ? newest
                : newest - (sum_ - newest) / static_cast<double>(config_.window);
        batch_sum_ += factor * (lambda.transpose() -
                                (1.0 - delta) * newest.transpose() * a_ -
                                delta * llr_.transpose());
        if (++batch_fill_ < config_.batch) return;
        a_ += config_.mu * (1.0 - delta) * batch_sum_ / static_cast<double>(config_.batch);
        if (config_.l1_weight > 0.0) {
            const double cut = config_.mu * config_.l1_weight;
            a_ = a_.unaryExpr([cut](double v) {
                return v > cut ? v - cut : (v < -cut ? v + cut : 0.0);
            });
        }
        batch_sum_.setZero();
        batch_fill_ = 0;
    }

    void push(const Matrix& lambda) {
        window_.push_back(lambda);
        sum_ += lambda;
        if (window_.size() > static_cast<std::size_t>(config_.window) + 1) {
            sum_ -= window_.front();
            window_.pop_front();
        }
        // The running sum accumulates rounding drift; rebuild it from the
        // stored matrices once in a while.
        if (++since_rebuild_ >= 10000) {
            sum_.setZero();
            for (const Matrix& entry : window_) sum_ += entry;
            since_rebuild_ = 0;
        }
    }

    GslConfig config_;
    int agents_;
    int width_;
    bool known_llr_ = false;
    long seen_ = 0;
    long batch_fill_ = 0;
    long since_rebuild_ = 0;
    Matrix a_;
    Matrix llr_;
    Matrix sum_;
    Matrix batch_sum_;
    std::deque<Matrix> window_;
};

}  // namespace graphsl
