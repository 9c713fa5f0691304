#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include <Eigen/Core>

#include "cds/mixture.hpp"
#include "cds/rng.hpp"

namespace cds {

/// Score-estimate contract: a deterministic vector field s_t(y) with a
/// declared uniform error level, a declared Lipschitz constant, and an
/// evaluation counter (the cost model for all complexity accounting).
class ScoreOracle {
public:
    virtual ~ScoreOracle() = default;

    /// Writes the estimate s_t(y) into out and increments the counter once.
    void evaluate(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const {
        counter_.fetch_add(1, std::memory_order_relaxed);
        evaluate_impl(t, y, out);
    }

    Eigen::VectorXd evaluate(double t, const Eigen::VectorXd& y) const {
        Eigen::VectorXd out;
        evaluate(t, y, out);
        return out;
    }

    double eps_err() const { return eps_err_; }
    double lipschitz() const { return lipschitz_; }
    std::uint64_t eval_count() const { return counter_.load(std::memory_order_relaxed); }
    void reset_count() const { counter_.store(0, std::memory_order_relaxed); }

protected:
    ScoreOracle(double eps_err, double lipschitz) : eps_err_(eps_err), lipschitz_(lipschitz) {}
    virtual void evaluate_impl(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const = 0;

private:
    double eps_err_;
    double lipschitz_;
    mutable std::atomic<std::uint64_t> counter_{0};
};

/// Closed-form mixture score, zero error. Declared Lipschitz constant
/// 2 + 4R^2 covers the drift Jacobian uniformly over sigma_t^2 >= 1/2.
std::unique_ptr<ScoreOracle> exact_oracle(const SmoothedTarget& target);

/// Score plus a fixed smooth random-feature perturbation of sup norm
/// eps_err / 2: e(t,y) = (eps/2F) sum_f u_f cos(<w_f, y> + nu_f t + b_f)
/// with |w_f| <= 1 and |nu_f| <= 1, all drawn once from the seed.
std::unique_ptr<ScoreOracle> noisy_oracle(const SmoothedTarget& target, double eps_err,
                                          int n_features, std::uint64_t seed);

/// Max of |s(t,y) - s(t,y')| / |y - y'| over random pairs in the ball of the
/// given radius around center. Coincident pairs are skipped.
double lipschitz_probe(const ScoreOracle& oracle, double t, const Eigen::VectorXd& center,
                       double radius, int n_pairs, Rng& rng);

}  // namespace cds
