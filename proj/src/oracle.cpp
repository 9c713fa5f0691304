#include "cds/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cds {

namespace {

// Uniform drift Jacobian bound over sigma_t^2 >= 1/2 in units of the
// target's smoothing level (callers normalize to sigma = 1 before sampling).
double drift_lipschitz_bound(const SmoothedTarget& target) {
    const double rn = target.prior().radius / target.sigma();
    return 2.0 + 4.0 * rn * rn;
}

class ExactOracle final : public ScoreOracle {
public:
    explicit ExactOracle(const SmoothedTarget& target)
        : ScoreOracle(0.0, drift_lipschitz_bound(target)), target_(target) {}

private:
    void evaluate_impl(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const override {
        target_.score_at_into(t, y, out);
    }

    const SmoothedTarget& target_;
};

class NoisyOracle final : public ScoreOracle {
public:
    NoisyOracle(const SmoothedTarget& target, double eps_err, int n_features, std::uint64_t seed)
        : ScoreOracle(eps_err, drift_lipschitz_bound(target) + eps_err / 2.0),
          target_(target),
          amplitude_(eps_err / (2.0 * n_features)) {
        Rng rng(seed);
        const int d = target.dim();
        u_.resize(d, n_features);
        w_.resize(d, n_features);
        nu_.resize(n_features);
        b_.resize(n_features);
        for (int f = 0; f < n_features; ++f) {
            u_.col(f) = rng.unit_vector(d);
            // direction scaled by a uniform radius keeps |w_f| <= 1
            w_.col(f) = rng.unit_vector(d) * rng.uniform();
            nu_[f] = 2.0 * rng.uniform() - 1.0;
            b_[f] = 2.0 * M_PI * rng.uniform();
        }
    }

private:
    void evaluate_impl(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const override {
        target_.score_at_into(t, y, out);
        for (Eigen::Index f = 0; f < nu_.size(); ++f) {
            const double phase = w_.col(f).dot(y) + nu_[f] * t + b_[f];
            out += amplitude_ * std::cos(phase) * u_.col(f);
        }
    }

    const SmoothedTarget& target_;
    double amplitude_;
    Eigen::MatrixXd u_, w_;
    Eigen::VectorXd nu_, b_;
};

}  // namespace

std::unique_ptr<ScoreOracle> exact_oracle(const SmoothedTarget& target) {
    return std::make_unique<ExactOracle>(target);
}

std::unique_ptr<ScoreOracle> noisy_oracle(const SmoothedTarget& target, double eps_err,
                                          int n_features, std::uint64_t seed) {
    if (!(eps_err > 0.0) || n_features < 1)
        throw std::invalid_argument("noisy_oracle: need eps_err > 0 and n_features >= 1");
    return std::make_unique<NoisyOracle>(target, eps_err, n_features, seed);
}

double lipschitz_probe(const ScoreOracle& oracle, double t, const Eigen::VectorXd& center,
                       double radius, int n_pairs, Rng& rng) {
    if (n_pairs < 1) throw std::invalid_argument("lipschitz_probe: need n_pairs >= 1");
    const int d = static_cast<int>(center.size());
    double best = 0.0;
    Eigen::VectorXd s1(d), s2(d);
    for (int p = 0; p < n_pairs; ++p) {
        const Eigen::VectorXd y1 = center + radius * rng.uniform() * rng.unit_vector(d);
        const Eigen::VectorXd y2 = center + radius * rng.uniform() * rng.unit_vector(d);
        const double gap = (y1 - y2).norm();
        if (gap == 0.0) continue;
        oracle.evaluate(t, y1, s1);
        oracle.evaluate(t, y2, s2);
        best = std::max(best, (s1 - s2).norm() / gap);
    }
    return best;
}

}  // namespace cds
