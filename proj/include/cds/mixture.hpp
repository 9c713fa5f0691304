#pragma once

#include <Eigen/Core>

#include "cds/rng.hpp"
#include "cds/schedule.hpp"

namespace cds {

/// Finite atomic measure on R^d. Atoms live in the origin-centered ball of
/// radius `radius` (recomputed on construction).
struct AtomicPrior {
    Eigen::MatrixXd atoms;    // n x d, one atom per row
    Eigen::VectorXd weights;  // nonnegative, sums to 1
    double radius = 0.0;

    static AtomicPrior create(Eigen::MatrixXd atoms, Eigen::VectorXd weights);

    /// Equal-weight convenience constructor.
    static AtomicPrior uniform(Eigen::MatrixXd atoms);

    int dim() const { return static_cast<int>(atoms.cols()); }
    int size() const { return static_cast<int>(atoms.rows()); }

    AtomicPrior scaled(double factor) const;
};

/// The target q = q_pre * N(0, sigma^2 I), a mixture of isotropic Gaussians,
/// with closed-form scores, posteriors, and posterior TV along the OU
/// noising path. Immutable after construction; queries are pure.
///
/// Core queries are parameterized by (scale, noise): the marginal at hand is
/// law(scale * Xbar + noise * xi) with Xbar ~ q_pre. Time-parameterized
/// wrappers derive (scale, noise) from the attached schedule.
class SmoothedTarget {
public:
    SmoothedTarget(AtomicPrior prior, double sigma, NoiseSchedule schedule);

    const AtomicPrior& prior() const { return prior_; }
    double sigma() const { return sigma_; }
    const NoiseSchedule& schedule() const { return schedule_; }
    int dim() const { return prior_.dim(); }

    // --- core (scale, noise) queries -------------------------------------

    /// Posterior atom probabilities given y, via log-sum-exp.
    void responsibilities(double scale, double noise, const Eigen::VectorXd& y,
                          Eigen::VectorXd& r) const;

    Eigen::VectorXd posterior_mean(double scale, double noise, const Eigen::VectorXd& y) const;

    /// Score of the mixture marginal, through the posterior mean.
    void score_into(double scale, double noise, const Eigen::VectorXd& y,
                    Eigen::VectorXd& out) const;

    /// Score recomputed as the direct log-density gradient (independent
    /// route, used as a cross-check against the posterior-mean path).
    Eigen::VectorXd score_direct(double scale, double noise, const Eigen::VectorXd& y) const;

    double log_density(double scale, double noise, const Eigen::VectorXd& y) const;

    /// Exact total variation between the discrete posteriors at y1 and y2.
    double posterior_tv(double scale, double noise, const Eigen::VectorXd& y1,
                        const Eigen::VectorXd& y2) const;

    // --- time-parameterized wrappers --------------------------------------

    void responsibilities_at(double t, const Eigen::VectorXd& y, Eigen::VectorXd& r) const;
    Eigen::VectorXd posterior_mean_at(double t, const Eigen::VectorXd& y) const;
    Eigen::VectorXd score(double t, const Eigen::VectorXd& y) const;
    void score_at_into(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const;

    /// Probability flow ODE right-hand side y + score(t, y).
    Eigen::VectorXd drift(double t, const Eigen::VectorXd& y) const;
    void drift_into(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const;

    double posterior_tv_at(double t, const Eigen::VectorXd& y1, const Eigen::VectorXd& y2) const;

    // --- sampling ----------------------------------------------------------

    Eigen::VectorXd sample_prior(Rng& rng) const;
    Eigen::VectorXd sample_marginal(double t, Rng& rng) const;

    /// Exact draw from q itself (prior atom plus sigma-noise).
    Eigen::VectorXd sample_target(Rng& rng) const;

    // --- closed-form moments of q ------------------------------------------

    Eigen::VectorXd mean() const;
    Eigen::MatrixXd covariance() const;

    /// Lipschitz bound (1 + R^2/sigma^2)/sigma^2 for the score of q.
    double score_lipschitz() const;

    /// Score of q in output coordinates (the corrector's stationary target).
    void score_q_into(const Eigen::VectorXd& y, Eigen::VectorXd& out) const;

    /// Same distribution with atoms divided by sigma (unit smoothing level)
    /// and a fresh horizon-T schedule.
    SmoothedTarget normalized(double T) const;

private:
    void log_responsibilities(double scale, double noise, const Eigen::VectorXd& y,
                              Eigen::VectorXd& logr, double& logsum) const;
    void reject_degenerate(double noise, double scale, const Eigen::VectorXd& y) const;

    AtomicPrior prior_;
    double sigma_;
    NoiseSchedule schedule_;
};

}  // namespace cds
