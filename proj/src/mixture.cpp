#include "cds/mixture.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cds {

namespace {
thread_local std::vector<double> tl_scratch;
}

AtomicPrior AtomicPrior::create(Eigen::MatrixXd atoms, Eigen::VectorXd weights) {
    if (atoms.rows() == 0 || atoms.cols() == 0)
        throw std::invalid_argument("AtomicPrior: need at least one atom in d >= 1");
    if (weights.size() != atoms.rows())
        throw std::invalid_argument("AtomicPrior: weight count must match atom count");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("AtomicPrior: weights must be nonnegative");
    const double total = weights.sum();
    if (std::abs(total - 1.0) > 1e-12) {
        if (total <= 0.0) throw std::invalid_argument("AtomicPrior: weights sum to zero");
        weights /= total;
    }
    AtomicPrior p;
    p.radius = atoms.rowwise().norm().maxCoeff();
    p.atoms = std::move(atoms);
    p.weights = std::move(weights);
    return p;
}

AtomicPrior AtomicPrior::uniform(Eigen::MatrixXd atoms) {
    const Eigen::Index n = atoms.rows();
    return create(std::move(atoms), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

AtomicPrior AtomicPrior::scaled(double factor) const {
    AtomicPrior p = *this;
    p.atoms *= factor;
    p.radius *= std::abs(factor);
    return p;
}

SmoothedTarget::SmoothedTarget(AtomicPrior prior, double sigma, NoiseSchedule schedule)
    : prior_(std::move(prior)), sigma_(sigma), schedule_(schedule) {
    if (!(sigma > 0.0)) throw std::invalid_argument("SmoothedTarget: sigma must be > 0");
}

void SmoothedTarget::reject_degenerate(double noise, double scale,
                                       const Eigen::VectorXd& y) const {
    // noise == 0: the posterior is a point mass only when y sits exactly on
    // an atom image; any other query is ill-posed.
    for (int i = 0; i < prior_.size(); ++i)
        if ((y - scale * prior_.atoms.row(i).transpose()).norm() == 0.0) return;
    throw std::domain_error("SmoothedTarget: degenerate (noise = 0) query off the atom support");
}

void SmoothedTarget::log_responsibilities(double scale, double noise, const Eigen::VectorXd& y,
                                          Eigen::VectorXd& logr, double& logsum) const {
    const int n = prior_.size();
    logr.resize(n);
    const double inv2s2 = 1.0 / (2.0 * noise * noise);
    for (int i = 0; i < n; ++i) {
        const double d2 = (y - scale * prior_.atoms.row(i).transpose()).squaredNorm();
        logr[i] = std::log(prior_.weights[i]) - d2 * inv2s2;
    }
    const double m = logr.maxCoeff();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(logr[i] - m);
    logsum = m + std::log(s);
}

void SmoothedTarget::responsibilities(double scale, double noise, const Eigen::VectorXd& y,
                                      Eigen::VectorXd& r) const {
    const int n = prior_.size();
    if (noise == 0.0) {
        reject_degenerate(noise, scale, y);
        r.resize(n);
        for (int i = 0; i < n; ++i)
            r[i] = ((y - scale * prior_.atoms.row(i).transpose()).norm() == 0.0)
                       ? prior_.weights[i]
                       : 0.0;
        r /= r.sum();
        return;
    }
    double logsum;
    log_responsibilities(scale, noise, y, r, logsum);
    for (int i = 0; i < n; ++i) {
        const double l = r[i] - logsum;
        r[i] = (l < -745.0) ? 0.0 : std::exp(l);
    }
    r /= r.sum();
}

Eigen::VectorXd SmoothedTarget::posterior_mean(double scale, double noise,
                                               const Eigen::VectorXd& y) const {
    Eigen::VectorXd r;
    responsibilities(scale, noise, y, r);
    return scale * (prior_.atoms.transpose() * r);
}

void SmoothedTarget::score_into(double scale, double noise, const Eigen::VectorXd& y,
                                Eigen::VectorXd& out) const {
    if (noise == 0.0)
        throw std::domain_error("SmoothedTarget: score undefined at zero noise level");
    const int n = prior_.size();
    const int d = dim();
    auto& lw = tl_scratch;
    lw.resize(static_cast<size_t>(n));
    const double inv2s2 = 1.0 / (2.0 * noise * noise);
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double diff = y[k] - scale * prior_.atoms(i, k);
            d2 += diff * diff;
        }
        lw[static_cast<size_t>(i)] = std::log(prior_.weights[i]) - d2 * inv2s2;
        m = std::max(m, lw[static_cast<size_t>(i)]);
    }
    out.setZero(d);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = std::exp(lw[static_cast<size_t>(i)] - m);
        wsum += w;
        for (int k = 0; k < d; ++k) out[k] += w * prior_.atoms(i, k);
    }
    const double invn2 = 1.0 / (noise * noise);
    const double c = scale / wsum;
    for (int k = 0; k < d; ++k) out[k] = (out[k] * c - y[k]) * invn2;
}

Eigen::VectorXd SmoothedTarget::score_direct(double scale, double noise,
                                             const Eigen::VectorXd& y) const {
    // grad log sum_i w_i exp(-|y - s mu_i|^2 / (2 noise^2)), written out as a
    // ratio of plain (max-shifted) exponential sums.
    if (noise == 0.0)
        throw std::domain_error("SmoothedTarget: score undefined at zero noise level");
    const int n = prior_.size();
    const double inv_n2 = 1.0 / (noise * noise);
    Eigen::VectorXd expo(n);
    for (int i = 0; i < n; ++i)
        expo[i] = -(y - scale * prior_.atoms.row(i).transpose()).squaredNorm() * 0.5 * inv_n2 +
                  std::log(prior_.weights[i]);
    const double shift = expo.maxCoeff();
    Eigen::VectorXd num = Eigen::VectorXd::Zero(dim());
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = std::exp(expo[i] - shift);
        num += e * (scale * prior_.atoms.row(i).transpose() - y) * inv_n2;
        den += e;
    }
    return num / den;
}

double SmoothedTarget::log_density(double scale, double noise, const Eigen::VectorXd& y) const {
    if (noise == 0.0)
        throw std::domain_error("SmoothedTarget: log-density undefined at zero noise level");
    Eigen::VectorXd logr;
    double logsum;
    log_responsibilities(scale, noise, y, logr, logsum);
    const double d = static_cast<double>(dim());
    return logsum - 0.5 * d * std::log(2.0 * M_PI * noise * noise);
}

double SmoothedTarget::posterior_tv(double scale, double noise, const Eigen::VectorXd& y1,
                                    const Eigen::VectorXd& y2) const {
    Eigen::VectorXd r1, r2;
    responsibilities(scale, noise, y1, r1);
    responsibilities(scale, noise, y2, r2);
    return 0.5 * (r1 - r2).cwiseAbs().sum();
}

void SmoothedTarget::responsibilities_at(double t, const Eigen::VectorXd& y,
                                         Eigen::VectorXd& r) const {
    responsibilities(schedule_.signal(t), schedule_.sigma(t), y, r);
}

Eigen::VectorXd SmoothedTarget::posterior_mean_at(double t, const Eigen::VectorXd& y) const {
    return posterior_mean(schedule_.signal(t), schedule_.sigma(t), y);
}

Eigen::VectorXd SmoothedTarget::score(double t, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out;
    score_at_into(t, y, out);
    return out;
}

void SmoothedTarget::score_at_into(double t, const Eigen::VectorXd& y,
                                   Eigen::VectorXd& out) const {
    if (t >= schedule_.horizon)
        throw std::domain_error("SmoothedTarget: score undefined at t = T (atomic marginal)");
    score_into(schedule_.signal(t), schedule_.sigma(t), y, out);
}

Eigen::VectorXd SmoothedTarget::drift(double t, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out;
    drift_into(t, y, out);
    return out;
}

void SmoothedTarget::drift_into(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) const {
    score_at_into(t, y, out);
    out += y;
}

double SmoothedTarget::posterior_tv_at(double t, const Eigen::VectorXd& y1,
                                       const Eigen::VectorXd& y2) const {
    return posterior_tv(schedule_.signal(t), schedule_.sigma(t), y1, y2);
}

Eigen::VectorXd SmoothedTarget::sample_prior(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = prior_.size() - 1;
    for (int i = 0; i < prior_.size(); ++i) {
        acc += prior_.weights[i];
        if (u < acc) {
            pick = i;
            break;
        }
    }
    return prior_.atoms.row(pick).transpose();
}

Eigen::VectorXd SmoothedTarget::sample_marginal(double t, Rng& rng) const {
    const double s = schedule_.signal(t);
    const double n = schedule_.sigma(t);
    return s * sample_prior(rng) + n * rng.gaussian_vector(dim());
}

Eigen::VectorXd SmoothedTarget::sample_target(Rng& rng) const {
    return sample_prior(rng) + sigma_ * rng.gaussian_vector(dim());
}

Eigen::VectorXd SmoothedTarget::mean() const {
    return prior_.atoms.transpose() * prior_.weights;
}

Eigen::MatrixXd SmoothedTarget::covariance() const {
    const Eigen::VectorXd m = mean();
    Eigen::MatrixXd c = sigma_ * sigma_ * Eigen::MatrixXd::Identity(dim(), dim());
    for (int i = 0; i < prior_.size(); ++i) {
        const Eigen::VectorXd mu = prior_.atoms.row(i).transpose();
        c += prior_.weights[i] * mu * mu.transpose();
    }
    c -= m * m.transpose();
    return c;
}

double SmoothedTarget::score_lipschitz() const {
    const double r2 = prior_.radius * prior_.radius;
    const double s2 = sigma_ * sigma_;
    return (1.0 + r2 / s2) / s2;
}

void SmoothedTarget::score_q_into(const Eigen::VectorXd& y, Eigen::VectorXd& out) const {
    score_into(1.0, sigma_, y, out);
}

SmoothedTarget SmoothedTarget::normalized(double T) const {
    return SmoothedTarget(prior_.scaled(1.0 / sigma_), 1.0, NoiseSchedule(T));
}

}  // namespace cds
