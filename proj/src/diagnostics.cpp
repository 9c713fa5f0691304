#include "cds/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cds/sampler.hpp"

namespace cds {

namespace {

// Trajectory states of the exact probability flow at the requested times,
// integrated once in increasing time order (backward from t_anchor first if
// needed).
std::map<double, Eigen::VectorXd> trajectory_at(const SmoothedTarget& target,
                                                const Eigen::VectorXd& y0, double t_anchor,
                                                std::vector<double> times, double tol = 1e-11) {
    auto field = [&target](double t, const Eigen::VectorXd& y) { return target.drift(t, y); };
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::map<double, Eigen::VectorXd> out;
    // forward sweep
    {
        Eigen::VectorXd y = y0;
        double t = t_anchor;
        for (double s : times) {
            if (s < t_anchor) continue;
            if (s > t) y = reference_solve(field, y, t, s, tol);
            t = s;
            out[s] = y;
        }
    }
    // backward sweep
    {
        Eigen::VectorXd y = y0;
        double t = t_anchor;
        for (auto it = times.rbegin(); it != times.rend(); ++it) {
            const double s = *it;
            if (s >= t_anchor) continue;
            y = reference_solve(field, y, t, s, tol);
            t = s;
            out[s] = y;
        }
    }
    return out;
}

}  // namespace

LowDegreeProfile lowdegree_profile(const SmoothedTarget& target, const Eigen::VectorXd& y0,
                                   double t0, double h, const std::vector<int>& k_list,
                                   int grid) {
    if (grid < 200) throw std::invalid_argument("lowdegree_profile: grid must be >= 200");
    if (!(h > 0.0)) throw std::invalid_argument("lowdegree_profile: window length must be > 0");

    std::vector<double> times;
    for (int g = 0; g < grid; ++g) times.push_back(t0 + h * g / (grid - 1.0));
    std::vector<CollocationBasis> bases;
    for (int k : k_list) {
        if (k < 1) throw std::invalid_argument("lowdegree_profile: degrees must be >= 1");
        bases.emplace_back(k, t0, h);
        for (int i = 0; i < k; ++i) times.push_back(bases.back().nodes()[i]);
    }
    const auto traj = trajectory_at(target, y0, t0, times);

    auto drift_at = [&](double t) { return target.drift(t, traj.at(t)); };

    LowDegreeProfile profile;
    profile.t0 = t0;
    profile.h = h;
    const int d = target.dim();
    for (size_t b = 0; b < bases.size(); ++b) {
        const CollocationBasis& basis = bases[b];
        const int k = basis.node_count();
        Eigen::MatrixXd node_vals(d, k);
        for (int i = 0; i < k; ++i) node_vals.col(i) = drift_at(basis.nodes()[i]);
        double worst = 0.0;
        for (int g = 0; g < grid; ++g) {
            const double t = t0 + h * g / (grid - 1.0);
            const Eigen::VectorXd f = drift_at(t);
            for (int c = 0; c < d; ++c) {
                const double approx = basis.interpolate(node_vals.row(c).transpose(), t);
                worst = std::max(worst, std::abs(f[c] - approx));
            }
        }
        profile.degrees.push_back(k);
        profile.sup_errors.push_back(worst);
    }
    return profile;
}

SmoothnessReport smoothness_check(const SmoothedTarget& target, double t, int n_points,
                                  Rng& rng, double fd_step) {
    const double T = target.schedule().horizon;
    if (!(T - t >= 1.0)) throw std::invalid_argument("smoothness_check: need T - t >= 1");
    const int d = target.dim();
    const double R = target.prior().radius;

    SmoothnessReport rep;
    rep.bound = 2.0 + 4.0 * std::exp(-(T - t)) * R * R + 10.0 * fd_step * R * R * R;
    Eigen::MatrixXd J(d, d);
    Eigen::VectorXd sp(d), sm(d);
    for (int p = 0; p < n_points; ++p) {
        const Eigen::VectorXd y = target.sample_marginal(t, rng);
        for (int c = 0; c < d; ++c) {
            Eigen::VectorXd yp = y, ym = y;
            yp[c] += fd_step;
            ym[c] -= fd_step;
            target.score_at_into(t, yp, sp);
            target.score_at_into(t, ym, sm);
            J.col(c) = (sp - sm) / (2.0 * fd_step);
        }
        // score Jacobians of these mixtures are symmetric; symmetrize away FD noise
        const Eigen::MatrixXd S = 0.5 * (J + J.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        rep.max_norm = std::max(rep.max_norm, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    rep.pass = rep.max_norm <= rep.bound;
    return rep;
}

CouplingReport coupling_check(const SmoothedTarget& target, double t, double delta, double eps1,
                              int n_trials, Rng& rng) {
    const double T = target.schedule().horizon;
    if (!(T - t >= 1.0)) throw std::invalid_argument("coupling_check: need T - t >= 1");
    if (!(eps1 > 0.0 && eps1 < 1.0))
        throw std::invalid_argument("coupling_check: eps1 must lie in (0, 1)");
    const int d = target.dim();
    const double budget = std::sqrt(double(d)) + std::sqrt(std::log(1.0 / eps1));
    if (!(delta >= 0.0 && delta <= 1.0 / (6.0 * budget)))
        throw std::invalid_argument("coupling_check: delta outside the bound's precondition");

    CouplingReport rep;
    rep.bound = 8.0 * delta * budget;
    const double scale = target.schedule().signal(t);
    const double noise = target.schedule().sigma(t);
    for (int trial = 0; trial < n_trials; ++trial) {
        const Eigen::VectorXd xbar = target.sample_prior(rng);
        const Eigen::VectorXd xi = rng.gaussian_vector(d);
        if (noise * xi.norm() > budget) continue;
        const Eigen::VectorXd y = scale * xbar + noise * xi;
        const Eigen::VectorXd y2 = y + delta * rng.unit_vector(d);
        ++rep.trials_used;
        if (target.posterior_tv(scale, noise, y, y2) > rep.bound) ++rep.violations;
    }
    return rep;
}

double contraction_check(const ScoreOracle& oracle, const CollocationBasis& basis,
                         const Eigen::VectorXd& v, int n_pairs, Rng& rng) {
    const int D = basis.node_count();
    const int d = static_cast<int>(v.size());
    auto sweep = [&](const Eigen::MatrixXd& X) {
        Eigen::MatrixXd F(d, D);
        Eigen::VectorXd s(d);
        for (int j = 0; j < D; ++j) {
            oracle.evaluate(basis.nodes()[j], X.col(j), s);
            F.col(j) = X.col(j) + s;
        }
        return Eigen::MatrixXd(v.replicate(1, D) + F * basis.node_integrals());
    };
    auto col_dist = [D](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
        double m = 0.0;
        for (int j = 0; j < D; ++j) m = std::max(m, (A.col(j) - B.col(j)).norm());
        return m;
    };
    double worst = 0.0;
    for (int p = 0; p < n_pairs; ++p) {
        Eigen::MatrixXd X1(d, D), X2(d, D);
        for (int j = 0; j < D; ++j) {
            X1.col(j) = v + rng.gaussian_vector(d);
            X2.col(j) = X1.col(j) + 0.1 * rng.gaussian_vector(d);
        }
        const double before = col_dist(X1, X2);
        if (before == 0.0) continue;
        worst = std::max(worst, col_dist(sweep(X1), sweep(X2)) / before);
    }
    return worst;
}

namespace {

Eigen::VectorXd fd_stencil(const SmoothedTarget& target, const Eigen::VectorXd& y0, double t,
                           int order, double step) {
    // central difference (1/step^k) sum_j (-1)^j C(k,j) g(t + (k/2 - j) step)
    std::vector<double> times;
    for (int j = 0; j <= order; ++j) times.push_back(t + (order / 2.0 - j) * step);
    const auto traj = trajectory_at(target, y0, t, times);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(target.dim());
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        const double tau = t + (order / 2.0 - j) * step;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * target.drift(tau, traj.at(tau));
        binom = binom * (order - j) / (j + 1.0);
    }
    return acc / std::pow(step, order);
}

}  // namespace

DriftDerivative drift_time_derivative(const SmoothedTarget& target, const Eigen::VectorXd& y0,
                                      double t, int order, double fd_step) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("drift_time_derivative: order must be in 1..4");
    if (!(fd_step > 0.0)) throw std::invalid_argument("drift_time_derivative: fd_step > 0");
    DriftDerivative out;
    out.value = fd_stencil(target, y0, t, order, fd_step);
    out.inf_norm = out.value.cwiseAbs().maxCoeff();
    const Eigen::VectorXd half = fd_stencil(target, y0, t, order, fd_step / 2.0);
    const double ref = std::max(out.inf_norm, half.cwiseAbs().maxCoeff());
    if (ref > 0.0 && (out.value - half).cwiseAbs().maxCoeff() > 0.5 * ref)
        out.cancellation = true;
    return out;
}

}  // namespace cds
