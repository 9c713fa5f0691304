#include "cds/corrector.hpp"

#include <cmath>
#include <stdexcept>

namespace cds {

UlmcConfig corrector_params(double eps, int d, double L, double R, double sigma, int steps,
                            double friction_const, double duration_const) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("corrector_params: eps in (0,1]");
    if (d < 1 || steps < 1 || !(L > 0.0) || !(R > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("corrector_params: inputs must be positive");
    UlmcConfig c;
    c.L = L;
    c.eta = std::min(std::pow(eps, 5.0 / 3.0) / (std::pow(L, 0.25) * std::sqrt(double(d))),
                     eps * sigma * sigma / (R * R));
    c.steps = steps;
    c.friction = friction_const * std::sqrt(L);
    c.step = std::pow(eps, 2.0 / 3.0) /
             (std::cbrt(double(d)) * std::cbrt(double(steps)) * std::sqrt(L));
    const double max_step = duration_const / (std::sqrt(L) * steps);
    c.step = std::min(c.step, max_step);
    return c;
}

namespace {
// u - 2(1 - e^{-u}) + (1 - e^{-2u})/2, evaluated without the triple
// cancellation that kills direct expm1 arithmetic for small u.
double position_variance_core(double u) {
    if (u < 1e-3) {
        const double u3 = u * u * u;
        return u3 / 3.0 - u3 * u / 4.0 + 7.0 * u3 * u * u / 60.0;
    }
    return u + 2.0 * std::expm1(-u) - 0.5 * std::expm1(-2.0 * u);
}
}  // namespace

UlmcTransition::UlmcTransition(double friction, double step) {
    if (!(friction > 0.0) || !(step > 0.0))
        throw std::invalid_argument("UlmcTransition: friction and step must be > 0");
    const double g = friction;
    const double u = g * step;
    decay = std::exp(-u);
    const double one_minus = -std::expm1(-u);
    x_from_v = one_minus / g;
    x_from_g = (step - x_from_v) / g;
    v_from_g = one_minus / g;
    var_v = -std::expm1(-2.0 * u);
    cov_xv = one_minus * one_minus / g;
    var_x = 2.0 * position_variance_core(u) / (g * g);
}

Eigen::VectorXd ulmc_run(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& score,
    const Eigen::VectorXd& x0, const UlmcConfig& config, Rng& rng) {
    const int d = static_cast<int>(x0.size());
    const UlmcTransition tr(config.friction, config.step);
    // Conditional Cholesky of the per-coordinate (x, v) covariance.
    const double sx = std::sqrt(tr.var_x);
    const double c = tr.cov_xv / sx;
    const double sv = std::sqrt(std::max(0.0, tr.var_v - c * c));

    Eigen::VectorXd x = x0;
    Eigen::VectorXd v = rng.gaussian_vector(d);
    Eigen::VectorXd g(d);
    for (int step = 0; step < config.steps; ++step) {
        score(x, g);
        for (int i = 0; i < d; ++i) {
            const double z1 = rng.gaussian();
            const double z2 = rng.gaussian();
            const double mean_x = x[i] + tr.x_from_v * v[i] + tr.x_from_g * g[i];
            const double mean_v = tr.decay * v[i] + tr.v_from_g * g[i];
            x[i] = mean_x + sx * z1;
            v[i] = mean_v + c * z1 + sv * z2;
        }
        if (!x.allFinite() || !v.allFinite())
            throw std::runtime_error("ulmc_run: non-finite state at step " +
                                     std::to_string(step));
    }
    return x;
}

}  // namespace cds
