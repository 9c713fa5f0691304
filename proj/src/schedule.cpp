#include "cds/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace cds {

NoiseSchedule::NoiseSchedule(double T) : horizon(T) {
    if (!(T > 0.0)) throw std::invalid_argument("NoiseSchedule: horizon must be > 0");
}

void NoiseSchedule::check_time(double t) const {
    if (!(t >= 0.0 && t <= horizon))
        throw std::domain_error("NoiseSchedule: time outside [0, T]");
}

double NoiseSchedule::sigma(double t) const {
    check_time(t);
    // -expm1 keeps full precision near t = T where 1 - e^{-2(T-t)} cancels.
    return std::sqrt(-std::expm1(-2.0 * (horizon - t)));
}

double NoiseSchedule::signal(double t) const {
    check_time(t);
    return std::exp(-(horizon - t));
}

double NoiseSchedule::early_stop_time(double sigma_target) const {
    if (!(sigma_target > 0.0))
        throw std::invalid_argument("early_stop_time: sigma_target must be > 0");
    const double back = 0.5 * std::log1p(sigma_target * sigma_target);
    if (!(back < horizon))
        throw std::invalid_argument("early_stop_time: sigma_target too large for horizon");
    return horizon - back;
}

Eigen::VectorXd NoiseSchedule::rescale_output(const Eigen::VectorXd& y, double t_stop) const {
    check_time(t_stop);
    return y * std::exp(horizon - t_stop);
}

double horizon_formula(double radius, int dim, double eps_err, double c_T) {
    if (!(eps_err > 0.0 && eps_err < 1.0))
        throw std::invalid_argument("horizon_for: eps_err must lie in (0, 1)");
    if (!(radius >= 1.0) || dim < 1)
        throw std::invalid_argument("horizon_for: require R >= 1 and d >= 1");
    return c_T * (std::log(radius) + std::log(static_cast<double>(dim)) + std::log(1.0 / eps_err));
}

double horizon_for(double radius, int dim, double eps_err, double c_T) {
    const double formula = horizon_formula(radius, dim, eps_err, c_T);
    const double floor = std::log((radius + std::sqrt(static_cast<double>(dim))) / eps_err) + 1.0;
    return std::max(formula, floor);
}

}  // namespace cds
