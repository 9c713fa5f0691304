#pragma once

#include <Eigen/Core>

namespace cds {

/// Ornstein-Uhlenbeck forward-process timing. Reverse-process time runs over
/// [0, T]: t = 0 is the fully noised end, t = T recovers the clean signal.
struct NoiseSchedule {
    double horizon = 0.0;  // T > 0

    explicit NoiseSchedule(double T);

    /// Residual noise level sqrt(1 - e^{-2(T-t)}), decreasing in t.
    double sigma(double t) const;

    /// Signal scale e^{-(T-t)}; satisfies signal^2 + sigma^2 = 1.
    double signal(double t) const;

    /// Stop time t_stop such that rescaled iterates at t_stop have residual
    /// noise exactly sigma_target on top of the clean signal.
    double early_stop_time(double sigma_target) const;

    /// Undoes the OU shrinkage accumulated up to t_stop.
    Eigen::VectorXd rescale_output(const Eigen::VectorXd& y, double t_stop) const;

private:
    void check_time(double t) const;
};

/// Forward-process horizon: c_T * (ln R + ln d + ln(1/eps_err)), floored at
/// ln((R + sqrt(d))/eps_err) + 1 so the Gaussian initialization is within
/// eps_err of the noised target in W2.
double horizon_for(double radius, int dim, double eps_err, double c_T = 1.0);

/// The pre-floor horizon formula, exposed for inspection.
double horizon_formula(double radius, int dim, double eps_err, double c_T = 1.0);

}  // namespace cds
