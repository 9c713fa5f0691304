#pragma once

#include <functional>

#include <Eigen/Core>

#include "cds/rng.hpp"

namespace cds {

/// Underdamped Langevin corrector parameters. Duration step * steps is kept
/// at or below duration_const / sqrt(L).
struct UlmcConfig {
    double friction = 1.0;
    double step = 0.0;
    int steps = 1;
    double L = 1.0;    // Lipschitz constant of the stationary score
    double eta = 0.0;  // W2 error budget fed in
};

/// Derives eta, the step size and the friction from the error target and the
/// problem constants; `steps` is taken as given and the step size is clamped
/// so the total duration stays at or below duration_const / sqrt(L).
UlmcConfig corrector_params(double eps, int d, double L, double R, double sigma, int steps,
                            double friction_const = 1.0, double duration_const = 3.0);

/// Exact one-step transition moments of the linear SDE
///   dx = v dt,  dv = (g - friction * v) dt + sqrt(2 friction) dB
/// with the gradient g frozen over a step of the given length. Per
/// coordinate: (x', v') is Gaussian with the moments below (g enters the
/// means only).
struct UlmcTransition {
    double decay;     // e^{-friction * step}
    double x_from_v;  // mean_x = x + x_from_v * v + x_from_g * g
    double x_from_g;
    double v_from_g;  // mean_v = decay * v + v_from_g * g
    double var_x;
    double var_v;
    double cov_xv;

    UlmcTransition(double friction, double step);
};

/// Runs the corrector from x0 with a standard Gaussian initial velocity,
/// freezing the score at the step start and integrating each step exactly.
/// Throws on non-finite state.
Eigen::VectorXd ulmc_run(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& score,
    const Eigen::VectorXd& x0, const UlmcConfig& config, Rng& rng);

}  // namespace cds
