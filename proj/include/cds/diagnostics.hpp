#pragma once

#include <vector>

#include <Eigen/Core>

#include "cds/chebyshev.hpp"
#include "cds/mixture.hpp"
#include "cds/oracle.hpp"
#include "cds/rng.hpp"

namespace cds {

/// Sup-norm error of interpolating the drift along the reference trajectory
/// by time polynomials of increasing node count, on one window.
struct LowDegreeProfile {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<int> degrees;
    std::vector<double> sup_errors;
};

/// y0 is the trajectory state at t0; the trajectory through [t0, t0+h] is
/// computed by high-accuracy integration of the exact drift. grid >= 200.
LowDegreeProfile lowdegree_profile(const SmoothedTarget& target, const Eigen::VectorXd& y0,
                                   double t0, double h, const std::vector<int>& k_list,
                                   int grid = 200);

struct SmoothnessReport {
    double max_norm = 0.0;  // largest finite-difference score Jacobian spectral norm
    double bound = 0.0;     // analytic bound plus finite-difference budget
    bool pass = false;
};

/// Central-difference score Jacobians at marginal samples, checked against
/// the operator norm bound 2 + 4 e^{-(T-t)} R^2 (plus 10 * fd_step * R^3 of
/// finite-difference allowance). Requires T - t >= 1.
SmoothnessReport smoothness_check(const SmoothedTarget& target, double t, int n_points,
                                  Rng& rng, double fd_step = 1e-4);

struct CouplingReport {
    int trials_used = 0;  // draws satisfying the displacement event
    int violations = 0;
    double bound = 0.0;   // 8 delta (sqrt(d) + sqrt(ln(1/eps1)))
};

/// Perturbs marginal draws by delta and checks the exact posterior TV
/// against the linear-in-delta bound. Draws whose noise displacement exceeds
/// sqrt(d) + sqrt(ln(1/eps1)) are skipped. Requires T - t >= 1 and
/// delta <= 1 / (6 (sqrt(d) + sqrt(ln(1/eps1)))).
CouplingReport coupling_check(const SmoothedTarget& target, double t, double delta, double eps1,
                              int n_trials, Rng& rng);

/// Max over random state pairs of the one-sweep contraction ratio of the
/// Picard map (sup-column distance after / before). Identical pairs skipped.
double contraction_check(const ScoreOracle& oracle, const CollocationBasis& basis,
                         const Eigen::VectorXd& v, int n_pairs, Rng& rng);

struct DriftDerivative {
    Eigen::VectorXd value;
    double inf_norm = 0.0;
    bool cancellation = false;  // >50% disagreement between fd_step and fd_step/2
};

/// Central finite difference of the given order (1..4) of t -> drift(t, y_t)
/// along the reference trajectory through (t, y0).
DriftDerivative drift_time_derivative(const SmoothedTarget& target, const Eigen::VectorXd& y0,
                                      double t, int order, double fd_step);

}  // namespace cds
