#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cds/chebyshev.hpp"

namespace cds {

struct PicardDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trajectory iterate on one window: columns of X are the solution values at
/// the collocation nodes, columns of F the field values there from the most
/// recent sweep.
struct PicardState {
    Eigen::MatrixXd X;  // d x D
    Eigen::MatrixXd F;  // d x D, matches X of the previous sweep
    Eigen::VectorXd v;  // window start value
    int iterations = 0;
};

struct PicardResult {
    Eigen::VectorXd endpoint;
    PicardState state;
    std::vector<double> residuals;  // max node displacement per sweep
};

/// Constant initial iterate X = v 1^T.
inline PicardState picard_init(const Eigen::VectorXd& v, const CollocationBasis& basis) {
    PicardState s;
    s.v = v;
    s.X = v.replicate(1, basis.node_count());
    s.F.setZero(v.size(), basis.node_count());
    return s;
}

/// One Picard sweep: evaluate the field at every node of the current iterate,
/// then X <- v 1^T + F A. Returns the max column 2-norm displacement.
/// `field(t, x, out)` must write the full drift into `out`.
template <typename Field>
double picard_step(PicardState& s, Field&& field, const CollocationBasis& basis,
                   double divergence_guard) {
    const int D = basis.node_count();
    Eigen::VectorXd fx(s.v.size());
    for (int j = 0; j < D; ++j) {
        field(basis.nodes()[j], Eigen::VectorXd(s.X.col(j)), fx);
        s.F.col(j) = fx;
    }
    Eigen::MatrixXd next = s.v.replicate(1, D) + s.F * basis.node_integrals();
    double res = 0.0;
    for (int j = 0; j < D; ++j) res = std::max(res, (next.col(j) - s.X.col(j)).norm());
    s.X = std::move(next);
    ++s.iterations;
    for (int j = 0; j < D; ++j)
        if (!(s.X.col(j).norm() <= divergence_guard))
            throw PicardDivergence("picard iterate exceeded guard " +
                                   std::to_string(divergence_guard) + " at window start t0 = " +
                                   std::to_string(basis.t0()) + ", sweep " +
                                   std::to_string(s.iterations));
    return res;
}

/// Runs N sweeps from the constant iterate and integrates to the window end
/// with the field values of the last sweep. Field evaluations: exactly N * D.
template <typename Field>
PicardResult picard_solve(const Eigen::VectorXd& v, Field&& field, const CollocationBasis& basis,
                          int sweeps, double divergence_guard) {
    if (sweeps < 1) throw std::invalid_argument("picard_solve: need at least one sweep");
    PicardResult out;
    out.state = picard_init(v, basis);
    out.residuals.reserve(static_cast<size_t>(sweeps));
    for (int n = 0; n < sweeps; ++n)
        out.residuals.push_back(picard_step(out.state, field, basis, divergence_guard));
    out.endpoint = v + out.state.F * basis.window_integrals();
    return out;
}

/// Continuous-time evaluation of the converged iterate at t inside the
/// window, from the stored node field values.
inline Eigen::VectorXd picard_evaluate(const PicardState& s, const CollocationBasis& basis,
                                       double t) {
    if (t < basis.t0() - 1e-12 || t > basis.t0() + basis.length() + 1e-12)
        throw std::invalid_argument("picard_evaluate: t outside window");
    Eigen::VectorXd y = s.v;
    for (int j = 0; j < basis.node_count(); ++j) y += s.F.col(j) * basis.basis_integral(j, t);
    return y;
}

}  // namespace cds
