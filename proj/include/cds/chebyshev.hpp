#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace cds {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static Quadrature gauss_legendre(int n);

    /// Integrates f over [a, b].
    double integrate(double a, double b, const std::function<double(double)>& f) const;
};

/// Chebyshev roots cos((2j-1)pi/(2D)), j = 1..D, in the formula's
/// (descending) order.
Eigen::VectorXd chebyshev_nodes(int D);

/// Lagrange cardinal polynomial for the j-th Chebyshev root (1-indexed),
/// evaluated at x in [-1, 1]. Degree D-1; equals delta_ij at the roots.
/// The removable singularity at the own node is handled by a first-order
/// expansion within 1e-8 of it.
double chebyshev_cardinal(int D, int j, double x);

/// Collocation basis on a window [t0, t0 + h]: rescaled Chebyshev nodes in
/// ascending order, cardinal functions phi_i, the node-integral matrix
/// A[i][j] = integral of phi_i from t0 to node_j, the full-window integrals
/// b[i], and the boundedness constant gamma = sum_i |b[i]| / h.
class CollocationBasis {
public:
    CollocationBasis(int D, double t0, double h);

    int node_count() const { return D_; }
    double t0() const { return t0_; }
    double length() const { return h_; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::MatrixXd& node_integrals() const { return A_; }
    const Eigen::VectorXd& window_integrals() const { return b_; }
    double gamma() const { return gamma_; }

    /// phi_i(t) for the ascending node index i (0-based), t in the window.
    double basis(int i, double t) const;

    /// Integral of phi_i from t0 to t.
    double basis_integral(int i, double t) const;

    /// Sum_i values[i] * phi_i(t). Reproduces values at the nodes.
    double interpolate(const Eigen::VectorXd& values, double t) const;

    /// Same window geometry anchored at a new start time; the integral
    /// matrices are translation invariant and are shared.
    CollocationBasis shifted(double new_t0) const;

private:
    int D_;
    double t0_, h_;
    Eigen::VectorXd nodes_;   // ascending, in window coordinates
    Eigen::MatrixXd A_;       // D x D
    Eigen::VectorXd b_;       // D
    double gamma_;
    Quadrature quad_;
};

/// Max over a uniform grid of |f - (interpolant of f at the basis nodes)|.
double interpolation_sup_error(const CollocationBasis& basis,
                               const std::function<double(double)>& f, int grid_size);

}  // namespace cds
