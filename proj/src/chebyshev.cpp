#include "cds/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace cds {

Quadrature Quadrature::gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

double Quadrature::integrate(double a, double b, const std::function<double(double)>& f) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
        s += weights[i] * f(mid + half * nodes[i]);
    return s * half;
}

Eigen::VectorXd chebyshev_nodes(int D) {
    if (D < 1) throw std::invalid_argument("chebyshev_nodes: need D >= 1");
    Eigen::VectorXd c(D);
    for (int j = 1; j <= D; ++j) c[j - 1] = std::cos((2.0 * j - 1.0) * M_PI / (2.0 * D));
    return c;
}

double chebyshev_cardinal(int D, int j, double x) {
    if (j < 1 || j > D) throw std::invalid_argument("chebyshev_cardinal: index out of range");
    const double cj = std::cos((2.0 * j - 1.0) * M_PI / (2.0 * D));
    const double diff = x - cj;
    if (std::abs(diff) < 1e-8) {
        // T_D'' / (2 T_D') at the root, from the Chebyshev ODE.
        return 1.0 + diff * cj / (2.0 * (1.0 - cj * cj));
    }
    // (-1)^{j-1} normalizes T_D'(c_j) so the cardinal value at c_j is 1.
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    const double xc = std::min(1.0, std::max(-1.0, x));
    return sign * std::sqrt(1.0 - cj * cj) * std::cos(D * std::acos(xc)) / (D * diff);
}

CollocationBasis::CollocationBasis(int D, double t0, double h)
    : D_(D), t0_(t0), h_(h), quad_(Quadrature::gauss_legendre((D + 2) / 2 + 2)) {
    if (D < 1) throw std::invalid_argument("CollocationBasis: need D >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("CollocationBasis: window length must be > 0");

    // Ascending node order; index i maps to Chebyshev root D - i (1-indexed).
    nodes_.resize(D);
    const Eigen::VectorXd c = chebyshev_nodes(D);
    for (int i = 0; i < D; ++i) nodes_[i] = t0 + h * (c[D - 1 - i] + 1.0) * 0.5;

    A_.resize(D, D);
    b_.resize(D);
    for (int i = 0; i < D; ++i) {
        auto phi = [this, i](double t) { return basis(i, t); };
        for (int jj = 0; jj < D; ++jj) A_(i, jj) = quad_.integrate(t0, nodes_[jj], phi);
        b_[i] = quad_.integrate(t0, t0 + h, phi);
    }
    gamma_ = b_.cwiseAbs().sum() / h;
}

double CollocationBasis::basis(int i, double t) const {
    const double x = 2.0 * (t - t0_) / h_ - 1.0;
    return chebyshev_cardinal(D_, D_ - i, x);
}

double CollocationBasis::basis_integral(int i, double t) const {
    return quad_.integrate(t0_, t, [this, i](double s) { return basis(i, s); });
}

double CollocationBasis::interpolate(const Eigen::VectorXd& values, double t) const {
    if (values.size() != D_)
        throw std::invalid_argument("interpolate: need one value per node");
    double s = 0.0;
    for (int i = 0; i < D_; ++i) s += values[i] * basis(i, t);
    return s;
}

CollocationBasis CollocationBasis::shifted(double new_t0) const {
    CollocationBasis out = *this;
    out.nodes_.array() += new_t0 - t0_;
    out.t0_ = new_t0;
    return out;
}

double interpolation_sup_error(const CollocationBasis& basis,
                               const std::function<double(double)>& f, int grid_size) {
    if (grid_size < 10) throw std::invalid_argument("interpolation_sup_error: grid too small");
    const int D = basis.node_count();
    Eigen::VectorXd values(D);
    for (int i = 0; i < D; ++i) values[i] = f(basis.nodes()[i]);
    double worst = 0.0;
    for (int g = 0; g < grid_size; ++g) {
        const double t = basis.t0() + basis.length() * g / (grid_size - 1.0);
        worst = std::max(worst, std::abs(f(t) - basis.interpolate(values, t)));
    }
    return worst;
}

}  // namespace cds
