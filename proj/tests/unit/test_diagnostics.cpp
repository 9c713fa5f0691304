#include <doctest.h>

#include <cmath>

#include "cds/diagnostics.hpp"
#include "cds/oracle.hpp"

using namespace cds;

namespace {

SmoothedTarget atom_at_zero(int d, double T) {
    Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(1, d);
    return SmoothedTarget(AtomicPrior::uniform(atoms), 1.0, NoiseSchedule(T));
}

SmoothedTarget two_atoms_1d(double T) {
    Eigen::MatrixXd atoms(2, 1);
    atoms << -1.0, 1.0;
    return SmoothedTarget(AtomicPrior::uniform(atoms), 1.0, NoiseSchedule(T));
}

SmoothedTarget gmm_2d(double T) {
    Eigen::MatrixXd atoms(3, 2);
    atoms << 2.0, 0.0, -2.0, 0.0, 0.0, 2.0;
    return SmoothedTarget(AtomicPrior::uniform(atoms), 1.0, NoiseSchedule(T));
}

}  // namespace

TEST_CASE("low degree profile on the analytic single-atom drift") {
    const SmoothedTarget t = atom_at_zero(1, 8.0);
    Eigen::VectorXd y0(1);
    y0 << 1.2;
    const LowDegreeProfile prof =
        lowdegree_profile(t, y0, 3.0, 0.1, {2, 4, 6, 8}, 200);
    REQUIRE(prof.sup_errors.size() == 4);
    for (size_t i = 0; i + 1 < prof.sup_errors.size(); ++i)
        CHECK(prof.sup_errors[i + 1] <= prof.sup_errors[i] * 1.1);
    CHECK(prof.sup_errors[3] <= 1e-6);
    CHECK_THROWS_AS(lowdegree_profile(t, y0, 3.0, 0.1, {4}, 50), std::invalid_argument);
}

TEST_CASE("score hessian bound for a centered gaussian") {
    const SmoothedTarget t = atom_at_zero(2, 6.0);
    Rng rng(3);
    // sigma_t ~ 1 far from the horizon: hessian is -I / sigma_t^2, norm ~ 1
    const SmoothnessReport rep = smoothness_check(t, 2.0, 100, rng);
    CHECK(rep.pass);
    CHECK(rep.max_norm == doctest::Approx(1.0).epsilon(0.01));
    CHECK_THROWS_AS(smoothness_check(t, 5.5, 10, rng), std::invalid_argument);
}

TEST_CASE("score hessian bound for the two-atom mixture") {
    const SmoothedTarget t = two_atoms_1d(6.0);
    Rng rng(5);
    double prev = 1e9;
    for (double gap : {1.0, 2.0, 4.0}) {
        const SmoothnessReport rep = smoothness_check(t, 6.0 - gap, 300, rng);
        CHECK(rep.pass);
        CHECK(rep.bound <= 2.0 + 4.0 * std::exp(-gap) + 1e-2);
        CHECK(rep.bound < prev);
        prev = rep.bound;
    }
}

TEST_CASE("posterior coupling bound holds with zero violations") {
    Rng rng(7);
    const SmoothedTarget single = atom_at_zero(2, 8.0);
    const CouplingReport r0 = coupling_check(single, 6.0, 0.0, 0.1, 200, rng);
    CHECK(r0.violations == 0);

    const SmoothedTarget g = gmm_2d(8.0);
    const double budget = std::sqrt(2.0) + std::sqrt(std::log(10.0));
    const CouplingReport r1 = coupling_check(g, 7.0, 1.0 / (6.0 * budget), 0.1, 1000, rng);
    CHECK(r1.trials_used > 0);
    CHECK(r1.violations == 0);
    CHECK_THROWS_AS(coupling_check(g, 7.0, 1.0, 0.1, 10, rng), std::invalid_argument);
}

TEST_CASE("picard map contracts at the planned rate") {
    const SmoothedTarget g = gmm_2d(10.0);
    const auto oracle = exact_oracle(g);
    const double L = oracle->lipschitz();
    const CollocationBasis basis(6, 4.0, 0.5 / (2.0 * L * 1.5));  // safely inside the cap
    Rng rng(9);
    const double ratio =
        contraction_check(*oracle, basis, Eigen::Vector2d(0.3, -0.2), 100, rng);
    CHECK(ratio <= L * basis.gamma() * basis.length() * 1.05);
    CHECK(ratio > 0.0);
}

TEST_CASE("drift time derivative matches the linear closed form") {
    const SmoothedTarget t = atom_at_zero(1, 8.0);
    const double tt = 3.0;
    Eigen::VectorXd y0(1);
    y0 << 0.9;
    const DriftDerivative dd = drift_time_derivative(t, y0, tt, 1, 1e-4);
    // drift = a(t) y_t with a = 1 - 1/sigma^2; d/dt drift = (a' + a^2) y
    const double T = 8.0;
    const double e2 = std::exp(-2.0 * (T - tt));
    const double s2 = 1.0 - e2;
    const double a = 1.0 - 1.0 / s2;
    const double aprime = -2.0 * e2 / (s2 * s2);
    const double want = (aprime + a * a) * 0.9;
    CHECK(dd.value[0] == doctest::Approx(want).epsilon(1e-4));
    CHECK_FALSE(dd.cancellation);
    CHECK_THROWS_AS(drift_time_derivative(t, y0, tt, 5, 1e-4), std::invalid_argument);
}

TEST_CASE("first derivative is stable under step halving") {
    const SmoothedTarget t = two_atoms_1d(8.0);
    Eigen::VectorXd y0(1);
    y0 << 0.4;
    const DriftDerivative a = drift_time_derivative(t, y0, 3.5, 1, 1e-3);
    const DriftDerivative b = drift_time_derivative(t, y0, 3.5, 1, 5e-4);
    CHECK(a.value[0] == doctest::Approx(b.value[0]).epsilon(0.01));
}

TEST_CASE("derivative norms grow with order but stay finite") {
    const SmoothedTarget g = gmm_2d(9.0);
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(2);
    y0[0] = 0.5;
    double first = 0.0;
    for (int order = 1; order <= 4; ++order) {
        const DriftDerivative dd = drift_time_derivative(g, y0, 4.0, order, 1e-2);
        CHECK(std::isfinite(dd.inf_norm));
        if (order == 1) first = dd.inf_norm;
    }
    CHECK(first >= 0.0);
}
