#include <doctest.h>

#include <cmath>

#include "cds/picard.hpp"

using namespace cds;

namespace {
Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}
constexpr double kGuard = 1e6;
}  // namespace

TEST_CASE("init replicates the start value") {
    const CollocationBasis b(3, 0.0, 1.0);
    Eigen::Vector2d v(1.0, 2.0);
    const PicardState s = picard_init(v, b);
    CHECK(s.X.rows() == 2);
    CHECK(s.X.cols() == 3);
    for (int j = 0; j < 3; ++j) CHECK((s.X.col(j) - v).norm() == 0.0);
    CHECK(s.iterations == 0);
}

TEST_CASE("zero field is a fixed point") {
    const CollocationBasis b(4, 0.0, 0.5);
    auto field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.setZero(x.size());
    };
    const PicardResult r = picard_solve(vec1(0.7), field, b, 5, kGuard);
    CHECK(r.endpoint[0] == 0.7);
    for (double res : r.residuals) CHECK(res == 0.0);
}

TEST_CASE("constant fields are solved exactly in one sweep") {
    const CollocationBasis b(4, 0.2, 0.5);
    auto field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.setConstant(x.size(), 3.0);
    };
    PicardState s = picard_init(vec1(-1.0), b);
    picard_step(s, field, b, kGuard);
    for (int j = 0; j < 4; ++j)
        CHECK(s.X(0, j) == doctest::Approx(-1.0 + 3.0 * (b.nodes()[j] - 0.2)).epsilon(1e-12));
    const double second = picard_step(s, field, b, kGuard);
    CHECK(second <= 1e-12);
    const PicardResult r = picard_solve(vec1(-1.0), field, b, 3, kGuard);
    CHECK(r.endpoint[0] == doctest::Approx(-1.0 + 3.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("exponential field converges to the closed form") {
    const CollocationBasis b(8, 0.0, 0.1);
    auto field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& out) { out = x; };
    const PicardResult r = picard_solve(vec1(1.0), field, b, 20, kGuard);
    CHECK(std::abs(r.endpoint[0] - std::exp(0.1)) <= 1e-9);
    // residual ratios contract like L gamma h (L = 1 here)
    const double limit = 1.0 * b.gamma() * 0.1 + 0.05;
    for (size_t i = 2; i + 1 < r.residuals.size(); ++i) {
        if (r.residuals[i] < 1e-14) break;  // floating floor reached
        CHECK(r.residuals[i + 1] / r.residuals[i] <= limit);
    }
}

TEST_CASE("trajectory evaluation matches endpoints and linearity") {
    const CollocationBasis b(5, 0.0, 0.4);
    auto field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.setConstant(x.size(), 2.0);
    };
    const PicardResult r = picard_solve(vec1(1.0), field, b, 3, kGuard);
    CHECK(picard_evaluate(r.state, b, 0.0)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(picard_evaluate(r.state, b, 0.4)[0] == doctest::Approx(r.endpoint[0]).epsilon(1e-12));
    CHECK(picard_evaluate(r.state, b, 0.2)[0] == doctest::Approx(1.4).epsilon(1e-10));
    CHECK_THROWS_AS(picard_evaluate(r.state, b, 0.5), std::invalid_argument);
}

TEST_CASE("divergence guard names the failing sweep") {
    const CollocationBasis b(4, 0.0, 1.0);
    auto field = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out = 100.0 * x.array().square().matrix() + Eigen::VectorXd::Ones(x.size()) * 10.0;
    };
    CHECK_THROWS_AS(picard_solve(vec1(1.0), field, b, 30, 50.0), PicardDivergence);
}

TEST_CASE("identical inputs give bitwise identical endpoints") {
    const CollocationBasis b(6, 0.0, 0.3);
    auto field = [](double t, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out = (std::sin(t) + 1.0) * x;
    };
    const Eigen::VectorXd a = picard_solve(vec1(0.9), field, b, 10, kGuard).endpoint;
    const Eigen::VectorXd c = picard_solve(vec1(0.9), field, b, 10, kGuard).endpoint;
    CHECK(a[0] == c[0]);
}
