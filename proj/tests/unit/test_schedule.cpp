#include <doctest.h>

#include <cmath>

#include "cds/mixture.hpp"
#include "cds/rng.hpp"
#include "cds/schedule.hpp"

using namespace cds;

TEST_CASE("noise level endpoints and pinned values") {
    NoiseSchedule s(10.0);
    CHECK(s.sigma(10.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.sigma(0.0) == doctest::Approx(std::sqrt(1.0 - std::exp(-20.0))).epsilon(1e-14));
    // 1 - e^{-ln(4/3)} = 1/4
    const double t = 10.0 - 0.5 * std::log(4.0 / 3.0);
    CHECK(s.sigma(t) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(s.sigma(-0.1), std::domain_error);
    CHECK_THROWS_AS(s.sigma(10.1), std::domain_error);
}

TEST_CASE("signal and pythagorean identity on a grid") {
    NoiseSchedule s(7.0);
    double prev_sigma = 2.0, prev_signal = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 7.0 * i / 1000.0;
        const double sg = s.sigma(t), sl = s.signal(t);
        CHECK(sg * sg + sl * sl == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sg < prev_sigma);
        CHECK(sl > prev_signal);
        prev_sigma = sg;
        prev_signal = sl;
    }
    CHECK(s.signal(7.0) == 1.0);
}

TEST_CASE("horizon formula and floor") {
    CHECK(horizon_formula(1.0, 1, std::exp(-5.0)) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(horizon_formula(std::exp(2.0), 1, std::exp(-3.0)) ==
          doctest::Approx(5.0).epsilon(1e-12));
    for (double R : {1.0, 2.0, 10.0}) {
        for (int d : {1, 2, 16}) {
            for (double eps : {1e-1, 1e-3, 1e-6}) {
                const double T = horizon_for(R, d, eps);
                CHECK((R + std::sqrt(double(d))) * std::exp(-T) <= eps);
            }
        }
    }
    CHECK_THROWS_AS(horizon_for(1.0, 1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(horizon_for(0.5, 1, 0.1), std::invalid_argument);
}

TEST_CASE("early stop time pinned values") {
    NoiseSchedule s(10.0);
    CHECK(10.0 - s.early_stop_time(1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(10.0 - s.early_stop_time(std::sqrt(3.0)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(10.0 - s.early_stop_time(1e-8) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK_THROWS_AS(s.early_stop_time(0.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseSchedule(0.1).early_stop_time(1e6), std::invalid_argument);
}

TEST_CASE("rescale undoes the OU shrinkage") {
    NoiseSchedule s(5.0);
    Eigen::Vector2d y(1.0, 0.0);
    const double t_stop = 5.0 - std::log(2.0);
    const Eigen::VectorXd out = s.rescale_output(y, t_stop);
    CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out[1] == 0.0);
    CHECK(s.rescale_output(y, 5.0).isApprox(y));
}

TEST_CASE("early stop plus rescale gives the smoothed target law exactly") {
    // forward samples at t_stop, rescaled: mean mu, covariance sigma_target^2 I
    const double T = 6.0, sigma_target = 1.0;
    Eigen::MatrixXd atom(1, 2);
    atom << 1.5, -0.5;
    SmoothedTarget target(AtomicPrior::uniform(atom), sigma_target, NoiseSchedule(T));
    const double t_stop = target.schedule().early_stop_time(sigma_target);
    Rng rng(42);
    const int n = 100000;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd y =
            target.schedule().rescale_output(target.sample_marginal(t_stop, rng), t_stop);
        mean += y;
        second += y * y.transpose();
    }
    mean /= n;
    const Eigen::Matrix2d cov = second / n - mean * mean.transpose();
    const double se = 4.0 * sigma_target / std::sqrt(double(n));
    CHECK((mean - Eigen::Vector2d(1.5, -0.5)).norm() < 2.0 * se);
    CHECK((cov - Eigen::Matrix2d::Identity()).norm() < 0.05);
}
