#include <doctest.h>

#include <cmath>

#include "cds/oracle.hpp"
#include "cds/sampler.hpp"

using namespace cds;

namespace {

SmoothedTarget atom_at(double mu, double sigma = 1.0) {
    Eigen::MatrixXd atoms(1, 1);
    atoms << mu;
    return SmoothedTarget(AtomicPrior::uniform(atoms), sigma, NoiseSchedule(1.0));
}

}  // namespace

TEST_CASE("plan reproduces the pinned parameter formulas") {
    const SmoothedTarget t = atom_at(1.0);  // R/sigma = 1, d = 1
    PlanOverrides ov;
    ov.gamma_const = 0.25;
    SamplerPlan p = make_plan(t, std::exp(-10.0), std::exp(-1.0), ov);
    CHECK(p.k == 10);
    CHECK(p.D == 10);
    CHECK(p.h == doctest::Approx(0.0125).epsilon(1e-12));
    // m = ceil(ln 1 + ln 1 + max(0, lnln e) + 10 + ln 6)
    CHECK(p.m == 12);
    CHECK(p.L_tilde == doctest::Approx(6.0));

    ov.T = 8.0;
    p = make_plan(t, std::exp(-10.0), std::exp(-1.0), ov);
    CHECK(p.T == 8.0);
    CHECK(p.t_stop == doctest::Approx(8.0 - 0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(p.windows.size() == 613);
}

TEST_CASE("plan invariants: tiling and the contraction precondition") {
    const SmoothedTarget t = atom_at(1.0);
    for (double eps : {1e-2, 1e-4}) {
        const SamplerPlan p = make_plan(t, eps, 0.1);
        CHECK(p.L_tilde * p.gamma_phi * p.h <= 0.5 + 1e-12);
        CHECK(p.windows.front().first == 0.0);
        CHECK(p.windows.back().second == doctest::Approx(p.t_stop).epsilon(1e-12));
        for (size_t w = 0; w + 1 < p.windows.size(); ++w) {
            CHECK(p.windows[w].second == p.windows[w + 1].first);
            CHECK(p.windows[w].second - p.windows[w].first <= p.h + 1e-12);
        }
    }
    // an oversized h override is still clamped to the safe region
    PlanOverrides ov;
    ov.h = 100.0;
    const SamplerPlan p = make_plan(t, 1e-2, 0.1, ov);
    CHECK(p.L_tilde * p.gamma_phi * p.h <= 0.5 + 1e-12);
    CHECK_THROWS_AS(make_plan(t, 1.5, 0.1), std::invalid_argument);
}

namespace {
SamplerPlan small_plan(const SmoothedTarget& t, double eps = 1e-2) {
    PlanOverrides ov;
    ov.T = 4.0;
    ov.D = 3;
    ov.m = 4;
    ov.gamma_const = 50.0;  // push h onto the contraction cap
    return make_plan(t, eps, 0.1, ov);
}
}  // namespace

TEST_CASE("oracle evaluation count matches the contract exactly") {
    const SmoothedTarget t = atom_at(1.0);
    const SamplerPlan p = small_plan(t);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);
    Rng rng(4);
    run_chain(p, *oracle, rng);
    CHECK(oracle->eval_count() == p.windows.size() * p.m * p.D);

    oracle->reset_count();
    const BatchReport rep = run_batch(p, *oracle, 7, 99);
    CHECK(rep.evals == 7 * p.windows.size() * p.m * p.D);
    CHECK(rep.samples.rows() == 7);
}

TEST_CASE("batches are deterministic and chain-stable") {
    const SmoothedTarget t = atom_at(1.0);
    const SamplerPlan p = small_plan(t);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);

    const BatchReport a = run_batch(p, *oracle, 5, 2024);
    const BatchReport b = run_batch(p, *oracle, 5, 2024);
    CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == 0.0);

    // first chains unaffected by batch growth; n = 1 equals a direct run
    const BatchReport big = run_batch(p, *oracle, 8, 2024);
    CHECK((big.samples.topRows(5) - a.samples).cwiseAbs().maxCoeff() == 0.0);
    Rng rng(chain_seed(2024, 0));
    CHECK((run_chain(p, *oracle, rng).transpose() - a.samples.row(0)).cwiseAbs().maxCoeff() ==
          0.0);

    // multithreaded gather preserves chain order
    const BatchReport mt = run_batch(p, *oracle, 8, 2024, 3);
    CHECK((mt.samples - big.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("euler recurrence matches the scalar closed-form product") {
    const SmoothedTarget t = atom_at(0.0);
    const SamplerPlan p = small_plan(t);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);
    const int n_steps = 50;
    Eigen::VectorXd y0(1);
    y0 << 0.8;
    const Eigen::VectorXd got = euler_from(p, *oracle, n_steps, y0);
    // drift is a(t) y with a = 1 - 1/sigma_t^2
    double y = 0.8;
    const double dt = p.t_stop / n_steps;
    for (int i = 0; i < n_steps; ++i) {
        const double sg = norm.schedule().sigma(i * dt);
        y *= 1.0 + dt * (1.0 - 1.0 / (sg * sg));
    }
    CHECK(got[0] == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("euler endpoint error decays at first order") {
    const SmoothedTarget t = atom_at(0.0);
    const SamplerPlan p = small_plan(t);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);
    Eigen::VectorXd y0(1);
    y0 << 1.0;
    // closed form: the linear flow scales by sigma(t_stop)/sigma(0)
    const double truth = norm.schedule().sigma(p.t_stop) / norm.schedule().sigma(0.0);
    std::vector<double> errs;
    const std::vector<int> steps = {100, 1000, 10000};
    for (int n : steps)
        errs.push_back(std::abs(euler_from(p, *oracle, n, y0)[0] - truth));
    const double slope = (std::log(errs[2]) - std::log(errs[0])) /
                         (std::log(double(steps[2])) - std::log(double(steps[0])));
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("reference solver against the linear closed form") {
    const SmoothedTarget t = atom_at(0.0);
    const SmoothedTarget norm = t.normalized(6.0);
    auto field = [&norm](double tt, const Eigen::VectorXd& y) { return norm.drift(tt, y); };
    Eigen::VectorXd y0(1);
    y0 << 1.3;
    const double t1 = 5.0;
    const double truth = 1.3 * norm.schedule().sigma(t1) / norm.schedule().sigma(0.0);
    const Eigen::VectorXd got = reference_solve(field, y0, 0.0, t1, 1e-10);
    CHECK(got[0] == doctest::Approx(truth).epsilon(1e-9));

    const Eigen::VectorXd tighter = reference_solve(field, y0, 0.0, t1, 1e-12);
    CHECK(std::abs(got[0] - tighter[0]) <= 1e-9);

    const Eigen::VectorXd back = reference_solve(field, got, t1, 0.0, 1e-10);
    CHECK(std::abs(back[0] - 1.3) <= 1e-9);
}

TEST_CASE("collocation beats euler at the same budget on endpoint error") {
    const SmoothedTarget t = atom_at(1.0);
    PlanOverrides ov;
    ov.T = 4.0;
    ov.D = 4;
    ov.m = 8;
    ov.gamma_const = 50.0;
    const SamplerPlan p = make_plan(t, 1e-3, 0.1, ov);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);
    auto field = [&norm](double tt, const Eigen::VectorXd& y) { return norm.drift(tt, y); };
    const int budget = static_cast<int>(p.windows.size() * p.m * p.D);
    Rng rng(12);
    double err_c = 0.0, err_e = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd y0 = rng.gaussian_vector(1);
        const Eigen::VectorXd truth = reference_solve(field, y0, 0.0, p.t_stop, 1e-11);
        err_c += (solve_from(p, *oracle, y0) - truth).norm();
        err_e += (euler_from(p, *oracle, budget, y0) - truth).norm();
    }
    CHECK(err_c <= err_e);
}

TEST_CASE("small end-to-end run lands near the closed-form mean") {
    Eigen::MatrixXd atoms(1, 2);
    atoms << 1.0, 1.0;
    const SmoothedTarget t(AtomicPrior::uniform(atoms), 1.0, NoiseSchedule(1.0));
    PlanOverrides ov;
    ov.gamma_const = 50.0;
    const SamplerPlan p = make_plan(t, 1e-2, 0.1, ov);
    const SmoothedTarget norm = t.normalized(p.T);
    const auto oracle = exact_oracle(norm);
    const BatchReport rep = run_batch(p, *oracle, 400, 7);
    const Eigen::VectorXd mean = rep.samples.colwise().mean();
    CHECK((mean - Eigen::Vector2d(1.0, 1.0)).norm() < 0.2);
}
