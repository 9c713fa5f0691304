#include "cds/sampler.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cds/picard.hpp"

namespace cds {

SamplerPlan make_plan(const SmoothedTarget& target, double eps_err, double eps1,
                      const PlanOverrides& overrides) {
    if (!(eps_err > 0.0 && eps_err < 1.0) || !(eps1 > 0.0 && eps1 < 1.0))
        throw std::invalid_argument("make_plan: eps_err and eps1 must lie in (0, 1)");

    SamplerPlan p;
    p.dim = target.dim();
    p.sigma = target.sigma();
    p.eps_err = eps_err;
    p.eps1 = eps1;
    p.c_T = overrides.c_T.value_or(1.0);
    p.gamma_const = overrides.gamma_const.value_or(0.25);

    const double ratio = target.prior().radius / target.sigma();
    p.R = std::max(1.0, ratio);
    p.L_tilde = overrides.L_tilde.value_or(2.0 + 4.0 * ratio * ratio);
    if (!(p.L_tilde > 0.0)) throw std::invalid_argument("make_plan: L_tilde must be > 0");

    p.T = overrides.T.value_or(horizon_for(p.R, p.dim, eps_err, p.c_T));
    const NoiseSchedule schedule(p.T);
    // Normalized smoothing level is 1, so the stop offset is fixed.
    p.t_stop = schedule.early_stop_time(1.0);

    p.k = overrides.k.value_or(
        std::max(1, static_cast<int>(std::ceil(std::log(1.0 / eps_err)))));
    p.D = overrides.D.value_or(p.k);
    if (p.k < 1 || p.D < 1) throw std::invalid_argument("make_plan: k and D must be >= 1");

    p.gamma_phi = CollocationBasis(p.D, 0.0, 1.0).gamma();

    double h;
    if (overrides.h) {
        h = *overrides.h;
    } else {
        const double denom = p.k * (1.0 + ratio * ratio) *
                             (std::log(1.0 / eps1) + std::log(static_cast<double>(p.dim)));
        if (!(denom > 0.0)) throw std::invalid_argument("make_plan: step formula degenerates");
        h = p.gamma_const / denom;
    }
    h = std::min(h, 1.0 / (2.0 * p.L_tilde * p.gamma_phi));
    if (!(h > 0.0)) throw std::invalid_argument("make_plan: window length must be > 0");
    if (h > p.t_stop) throw std::invalid_argument("make_plan: window length exceeds t_stop");
    p.h = h;

    if (overrides.m) {
        p.m = *overrides.m;
        if (p.m < 1) throw std::invalid_argument("make_plan: m must be >= 1");
    } else {
        const double lnln = std::max(0.0, std::log(std::log(1.0 / eps1)));
        const double raw = std::log(p.R) + std::log(static_cast<double>(p.dim)) + lnln +
                           std::log(1.0 / eps_err) + std::log(p.L_tilde);
        p.m = std::max(4, static_cast<int>(std::ceil(raw)));
    }

    const int n_windows = static_cast<int>(std::ceil(p.t_stop / p.h));
    p.windows.reserve(static_cast<size_t>(n_windows));
    for (int i = 0; i < n_windows; ++i) {
        const double a = i * p.h;
        const double b = std::min((i + 1) * p.h, p.t_stop);
        p.windows.emplace_back(a, b);
    }

    p.divergence_guard = 1e6 * (p.R + std::sqrt(static_cast<double>(p.dim)));
    return p;
}

namespace {

// Shared window loop; the start point is consumed in place.
Eigen::VectorXd solve_windows(const SamplerPlan& plan, const ScoreOracle& oracle,
                              Eigen::VectorXd y) {
    const CollocationBasis prototype(plan.D, 0.0, plan.h);
    auto field = [&oracle](double t, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        oracle.evaluate(t, x, out);
        out += x;
    };
    for (size_t w = 0; w < plan.windows.size(); ++w) {
        const auto [a, b] = plan.windows[w];
        const double len = b - a;
        try {
            if (std::abs(len - plan.h) < 1e-12 * plan.h) {
                y = picard_solve(y, field, prototype.shifted(a), plan.m, plan.divergence_guard)
                        .endpoint;
            } else {
                const CollocationBasis basis(plan.D, a, len);
                y = picard_solve(y, field, basis, plan.m, plan.divergence_guard).endpoint;
            }
        } catch (const PicardDivergence& e) {
            throw PicardDivergence("window " + std::to_string(w) + ": " + e.what());
        }
    }
    return y;
}

Eigen::VectorXd finish(const SamplerPlan& plan, const Eigen::VectorXd& y) {
    return plan.sigma * std::exp(plan.T - plan.t_stop) * y;
}

}  // namespace

Eigen::VectorXd run_chain(const SamplerPlan& plan, const ScoreOracle& oracle, Rng& rng) {
    return finish(plan, solve_windows(plan, oracle, rng.gaussian_vector(plan.dim)));
}

BatchReport run_batch(const SamplerPlan& plan, const ScoreOracle& oracle, int n,
                      std::uint64_t seed, int threads) {
    if (n < 1) throw std::invalid_argument("run_batch: need n >= 1");
    threads = std::max(1, threads);
    BatchReport report;
    report.seed = seed;
    report.samples.resize(n, plan.dim);
    const std::uint64_t before = oracle.eval_count();
    const auto start = std::chrono::steady_clock::now();

    auto worker = [&](int first, int step) {
        for (int c = first; c < n; c += step) {
            Rng rng(chain_seed(seed, static_cast<std::uint64_t>(c)));
            report.samples.row(c) = run_chain(plan, oracle, rng).transpose();
        }
    };
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
        for (auto& th : pool) th.join();
    }

    const auto end = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    report.evals = oracle.eval_count() - before;
    return report;
}

Eigen::VectorXd solve_from(const SamplerPlan& plan, const ScoreOracle& oracle,
                           const Eigen::VectorXd& y0) {
    return solve_windows(plan, oracle, y0);
}

Eigen::VectorXd euler_from(const SamplerPlan& plan, const ScoreOracle& oracle, int n_steps,
                           const Eigen::VectorXd& y0) {
    if (n_steps < 1) throw std::invalid_argument("euler_from: need n_steps >= 1");
    Eigen::VectorXd y = y0;
    Eigen::VectorXd s(plan.dim);
    const double dt = plan.t_stop / n_steps;
    for (int i = 0; i < n_steps; ++i) {
        oracle.evaluate(i * dt, y, s);
        y += dt * (y + s);
        if (!(y.norm() <= plan.divergence_guard))
            throw PicardDivergence("euler iterate exceeded guard at step " + std::to_string(i));
    }
    return y;
}

Eigen::VectorXd euler_chain(const SamplerPlan& plan, const ScoreOracle& oracle, int n_steps,
                            Rng& rng) {
    return finish(plan, euler_from(plan, oracle, n_steps, rng.gaussian_vector(plan.dim)));
}

Eigen::VectorXd reference_solve(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& field,
    const Eigen::VectorXd& y0, double t0, double t1, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("reference_solve: tol must be > 0");
    auto integrate = [&](int n_steps) {
        Eigen::VectorXd y = y0;
        const double dt = (t1 - t0) / n_steps;
        for (int i = 0; i < n_steps; ++i) {
            const double t = t0 + i * dt;
            const Eigen::VectorXd k1 = field(t, y);
            const Eigen::VectorXd k2 = field(t + 0.5 * dt, y + 0.5 * dt * k1);
            const Eigen::VectorXd k3 = field(t + 0.5 * dt, y + 0.5 * dt * k2);
            const Eigen::VectorXd k4 = field(t + dt, y + dt * k3);
            y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return y;
    };
    int n = 8;
    Eigen::VectorXd prev = integrate(n);
    for (int halving = 0; halving < 20; ++halving) {
        n *= 2;
        Eigen::VectorXd next = integrate(n);
        if ((next - prev).norm() <= tol) return next;
        prev = std::move(next);
    }
    throw std::runtime_error("reference_solve: no convergence after 20 step halvings");
}

}  // namespace cds
