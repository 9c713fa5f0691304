#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cds/chebyshev.hpp"
#include "cds/mixture.hpp"
#include "cds/oracle.hpp"
#include "cds/rng.hpp"
#include "cds/schedule.hpp"

namespace cds {

/// Derived run parameters. All lengths and times are in normalized
/// coordinates (atoms divided by sigma, unit smoothing); `sigma` carries the
/// final change of units back to the original problem.
struct SamplerPlan {
    double T = 0.0;
    double t_stop = 0.0;
    double h = 0.0;
    std::vector<std::pair<double, double>> windows;  // tile [0, t_stop]
    int k = 0;
    int D = 0;
    int m = 0;
    double eps_err = 0.0;
    double eps1 = 0.0;
    double gamma_const = 0.0;
    double gamma_phi = 0.0;
    double R = 0.0;      // effective radius max(1, prior radius / sigma)
    double sigma = 1.0;  // smoothing level of the original target
    double L_tilde = 0.0;
    double c_T = 1.0;
    int dim = 0;
    double divergence_guard = 0.0;
};

struct PlanOverrides {
    std::optional<double> T;
    std::optional<double> h;
    std::optional<int> k;
    std::optional<int> D;
    std::optional<int> m;
    std::optional<double> gamma_const;
    std::optional<double> L_tilde;
    std::optional<double> c_T;
};

/// Derives T, t_stop, k, D, m, h and the window tiling from the target and
/// the error parameters. h is shrunk if needed so L_tilde * gamma_phi * h
/// stays at or below 1/2; this also applies to an overridden h.
SamplerPlan make_plan(const SmoothedTarget& target, double eps_err, double eps1,
                      const PlanOverrides& overrides = {});

/// One chain: Gaussian start, per-window Picard solves with the plan's depth
/// and node count, early-stop rescale, and the change of units by sigma.
/// Oracle evaluations: (#windows) * m * D exactly.
Eigen::VectorXd run_chain(const SamplerPlan& plan, const ScoreOracle& oracle, Rng& rng);

struct BatchReport {
    Eigen::MatrixXd samples;  // n x d
    std::uint64_t evals = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
};

/// n independent chains with generators derived from (seed, chain index);
/// deterministic for fixed seed regardless of thread count.
BatchReport run_batch(const SamplerPlan& plan, const ScoreOracle& oracle, int n,
                      std::uint64_t seed, int threads = 1);

/// Deterministic window solve from a given start, in normalized coordinates
/// and without the final rescale; exposed for trajectory-error measurement.
Eigen::VectorXd solve_from(const SamplerPlan& plan, const ScoreOracle& oracle,
                           const Eigen::VectorXd& y0);

/// Euler endpoint from a given start, same coordinates as solve_from.
Eigen::VectorXd euler_from(const SamplerPlan& plan, const ScoreOracle& oracle, int n_steps,
                           const Eigen::VectorXd& y0);

/// Explicit Euler on the same probability flow ODE over a uniform grid on
/// [0, t_stop], one oracle evaluation per step, same rescaling as run_chain.
Eigen::VectorXd euler_chain(const SamplerPlan& plan, const ScoreOracle& oracle, int n_steps,
                            Rng& rng);

/// Classical fourth-order integration of dy/dt = field(t, y) with uniform
/// steps, halved until successive endpoints differ by at most tol. Throws
/// after 20 halvings without convergence.
Eigen::VectorXd reference_solve(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& field,
    const Eigen::VectorXd& y0, double t0, double t1, double tol);

}  // namespace cds
