#include "cds/cli_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cds/corrector.hpp"
#include "cds/diagnostics.hpp"
#include "cds/metrics.hpp"
#include "cds/oracle.hpp"

namespace cds {

namespace {

constexpr std::uint64_t kOracleSalt = 0xfeedULL;
constexpr std::uint64_t kCorrectorSalt = 0xc07ecULL;
constexpr std::uint64_t kReferenceSalt = 0xa11ceULL;
constexpr std::uint64_t kEulerSalt = 0xe77e5ULL;
constexpr std::uint64_t kDirectionSalt = 0xd175ULL;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_samples_csv(const std::filesystem::path& path, const Eigen::MatrixXd& samples) {
    auto out = open_out(path);
    for (Eigen::Index c = 0; c < samples.cols(); ++c)
        out << (c ? "," : "") << "x" << (c + 1);
    out << "\n";
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < samples.cols(); ++c)
            out << (c ? "," : "") << fmt17(samples(r, c));
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::ordered_json plan_json(const SamplerPlan& plan) {
    nlohmann::ordered_json j;
    j["T"] = plan.T;
    j["t_stop"] = plan.t_stop;
    j["h"] = plan.h;
    j["n_windows"] = plan.windows.size();
    j["k"] = plan.k;
    j["D"] = plan.D;
    j["m"] = plan.m;
    j["eps_err"] = plan.eps_err;
    j["eps1"] = plan.eps1;
    j["gamma_const"] = plan.gamma_const;
    j["gamma_phi"] = plan.gamma_phi;
    j["R"] = plan.R;
    j["sigma"] = plan.sigma;
    j["L_tilde"] = plan.L_tilde;
    j["c_T"] = plan.c_T;
    j["dim"] = plan.dim;
    return j;
}

std::unique_ptr<ScoreOracle> make_oracle(const ExperimentConfig& c,
                                         const SmoothedTarget& normalized) {
    if (c.oracle == "noisy")
        return noisy_oracle(normalized, c.eps_err, c.noise_features,
                            chain_seed(c.seed, kOracleSalt));
    return exact_oracle(normalized);
}

void apply_corrector(const ExperimentConfig& c, const SmoothedTarget& output_target,
                     Eigen::MatrixXd& samples) {
    const int d = output_target.dim();
    const double L = c.corrector_L.value_or(output_target.score_lipschitz());
    const double R = output_target.prior().radius > 0.0 ? output_target.prior().radius
                                                        : output_target.sigma();
    UlmcConfig ucfg = corrector_params(c.corrector_eps, d, L, R, output_target.sigma(),
                                       c.corrector_steps, c.friction_const, c.duration_const);
    if (c.corrector_step) ucfg.step = *c.corrector_step;
    auto score = [&output_target](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        output_target.score_q_into(x, g);
    };
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        Rng rng(chain_seed(c.seed ^ kCorrectorSalt, static_cast<std::uint64_t>(i)));
        samples.row(i) =
            ulmc_run(score, samples.row(i).transpose(), ucfg, rng).transpose();
    }
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& config) {
    const AtomicPrior prior = make_prior(config);
    const SmoothedTarget probe(prior, config.sigma, NoiseSchedule(1.0));
    PipelineResult result;
    result.plan = make_plan(probe, config.eps_err, config.eps1, config.overrides);
    const SmoothedTarget normalized = probe.normalized(result.plan.T);
    const auto oracle = make_oracle(config, normalized);
    result.report = run_batch(result.plan, *oracle, config.n_samples, config.seed,
                              resolve_threads(config.threads));
    if (config.corrector) {
        const SmoothedTarget output_target(prior, config.sigma, NoiseSchedule(result.plan.T));
        apply_corrector(config, output_target, result.report.samples);
    }
    return result;
}

void cmd_sample(const ExperimentConfig& config) {
    const PipelineResult res = run_pipeline(config);
    const std::filesystem::path dir(config.out_dir);
    write_samples_csv(dir / "samples.csv", res.report.samples);

    nlohmann::ordered_json j;
    j["plan"] = plan_json(res.plan);
    j["evals"] = res.report.evals;
    j["wall_ms"] = res.report.wall_ms;
    j["seed"] = res.report.seed;
    j["version"] = kVersion;
    auto jout = open_out(dir / "report.json");
    jout << j.dump(2) << "\n";
    if (!jout) throw IoError("write failed: report.json");

    auto cfg = open_out(dir / "resolved.ini");
    cfg << render_config(config);
    if (!cfg) throw IoError("write failed: resolved.ini");
}

namespace {

struct MetricRow {
    std::string method;
    double eps_err;
    std::uint64_t evals;
    double sw2, energy, ks;
};

// no timing column: benchmark.csv must be byte-reproducible for a fixed seed
MetricRow measure(const std::string& method, double eps, std::uint64_t evals,
                  const Eigen::MatrixXd& samples, const SampleSet& ref, int n_dirs,
                  std::uint64_t seed) {
    const SampleSet a = SampleSet::create(samples, method);
    Rng dir_rng(chain_seed(seed, kDirectionSalt));
    MetricRow row;
    row.method = method;
    row.eps_err = eps;
    row.evals = evals;
    row.sw2 = sliced_w2(a, ref, n_dirs, dir_rng);
    row.energy = energy_distance(a, ref);
    row.ks = ks_per_coordinate(a, ref);
    return row;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void cmd_benchmark(const ExperimentConfig& config) {
    const AtomicPrior prior = make_prior(config);
    const SmoothedTarget probe(prior, config.sigma, NoiseSchedule(1.0));
    const int d = probe.dim();

    Eigen::MatrixXd ref_points(config.n_reference, d);
    {
        Rng rng(chain_seed(config.seed, kReferenceSalt));
        for (int i = 0; i < config.n_reference; ++i)
            ref_points.row(i) = probe.sample_target(rng).transpose();
    }
    const SampleSet ref = SampleSet::create(std::move(ref_points), "target");

    std::vector<MetricRow> rows;
    std::ostringstream endpoint;
    endpoint << "method,eps_err,evals_per_chain,median_endpoint_error\n";

    for (double eps : config.eps_err_list) {
        ExperimentConfig local = config;
        local.eps_err = eps;
        const SamplerPlan plan = make_plan(probe, eps, config.eps1, config.overrides);
        const SmoothedTarget normalized = probe.normalized(plan.T);
        const auto oracle = make_oracle(local, normalized);
        const int threads = resolve_threads(config.threads);

        BatchReport rep = run_batch(plan, *oracle, config.n_samples, config.seed, threads);
        rows.push_back(measure("collocation", eps, rep.evals, rep.samples, ref, config.n_dirs,
                               config.seed));
        const std::uint64_t budget = rep.evals / static_cast<std::uint64_t>(config.n_samples);

        // Euler at the matched per-chain budget.
        {
            Eigen::MatrixXd es(config.n_samples, d);
            const std::uint64_t before = oracle->eval_count();
            for (int i = 0; i < config.n_samples; ++i) {
                Rng rng(chain_seed(config.seed ^ kEulerSalt, static_cast<std::uint64_t>(i)));
                es.row(i) =
                    euler_chain(plan, *oracle, static_cast<int>(budget), rng).transpose();
            }
            rows.push_back(measure("euler", eps, oracle->eval_count() - before, es, ref,
                                   config.n_dirs, config.seed));
        }

        // Endpoint trajectory error against the high-accuracy reference.
        auto drift = [&normalized](double t, const Eigen::VectorXd& y) {
            return normalized.drift(t, y);
        };
        std::vector<double> errs_c, errs_e;
        for (int i = 0; i < config.n_trajectories; ++i) {
            Rng rng(chain_seed(config.seed, 0xe0ULL + static_cast<std::uint64_t>(i)));
            const Eigen::VectorXd y0 = rng.gaussian_vector(d);
            const Eigen::VectorXd truth = reference_solve(drift, y0, 0.0, plan.t_stop, 1e-10);
            errs_c.push_back((solve_from(plan, *oracle, y0) - truth).norm());
            errs_e.push_back(
                (euler_from(plan, *oracle, static_cast<int>(budget), y0) - truth).norm());
        }
        endpoint << "collocation," << fmt17(eps) << "," << budget << ","
                 << fmt17(median(errs_c)) << "\n";
        endpoint << "euler," << fmt17(eps) << "," << budget << "," << fmt17(median(errs_e))
                 << "\n";
    }

    const std::filesystem::path dir(config.out_dir);
    auto out = open_out(dir / "benchmark.csv");
    out << "method,eps_err,evals,sliced_w2,energy_dist,ks\n";
    for (const auto& r : rows)
        out << r.method << "," << fmt17(r.eps_err) << "," << r.evals << "," << fmt17(r.sw2)
            << "," << fmt17(r.energy) << "," << fmt17(r.ks) << "\n";
    if (!out) throw IoError("write failed: benchmark.csv");

    auto out2 = open_out(dir / "endpoint_error.csv");
    out2 << endpoint.str();
    if (!out2) throw IoError("write failed: endpoint_error.csv");
}

void cmd_diagnose(const ExperimentConfig& config) {
    const AtomicPrior prior = make_prior(config);
    const SmoothedTarget probe(prior, config.sigma, NoiseSchedule(1.0));
    const SamplerPlan plan = make_plan(probe, config.eps_err, config.eps1, config.overrides);
    const SmoothedTarget target = probe.normalized(plan.T);
    const auto oracle = exact_oracle(target);
    const int d = target.dim();
    const std::filesystem::path dir(config.out_dir);

    // mid-run trajectory state shared by several checks
    const auto mid_window = plan.windows[plan.windows.size() / 2];
    const double t_mid = mid_window.first;
    Rng rng(config.seed);
    const Eigen::VectorXd y_init = rng.gaussian_vector(d);
    auto drift = [&target](double t, const Eigen::VectorXd& y) { return target.drift(t, y); };
    const Eigen::VectorXd y_mid =
        t_mid > 0.0 ? reference_solve(drift, y_init, 0.0, t_mid, 1e-10) : y_init;

    {
        const LowDegreeProfile prof = lowdegree_profile(target, y_mid, t_mid, plan.h,
                                                        {2, 4, 6, 8, 10, 12}, 200);
        auto out = open_out(dir / "lowdegree.csv");
        out << "k,sup_error\n";
        for (size_t i = 0; i < prof.degrees.size(); ++i)
            out << prof.degrees[i] << "," << fmt17(prof.sup_errors[i]) << "\n";
        if (!out) throw IoError("write failed: lowdegree.csv");
    }
    {
        auto out = open_out(dir / "smoothness.csv");
        out << "t,gap,max_norm,bound,pass\n";
        for (double gap : {1.0, 2.0, 4.0}) {
            if (gap > plan.T) continue;
            const double t = plan.T - gap;
            Rng srng(chain_seed(config.seed, 0x57ULL));
            const SmoothnessReport rep = smoothness_check(target, t, 200, srng);
            out << fmt17(t) << "," << fmt17(gap) << "," << fmt17(rep.max_norm) << ","
                << fmt17(rep.bound) << "," << (rep.pass ? 1 : 0) << "\n";
        }
        if (!out) throw IoError("write failed: smoothness.csv");
    }
    {
        const double budget =
            std::sqrt(static_cast<double>(d)) + std::sqrt(std::log(1.0 / config.eps1));
        const double delta = 1.0 / (6.0 * budget);
        Rng crng(chain_seed(config.seed, 0xc0ULL));
        const CouplingReport rep =
            coupling_check(target, plan.T - 1.0, delta, config.eps1, 1000, crng);
        auto out = open_out(dir / "coupling.csv");
        out << "t,delta,bound,trials_used,violations\n";
        out << fmt17(plan.T - 1.0) << "," << fmt17(delta) << "," << fmt17(rep.bound) << ","
            << rep.trials_used << "," << rep.violations << "\n";
        if (!out) throw IoError("write failed: coupling.csv");
    }
    {
        const CollocationBasis basis(plan.D, t_mid, plan.h);
        Rng prng(chain_seed(config.seed, 0xccULL));
        const double ratio = contraction_check(*oracle, basis, y_mid, 100, prng);
        auto out = open_out(dir / "contraction.csv");
        out << "n_pairs,max_ratio,limit\n";
        out << 100 << "," << fmt17(ratio)
            << "," << fmt17(plan.L_tilde * plan.gamma_phi * plan.h * 1.05) << "\n";
        if (!out) throw IoError("write failed: contraction.csv");
    }
    {
        auto out = open_out(dir / "derivatives.csv");
        out << "order,fd_step,inf_norm,cancellation\n";
        for (int order = 1; order <= 4; ++order) {
            const double step = 1e-3;
            const DriftDerivative dd = drift_time_derivative(target, y_mid, t_mid, order, step);
            out << order << "," << fmt17(step) << "," << fmt17(dd.inf_norm) << ","
                << (dd.cancellation ? 1 : 0) << "\n";
        }
        if (!out) throw IoError("write failed: derivatives.csv");
    }
}

std::string basis_info(int d_max) {
    std::ostringstream out;
    out << "D,gamma_phi\n";
    for (int D = 1; D <= d_max; ++D)
        out << D << "," << fmt17(CollocationBasis(D, 0.0, 1.0).gamma()) << "\n";
    return out.str();
}

}  // namespace cds
