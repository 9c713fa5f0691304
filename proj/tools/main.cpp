#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cds/cli_runner.hpp"
#include "cds/picard.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config file")->required();
    cmd->add_option("--seed", f.seed, "override run seed");
    cmd->add_option("--out", f.out_dir, "override output directory");
    cmd->add_option("--threads", f.threads, "worker threads (0 = auto)");
}

cds::ExperimentConfig load(const CommonFlags& f) {
    cds::ExperimentConfig c = cds::parse_config(f.config_path);
    if (f.seed) c.seed = *f.seed;
    if (f.out_dir) c.out_dir = *f.out_dir;
    if (f.threads) c.threads = *f.threads;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Windowed collocation sampler for smoothed atomic targets"};
    app.require_subcommand(1);

    CommonFlags sample_flags, bench_flags, diag_flags;
    auto* sample = app.add_subcommand("sample", "draw samples, write CSV and report");
    add_common(sample, sample_flags);
    auto* bench = app.add_subcommand("benchmark", "accuracy/cost table vs the Euler baseline");
    add_common(bench, bench_flags);
    auto* diag = app.add_subcommand("diagnose", "structural diagnostics CSVs");
    add_common(diag, diag_flags);

    int basis_max = 32;
    auto* basis = app.add_subcommand("basis-info", "per-D collocation basis constants");
    basis->add_option("--max-degree", basis_max, "largest node count to report")
        ->check(CLI::Range(1, 256));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) cds::cmd_sample(load(sample_flags));
        else if (bench->parsed()) cds::cmd_benchmark(load(bench_flags));
        else if (diag->parsed()) cds::cmd_diagnose(load(diag_flags));
        else if (basis->parsed()) std::cout << cds::basis_info(basis_max);
    } catch (const cds::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cds::PicardDivergence& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const cds::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
