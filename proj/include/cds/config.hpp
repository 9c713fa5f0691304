#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cds/mixture.hpp"
#include "cds/sampler.hpp"

namespace cds {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully-resolved experiment description. Parsed from an INI-style file with
/// sections [target], [plan], [corrector], [run]; unknown sections or keys
/// are rejected. render_config() emits text that re-parses to an identical
/// config.
struct ExperimentConfig {
    // [target]
    std::string preset = "two_atoms_d2";  // ignored when atoms_file set
    std::string atoms_file;
    std::optional<int> atoms_dim;  // disambiguates a trailing weight column
    double sigma = 1.0;

    // [plan]
    double eps_err = 1e-4;
    double eps1 = 0.1;
    PlanOverrides overrides;

    // [corrector]
    bool corrector = false;
    double corrector_eps = 0.1;
    double friction_const = 1.0;
    double duration_const = 3.0;
    std::optional<double> corrector_L;
    std::optional<double> corrector_step;
    int corrector_steps = 32;

    // [run]
    int n_samples = 100;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string oracle = "exact";  // exact | noisy
    int noise_features = 64;
    std::vector<int> euler_steps = {100, 1000, 10000};
    std::vector<double> eps_err_list = {1e-2, 1e-4, 1e-6};
    int n_reference = 100000;
    int n_trajectories = 100;
    int n_dirs = 64;
    int threads = 0;  // 0 = auto
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");
std::string render_config(const ExperimentConfig& config);

/// Atoms from the preset name or the atoms file (one atom per line,
/// whitespace-separated reals, optional trailing weight column, '#'
/// comments).
AtomicPrior make_prior(const ExperimentConfig& config);
AtomicPrior load_atoms(const std::string& path, std::optional<int> expect_dim = {});

}  // namespace cds
