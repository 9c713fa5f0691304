#pragma once

#include <stdexcept>
#include <string>

#include "cds/config.hpp"
#include "cds/sampler.hpp"

namespace cds {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

/// Full sampling pipeline shared by the CLI and the acceptance tests:
/// plan, normalized-target oracle, batch run, optional corrector pass.
struct PipelineResult {
    SamplerPlan plan;
    BatchReport report;  // samples in output coordinates
};

PipelineResult run_pipeline(const ExperimentConfig& config);

/// Writes samples.csv, report.json and resolved.ini into config.out_dir.
void cmd_sample(const ExperimentConfig& config);

/// Writes benchmark.csv (distribution metrics at matched budgets) and
/// endpoint_error.csv (median trajectory error vs the reference solver).
void cmd_benchmark(const ExperimentConfig& config);

/// Writes lowdegree.csv, smoothness.csv, coupling.csv, contraction.csv and
/// derivatives.csv into config.out_dir.
void cmd_diagnose(const ExperimentConfig& config);

/// Per-D basis constants, returned as text (one "D gamma_phi" row per line).
std::string basis_info(int d_max);

}  // namespace cds
