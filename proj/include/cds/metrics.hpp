#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cds/mixture.hpp"
#include "cds/rng.hpp"

namespace cds {

/// Labeled sample matrix, one point per row. Construction validates n >= 2
/// and finiteness.
struct SampleSet {
    Eigen::MatrixXd points;
    std::string label;

    static SampleSet create(Eigen::MatrixXd points, std::string label);

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

/// Exact W2 between 1D empirical laws via sorted pairing. Unequal sizes are
/// reduced to a common grid of quantiles.
double w2_1d(std::vector<double> a, std::vector<double> b);

/// Root-mean over random unit directions of the squared 1D W2 of the
/// projections.
double sliced_w2(const SampleSet& a, const SampleSet& b, int n_dirs, Rng& rng);

/// 2 E|a-b| - E|a-a'| - E|b-b'| over all pairs (V-statistic, so identical
/// sets give exactly 0). Sets larger than 2e4 points are subsampled with a
/// fixed internal seed.
double energy_distance(const SampleSet& a, const SampleSet& b);

/// Max over coordinates of the two-sample Kolmogorov-Smirnov statistic.
double ks_per_coordinate(const SampleSet& a, const SampleSet& b);

struct MomentErrors {
    double mean_error = 0.0;  // euclidean
    double cov_error = 0.0;   // spectral norm
};

/// Empirical moments of a against the target's closed forms.
MomentErrors moment_errors(const SampleSet& a, const SmoothedTarget& target);

}  // namespace cds
