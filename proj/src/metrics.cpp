#include "cds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cds {

SampleSet SampleSet::create(Eigen::MatrixXd points, std::string label) {
    if (points.rows() < 2 || points.cols() < 1)
        throw std::invalid_argument("SampleSet: need at least 2 points in d >= 1");
    if (!points.allFinite()) throw std::invalid_argument("SampleSet: non-finite entries");
    return SampleSet{std::move(points), std::move(label)};
}

namespace {

// Empirical quantile with the (n-1)-interval linear interpolation convention.
double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * (s.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] * (1.0 - frac) + s[hi] * frac;
}

double w2_1d_squared(std::vector<double>& a, std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("w2_1d: empty input");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() != b.size()) {
        const size_t n = std::max(a.size(), b.size());
        std::vector<double> aq(n), bq(n);
        for (size_t i = 0; i < n; ++i) {
            const double q = (n == 1) ? 0.5 : static_cast<double>(i) / (n - 1);
            aq[i] = quantile_sorted(a, q);
            bq[i] = quantile_sorted(b, q);
        }
        a = std::move(aq);
        b = std::move(bq);
    }
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

Eigen::MatrixXd subsample(const Eigen::MatrixXd& pts, int cap, std::uint64_t seed) {
    if (pts.rows() <= cap) return pts;
    Rng rng(seed);
    // Floyd-style reservoir would be overkill; a shuffled index prefix is fine.
    std::vector<int> idx(static_cast<size_t>(pts.rows()));
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    for (int i = 0; i < cap; ++i) {
        const int j = i + static_cast<int>(rng.uniform() * (idx.size() - i));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    Eigen::MatrixXd out(cap, pts.cols());
    for (int i = 0; i < cap; ++i) out.row(i) = pts.row(idx[static_cast<size_t>(i)]);
    return out;
}

double mean_pair_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < y.rows(); ++j) s += (x.row(i) - y.row(j)).norm();
    return s / (static_cast<double>(x.rows()) * static_cast<double>(y.rows()));
}

}  // namespace

double w2_1d(std::vector<double> a, std::vector<double> b) {
    return std::sqrt(w2_1d_squared(a, b));
}

double sliced_w2(const SampleSet& a, const SampleSet& b, int n_dirs, Rng& rng) {
    if (a.dim() != b.dim()) throw std::invalid_argument("sliced_w2: dimension mismatch");
    if (n_dirs < 1) throw std::invalid_argument("sliced_w2: need n_dirs >= 1");
    double acc = 0.0;
    for (int k = 0; k < n_dirs; ++k) {
        const Eigen::VectorXd dir = rng.unit_vector(a.dim());
        Eigen::VectorXd pa = a.points * dir;
        Eigen::VectorXd pb = b.points * dir;
        std::vector<double> va(pa.data(), pa.data() + pa.size());
        std::vector<double> vb(pb.data(), pb.data() + pb.size());
        acc += w2_1d_squared(va, vb);
    }
    return std::sqrt(acc / n_dirs);
}

double energy_distance(const SampleSet& a, const SampleSet& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("energy_distance: dimension mismatch");
    constexpr int kCap = 20000;
    const Eigen::MatrixXd x = subsample(a.points, kCap, 0x5eedU);
    const Eigen::MatrixXd y = subsample(b.points, kCap, 0x5eed5U);
    return 2.0 * mean_pair_distance(x, y) - mean_pair_distance(x, x) - mean_pair_distance(y, y);
}

double ks_per_coordinate(const SampleSet& a, const SampleSet& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("ks_per_coordinate: dimension mismatch");
    const double na = a.size(), nb = b.size();
    double worst = 0.0;
    for (int c = 0; c < a.dim(); ++c) {
        std::vector<double> va(a.points.col(c).data(), a.points.col(c).data() + a.size());
        std::vector<double> vb(b.points.col(c).data(), b.points.col(c).data() + b.size());
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        size_t i = 0, j = 0;
        double d = 0.0;
        while (i < va.size() && j < vb.size()) {
            const double v = std::min(va[i], vb[j]);
            while (i < va.size() && va[i] <= v) ++i;
            while (j < vb.size() && vb[j] <= v) ++j;
            d = std::max(d, std::abs(static_cast<double>(i) / na -
                                     static_cast<double>(j) / nb));
        }
        worst = std::max(worst, d);
    }
    return worst;
}

MomentErrors moment_errors(const SampleSet& a, const SmoothedTarget& target) {
    if (a.dim() != target.dim())
        throw std::invalid_argument("moment_errors: dimension mismatch");
    const Eigen::VectorXd mean = a.points.colwise().mean();
    const Eigen::MatrixXd centered = a.points.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / double(a.size());
    MomentErrors e;
    e.mean_error = (mean - target.mean()).norm();
    const Eigen::MatrixXd diff = cov - target.covariance();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff);
    e.cov_error = es.eigenvalues().cwiseAbs().maxCoeff();
    return e;
}

}  // namespace cds
