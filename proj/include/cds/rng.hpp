#pragma once

#include <cstdint>
#include <cmath>

#include <Eigen/Core>

namespace cds {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** with splitmix64 seeding. Self-contained so that sample
/// streams are bit-reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_cached_gauss_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (has_cached_gauss_) {
            has_cached_gauss_ = false;
            return cached_gauss_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_gauss_ = r * std::sin(a);
        has_cached_gauss_ = true;
        return r * std::cos(a);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index d) {
        Eigen::VectorXd v(d);
        for (Eigen::Index i = 0; i < d; ++i) v[i] = gaussian();
        return v;
    }

    Eigen::VectorXd unit_vector(Eigen::Index d) {
        Eigen::VectorXd v = gaussian_vector(d);
        double n = v.norm();
        while (n == 0.0) {  // astronomically unlikely
            v = gaussian_vector(d);
            n = v.norm();
        }
        return v / n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double cached_gauss_ = 0.0;
    bool has_cached_gauss_;
};

/// Seed for chain `c` derived from a run seed. Independent of the total
/// chain count, so growing a batch never perturbs earlier chains.
inline std::uint64_t chain_seed(std::uint64_t run_seed, std::uint64_t chain) {
    std::uint64_t sm = run_seed ^ (0x9e3779b97f4a7c15ULL * (chain + 1));
    return splitmix64(sm);
}

}  // namespace cds
