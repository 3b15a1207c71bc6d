#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace hdcd {

/// SplitMix64 step. Fast, counter-friendly, and good enough statistically
/// for multiplier streams and simulation noise.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream key from a master seed and a stream index.
/// Distinct indices give unrelated streams, so parallel work items can each
/// own a generator and results do not depend on scheduling order.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double strictly inside (0, 1).
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [1, hi]. hi must be >= 1.
    int next_int(int hi) {
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi)) +
               1;
    }

private:
    std::uint64_t state_;
};

/// Standard normal generator: Box-Muller over SplitMix64 uniforms. The
/// method is pinned so a fixed (seed, index) always yields the same
/// sequence; reimplementations elsewhere can match it exactly.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t key) : gen_(key) {}

    NormalStream(std::uint64_t seed, std::uint64_t index)
        : gen_(stream_key(seed, index)) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = gen_.next_unit();
        const double u2 = gen_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Eigen::VectorXd draw(Eigen::Index n) {
        Eigen::VectorXd out(n);
        for (Eigen::Index i = 0; i < n; ++i) out(i) = next();
        return out;
    }

private:
    SplitMix64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Reproducible per-replicate multiplier source: the same (seed, replicate)
/// always produces bit-identical draws, and distinct replicates are
/// independent streams.
struct MultiplierStream {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    NormalStream stream() const { return NormalStream(seed, replicate); }

    Eigen::VectorXd draw(Eigen::Index n) const { return stream().draw(n); }
};

}  // namespace hdcd
