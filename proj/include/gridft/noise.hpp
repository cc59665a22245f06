#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gridft {

// splitmix64 finalizer. Statistically strong enough to key independent
// streams from (seed, index) paths.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Derive a child stream key. Chaining derive() calls walks a tree of
// statistically independent streams, which is what makes trial-parallel
// execution order-independent.
inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t index) {
    return mix64(key ^ mix64(index * kGolden + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    return derive_stream(derive_stream(key, a), b);
}

// Counter-based RNG: output i is mix64(key + i*golden), i.e. splitmix64
// seeded at `key`. No state beyond the counter, so a stream is a pure
// function of its key, independent of what other streams do.
class RngStream {
public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t key) : key_(key) {}
    RngStream(std::uint64_t master, std::uint64_t a, std::uint64_t b)
        : key_(derive_stream(master, a, b)) {}

    std::uint64_t next_u64() {
        ctr_ += kGolden;
        return mix64(key_ + ctr_);
    }

    // [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]; safe as a log() argument.
    double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller, second value cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    // Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw std::domain_error("bounded(0)");
        unsigned __int128 m = (unsigned __int128)next_u64() * n;
        auto lo = (std::uint64_t)m;
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = (unsigned __int128)next_u64() * n;
                lo = (std::uint64_t)m;
            }
        }
        return (std::uint64_t)(m >> 64);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// The two biological noise channels. sigma is the std of additive Gaussian
// noise on every physical neuron output; p_fail the per-synapse failure
// probability (a failed synapse contributes exactly zero downstream).
struct NoiseModel {
    double sigma = 0.0;
    double p_fail = 0.0;

    NoiseModel() = default;
    NoiseModel(double sigma_, double p_fail_) : sigma(sigma_), p_fail(p_fail_) {
        if (sigma < 0.0) throw std::domain_error("NoiseModel: sigma < 0");
        if (p_fail < 0.0 || p_fail > 1.0) throw std::domain_error("NoiseModel: p_fail outside [0,1]");
    }

    bool noiseless() const { return sigma == 0.0 && p_fail == 0.0; }
};

// Draw the additive output noise for one neuron. sigma=0 consumes no
// randomness, so noiseless runs are bit-exact replicas of the pure math.
inline double sample_output_noise(RngStream& rng, const NoiseModel& m) {
    if (m.sigma == 0.0) return 0.0;
    return m.sigma * rng.gaussian();
}

// One synapse: true = intact. p_fail=0 consumes no randomness (see above).
inline bool sample_synapse(RngStream& rng, const NoiseModel& m) {
    if (m.p_fail <= 0.0) return true;
    if (m.p_fail >= 1.0) return false;
    return !(rng.uniform() < m.p_fail);
}

inline std::vector<std::uint8_t> sample_synapse_mask(RngStream& rng, const NoiseModel& m,
                                                     std::size_t fan_in) {
    std::vector<std::uint8_t> mask(fan_in, 1);
    if (m.p_fail > 0.0)
        for (std::size_t i = 0; i < fan_in; ++i) mask[i] = sample_synapse(rng, m) ? 1 : 0;
    return mask;
}

// E[cos(2*pi*xi)] for xi ~ N(0, sigma^2): the factor by which Gaussian phase
// noise shrinks the mean of every cosine read. Drives threshold tuning.
inline double attenuation_factor(double sigma) {
    if (sigma < 0.0) throw std::domain_error("attenuation_factor: sigma < 0");
    return std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma);
}

// Weight rescaling that restores the expected value of a masked sum to its
// p=0 design point. At p=1 everything is dead regardless of weight; clamping
// to zero avoids inf*0 while keeping all activations at exactly 0.
inline double failure_compensation(double p_fail) {
    if (p_fail >= 1.0) return 0.0;
    return 1.0 / (1.0 - p_fail);
}

}  // namespace gridft
