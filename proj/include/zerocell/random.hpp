#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace zerocell {

// SplitMix64 finisher, used to derive well-separated child seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return splitmix64(master_seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Deterministic random stream. The mt19937_64 output sequence is fixed by the
// standard and all variates are derived from it with explicit arithmetic, so
// identical seeds reproduce identical draws on any platform.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream child(std::uint64_t master_seed, std::uint64_t stream_index) {
        return RandomStream(derive_stream_seed(master_seed, stream_index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate = 1.0) {
        if (!(rate > 0.0)) throw std::domain_error("exponential: requires rate > 0");
        return -std::log1p(-uniform()) / rate;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // Box-Muller; 1 - u keeps the logarithm argument in (0, 1].
        const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
        const double theta = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Poisson count by accumulating unit-rate interarrival times.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::domain_error("poisson: requires mean >= 0");
        if (mean > 2e6) throw std::domain_error("poisson: mean beyond supported scale");
        std::uint64_t count = 0;
        double clock = exponential();
        while (clock <= mean) {
            ++count;
            clock += exponential();
        }
        return count;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace zerocell
