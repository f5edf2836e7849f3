#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pmsim {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Stateless 64-bit mixer (splitmix64 finalizer).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable per-run seed: hash of (master_seed, run_index). Independent of how
// runs are scheduled across threads.
inline std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    return splitmix64(splitmix64(master_seed) + 0x9e3779b97f4a7c15ULL * (run_index + 1));
}

// Deterministic random stream. std::mt19937_64 output is pinned by the
// standard; the distributions below are implemented here rather than with
// std::*_distribution (whose sequences are implementation-defined) so that
// seeded results are identical across toolchains.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; one variate per call. The first
    // uniform is drawn from (0, 1] so the log stays finite.
    double normal() {
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n) by masked rejection (unbiased).
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t mask = ~0ULL >> std::countl_zero(n - 1);
        std::uint64_t v;
        do {
            v = engine_() & mask;
        } while (v >= n);
        return v;
    }

    // Fisher-Yates shuffle driven by bounded().
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pmsim
