#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cryptofactor {

/// FNV-1a 64-bit hash; stable across platforms (used for substream tags
/// and config hashes).
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// splitmix64 step; used to derive independent substreams from (seed, tag).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded random stream with project-owned distributions. The mt19937_64
/// engine output is pinned by the standard and the distribution code lives
/// here, so a (seed, tag) pair produces identical draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream derived from a root seed and a call tag; streams with
    /// different tags are statistically independent.
    static Rng derive(std::uint64_t seed, std::uint64_t tag) {
        std::uint64_t s = seed;
        splitmix64(s);
        s ^= 0x6a09e667f3bcc909ULL + tag * 0x9e3779b97f4a7c15ULL;
        return Rng(splitmix64(s));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; one spare value cached.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Uniform integer in [0, n); Lemire's unbiased multiply-shift method.
    std::uint64_t bounded(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cryptofactor
