#pragma once

#include <cstdint>
#include <random>

namespace cnl {

// Portable seeded randomness. mt19937_64 output is fully specified by the
// standard, and we convert to doubles ourselves, so identical seeds produce
// identical streams on every platform and standard library.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Sub-stream derivation: one independent stream per (tag, index) pair,
    // e.g. one stream per product or per customer type.
    static Rng stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
        return Rng(splitmix64(splitmix64(seed ^ (0xa0761d6478bd642full * tag)) + index));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cnl
