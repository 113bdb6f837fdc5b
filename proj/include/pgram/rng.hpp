#pragma once

#include <cstdint>

namespace pgram {

/// Deterministic splitmix64 stream. Fixed algorithm so that seeded runs are
/// reproducible across platforms and standard library versions.
class rng {
public:
    explicit rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound). Rejection-free modulo; the bias is
    /// immaterial for test-data generation and determinism is what matters.
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

    /// Integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Child stream derived from this seed and a stream index.
    static rng substream(std::uint64_t seed, std::uint64_t stream) {
        rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        mix.next();
        return mix;
    }

private:
    std::uint64_t state_;
};

} // namespace pgram
