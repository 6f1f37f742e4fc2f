#pragma once

#include <cstdint>

namespace brl {

/// Deterministic pseudo-random source used everywhere in the library.
///
/// The core generator is SplitMix64 (Steele, Lea & Flood 2014): a Weyl
/// sequence counter passed through a 64-bit finalizer. It is seekable,
/// has no warm-up, and two instances never share state, which makes
/// per-episode / per-worker streams cheap to derive. The integer stream
/// is bit-identical on every platform; normal deviates additionally
/// depend on the platform's log/sqrt/cos, which in practice agree on
/// IEEE-754 doubles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n);

    int uniform_index(int n) { return static_cast<int>(uniform_int(static_cast<std::uint64_t>(n))); }

    /// Normal deviate via Box-Muller; the spare deviate is cached.
    double normal(double mu, double sigma);

    bool bernoulli(double p) { return uniform01() < p; }

    /// Stateless seed derivation: mixes (seed, stream) into an independent
    /// seed. Used for per-episode and per-worker streams so that scheduling
    /// cannot change the data.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace brl
