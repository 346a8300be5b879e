#ifndef TWTSCHED_RNG_HPP
#define TWTSCHED_RNG_HPP

#include <cstdint>

// Small deterministic generator (splitmix64). The standard <random>
// distributions are implementation-defined, which would break the
// byte-identical-output guarantees of the harness, so sampling is done by
// hand on top of the raw 64-bit stream.

namespace twtsched {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a job key.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t s = base ^ (key * 0x9e3779b97f4a7c15ULL + 0x7f4a7c159e3779b9ULL);
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Unbiased enough for scheduling tie-breaks; n must be positive.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace twtsched

#endif
