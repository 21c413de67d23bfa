#pragma once

#include <cstdint>

namespace ddkit {

// Deterministic xoshiro-free PRNG stack: splitmix64 for stream derivation,
// explicit Box-Muller for normals. Everything here is reproducible across
// platforms and thread schedules, which the std:: distributions are not.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable stream id for (master seed, index) pairs; used so that parallel
// sweeps draw identical numbers regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL + index * 0xd1b54a32d192ed03ULL);
    splitmix64(s);
    return s;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so trivially related seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in (0, 1]; never returns 0 so it is safe under log()
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; draws exactly two uniforms per call
    double gaussian();

  private:
    std::uint64_t state_;
};

}  // namespace ddkit
