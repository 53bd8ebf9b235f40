#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace hodgeflow {

// Deterministic, platform-independent RNG used everywhere randomness is needed
// (initial phases, point clouds, sweep substreams). Standard splitmix64: the
// output sequence is a documented function of the 64-bit seed, so runs are
// reproducible across compilers and machines, unlike distribution adapters
// from <random>.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [0, high).
    double next_double(double high) { return next_double() * high; }

    Eigen::VectorXd uniform_vector(Eigen::Index n, double high) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = next_double(high);
        return v;
    }

  private:
    std::uint64_t state_;
};

// One mixing round of splitmix64, used to fold stream indices into a seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based substream derivation: the seed for substream (a, b, c) of a
// root seed is obtained by alternately xor-ing and mixing, so distinct index
// tuples give independent streams and inserting grid points never shifts the
// streams of existing ones.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(root);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

}  // namespace hodgeflow
