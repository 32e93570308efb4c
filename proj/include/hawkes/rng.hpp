#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

// SplitMix64 finalizer; good avalanche, standard constants.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent substream seed from (master, stream, replica).
// Counter-based: the mapping is pure, so worker count and scheduling order
// cannot change which stream a replica sees.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t replica = 0) {
    std::uint64_t s = splitmix64(master ^ splitmix64(stream + 0x51ed270b0a1f2c3dULL));
    return splitmix64(s ^ splitmix64(replica + 0xc2b2ae3d27d4eb4fULL));
}

// Thin wrapper over mt19937_64 with hand-rolled variate transforms, so that
// identical seeds give identical draws independent of libstdc++ internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on (0,1): 53-bit mantissa, never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Product method; fine for the small means used here (offspring counts).
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int n = 0;
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace hawkes
